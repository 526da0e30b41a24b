#include "stabsec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stabsec/policies.hpp"
#include "stabsec/rng.hpp"

namespace stabsec {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> make_weights(const std::string& spec, int count) {
  if (spec.empty()) throw std::invalid_argument("weights: empty spec");
  if (spec == "unit") return std::vector<double>(count, 1.0);
  if (spec == "adversarial-heavy") {
    std::vector<double> w(count);
    for (int i = 0; i < count; ++i) w[i] = i + 1;  // heaviest are least preferred
    return w;
  }
  if (spec.rfind("geometric(", 0) == 0 && spec.back() == ')') {
    double q = std::stod(spec.substr(10, spec.size() - 11));
    if (!(q > 0.0)) throw std::invalid_argument("weights: geometric ratio must be positive");
    std::vector<double> w(count);
    double cur = 1.0;
    for (int i = 0; i < count; ++i) {
      w[i] = cur;
      cur *= q;
      if (!(cur > 0.0)) cur = std::numeric_limits<double>::min();
    }
    return w;
  }
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("weights: cannot open file " + spec);
  std::vector<double> w;
  double v;
  while (in >> v) w.push_back(v);
  if (static_cast<int>(w.size()) != count)
    throw std::invalid_argument("weights: file holds " + std::to_string(w.size()) +
                                " values, need " + std::to_string(count));
  return w;
}

Instance build_instance(const ExperimentConfig& cfg) {
  int m = cfg.num_boys > 0 ? cfg.num_boys : cfg.num_girls;
  std::optional<std::vector<double>> gw, bw;
  if (!cfg.weights_spec.empty()) {
    if (cfg.criterion == Criterion::GirlWeight || cfg.policy_name == "weighted-girls")
      gw = make_weights(cfg.weights_spec, cfg.num_girls);
    if (cfg.criterion == Criterion::BoyWeight || cfg.policy_name == "weighted-boys" ||
        cfg.policy_name.rfind("reduce-boys:", 0) == 0)
      bw = make_weights(cfg.weights_spec, m);
  }
  return Instance(cfg.num_girls, m, std::move(gw), std::move(bw));
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.num_girls < 1) throw std::invalid_argument("config: n must be >= 1");
  Instance inst = build_instance(cfg);
  if (cfg.criterion == Criterion::GirlWeight && !inst.has_girl_weights())
    throw std::invalid_argument("config: girl-weight criterion without girl weights");
  if (cfg.criterion == Criterion::BoyWeight && !inst.has_boy_weights())
    throw std::invalid_argument("config: boy-weight criterion without boy weights");
  if (cfg.arrival.boy_count != 0 && cfg.arrival.boy_count != inst.num_boys())
    throw std::invalid_argument("config: arrival process sized for a different boy count");
  // constructing the policy surfaces shape errors (balance, weights) up front
  PolicyOptions opt;
  opt.gamma = cfg.gamma;
  (void)make_policy(cfg.policy_name, inst, opt, /*seed=*/0);
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("STABSEC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 std::vector<ExperimentRecord>* out_records) {
  validate_config(cfg);
  const Instance inst = build_instance(cfg);
  ArrivalProcess arrival = cfg.arrival;
  if (arrival.boy_count == 0) arrival = ArrivalProcess::uniform(inst.num_boys());
  const double optimum = optimum_value(inst, cfg.criterion);

  std::vector<ExperimentRecord> records(cfg.trials);
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int threads = resolve_threads(cfg.threads);

  auto worker = [&]() {
    PolicyOptions opt;
    opt.gamma = cfg.gamma;
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= cfg.trials || failed.load()) break;
      try {
        const std::uint64_t trial_seed =
            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
        Rng arrival_rng(derive_seed(trial_seed, 1));
        const std::uint64_t policy_seed = derive_seed(trial_seed, 2);

        std::vector<int> perm = sample_arrival(arrival, arrival_rng);
        auto policy = make_policy(cfg.policy_name, inst, opt, policy_seed);
        RunTrace trace = run_online(inst, perm, *policy, trial_seed);
        SatCounts c = satisfaction_counts(inst, trace.final_matching);

        ExperimentRecord& r = records[i];
        r.trial = i;
        r.seed = trial_seed;
        r.sat_girls = c.girls;
        r.sat_boys = c.boys;
        r.sat_pairs = c.pairs;
        r.sat_girl_weight = c.girl_weight;
        r.sat_boy_weight = c.boy_weight;
        r.optimum = optimum;
        r.ratio = c.by(cfg.criterion) / optimum;
        r.catastrophe = trace.catastrophe;
        r.conservative = is_conservative(trace, inst);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    }
  };

  if (threads <= 1 || cfg.trials == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  if (!cfg.output_path.empty()) {
    std::ofstream os(cfg.output_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + cfg.output_path);
    write_csv(os, cfg, records);
  }

  ExperimentSummary s;
  s.trials = cfg.trials;
  std::vector<double> ratios(records.size());
  double sum = 0;
  long long cats = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    ratios[i] = records[i].ratio;
    sum += ratios[i];
    if (records[i].catastrophe) ++cats;
  }
  s.mean_ratio = sum / static_cast<double>(ratios.size());
  double ss = 0;
  for (double r : ratios) ss += (r - s.mean_ratio) * (r - s.mean_ratio);
  s.std_dev = ratios.size() > 1 ? std::sqrt(ss / static_cast<double>(ratios.size() - 1)) : 0.0;
  std::sort(ratios.begin(), ratios.end());
  auto nearest_rank = [&](double p) {
    long long rank = static_cast<long long>(std::ceil(p / 100.0 * static_cast<double>(ratios.size())));
    if (rank < 1) rank = 1;
    return ratios[static_cast<std::size_t>(rank - 1)];
  };
  s.q5 = nearest_rank(5);
  s.q50 = nearest_rank(50);
  s.q95 = nearest_rank(95);
  s.catastrophe_rate = static_cast<double>(cats) / static_cast<double>(records.size());

  if (out_records) *out_records = std::move(records);
  return s;
}

const char* const kCsvHeader =
    "trial,seed,n,m,policy,criterion,sat_girls,sat_boys,sat_pairs,sat_girl_w,sat_boy_w,"
    "optimum,ratio,catastrophe,conservative";

void write_csv(std::ostream& os, const ExperimentConfig& cfg,
               const std::vector<ExperimentRecord>& records) {
  os << kCsvHeader << '\n';
  const int m = cfg.num_boys > 0 ? cfg.num_boys : cfg.num_girls;
  for (const ExperimentRecord& r : records) {
    os << r.trial << ',' << r.seed << ',' << cfg.num_girls << ',' << m << ',' << cfg.policy_name
       << ',' << criterion_name(cfg.criterion) << ',' << r.sat_girls << ',' << r.sat_boys << ','
       << r.sat_pairs << ',' << fmt_double(r.sat_girl_weight) << ',' << fmt_double(r.sat_boy_weight)
       << ',' << fmt_double(r.optimum) << ',' << fmt_double(r.ratio) << ','
       << catastrophe_name(r.catastrophe) << ',' << (r.conservative ? 1 : 0) << '\n';
  }
}

std::string summary_json(const ExperimentSummary& s) {
  std::ostringstream os;
  os << "{\"mean_ratio\":" << fmt_double(s.mean_ratio) << ",\"std\":" << fmt_double(s.std_dev)
     << ",\"quantiles\":{\"p5\":" << fmt_double(s.q5) << ",\"p50\":" << fmt_double(s.q50)
     << ",\"p95\":" << fmt_double(s.q95) << "},\"catastrophe_rate\":" << fmt_double(s.catastrophe_rate)
     << ",\"trials\":" << s.trials << "}";
  return os.str();
}

void dump_trace_jsonl(std::ostream& os, const RunTrace& trace) {
  for (const Decision& d : trace.decisions) {
    os << "{\"t\":" << d.time << ",\"relative_rank\":" << d.relative_rank << ",\"action\":";
    if (d.action)
      os << *d.action;
    else
      os << "\"skip\"";
    os << "}\n";
  }
}

}  // namespace stabsec
