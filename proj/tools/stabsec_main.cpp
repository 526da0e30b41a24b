#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stabsec/analysis.hpp"
#include "stabsec/arrival.hpp"
#include "stabsec/checks.hpp"
#include "stabsec/core.hpp"
#include "stabsec/experiment.hpp"
#include "stabsec/json_io.hpp"
#include "stabsec/policies.hpp"

namespace {

using namespace stabsec;

std::vector<double> read_doubles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::vector<int> read_ints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<int> out;
  int v;
  while (in >> v) out.push_back(v);
  return out;
}

ArrivalProcess parse_arrival(const std::string& spec, int boy_count) {
  if (spec == "uniform" || spec.empty()) return ArrivalProcess::uniform(boy_count);
  if (spec.rfind("d:", 0) == 0) return ArrivalProcess::adversarial(boy_count, read_doubles(spec.substr(2)));
  if (spec.rfind("perm:", 0) == 0) return ArrivalProcess::explicit_order(read_ints(spec.substr(5)));
  throw std::invalid_argument("arrival spec must be uniform, d:<p-file> or perm:<file>");
}

ExactDist parse_exact_dist(const std::string& spec, int n) {
  if (spec == "uniform") return ExactDist::make_uniform();
  if (spec == "half") return ExactDist::adversarial_half(n);
  if (spec == "recursion") {
    AdversarialRecursion rec = adversarial_recursion(n);
    std::vector<Rational> probs(rec.p.begin(), rec.p.end());
    return ExactDist::adversarial(std::move(probs));
  }
  if (spec.rfind("d:", 0) == 0) {
    std::ifstream in(spec.substr(2));
    if (!in) throw std::invalid_argument("cannot open " + spec.substr(2));
    std::vector<Rational> probs;
    std::string tok;
    while (in >> tok) probs.push_back(Rational::from_string(tok));
    return ExactDist::adversarial(std::move(probs));
  }
  throw std::invalid_argument("dist must be uniform, half, recursion or d:<file of rationals>");
}

int cmd_simulate(const std::string& policy, int n, int m, long long trials,
                 const std::string& arrival, double gamma, const std::string& weights,
                 const std::string& criterion, std::uint64_t seed, const std::string& out,
                 int threads, const std::string& trace_path) {
  ExperimentConfig cfg;
  cfg.policy_name = policy;
  cfg.criterion = criterion_from_name(criterion);
  cfg.num_girls = n;
  cfg.num_boys = m > 0 ? m : n;
  cfg.trials = trials;
  cfg.arrival = parse_arrival(arrival, cfg.num_boys);
  cfg.gamma = gamma;
  cfg.weights_spec = weights;
  cfg.master_seed = seed;
  cfg.output_path = out;
  cfg.threads = threads;

  if (!trace_path.empty()) {
    // debug dump of trial 0 before the full run
    Instance inst = build_instance(cfg);
    std::uint64_t trial_seed = derive_seed(cfg.master_seed, 0);
    Rng arrival_rng(derive_seed(trial_seed, 1));
    std::vector<int> perm = sample_arrival(cfg.arrival, arrival_rng);
    PolicyOptions opt;
    opt.gamma = cfg.gamma;
    auto pol = make_policy(cfg.policy_name, inst, opt, derive_seed(trial_seed, 2));
    RunTrace trace = run_online(inst, perm, *pol, trial_seed);
    std::ofstream os(trace_path, std::ios::binary);
    dump_trace_jsonl(os, trace);
  }

  ExperimentSummary s = run_experiment(cfg);
  std::string json = summary_json(s);
  std::cout << json << "\n";
  if (!out.empty()) {
    std::ofstream os(out + ".summary.json", std::ios::binary);
    os << json << "\n";
  }
  return 0;
}

void print_dp_json(const DpResult& dp, const std::string& extra = "") {
  std::cout << "{\"n\":" << dp.n << ",\"criterion\":\"" << criterion_name(dp.criterion)
            << "\",\"distribution\":\"" << dp.distribution << "\",\"value_num\":\""
            << dp.value.num().to_string() << "\",\"value_den\":\"" << dp.value.den().to_string()
            << "\",\"value\":" << dp.value.to_double() << extra << "}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online stable-matching simulation lab"};
  app.require_subcommand(1);

  // simulate
  std::string policy = "rwy", arrival = "uniform", weights, criterion = "boys", out, trace_path;
  int n = 100, m = 0, threads = 0;
  long long trials = 100;
  double gamma = 0.15;
  std::uint64_t seed = 1;
  auto* sim = app.add_subcommand("simulate", "run Monte Carlo trials of an online policy");
  sim->add_option("--policy", policy, "policy name")->required();
  sim->add_option("--n", n, "number of girls")->required();
  sim->add_option("--m", m, "number of boys (default: n)");
  sim->add_option("--trials", trials, "trial count")->required();
  sim->add_option("--arrival", arrival, "uniform | d:<p-file> | perm:<file>");
  sim->add_option("--gamma", gamma, "three-phase policy parameter in (0, 0.2)");
  sim->add_option("--weights", weights, "unit | geometric(q) | adversarial-heavy | <file>");
  sim->add_option("--criterion", criterion, "girls|boys|pairs|girl-weight|boy-weight");
  sim->add_option("--seed", seed, "master seed")->required();
  sim->add_option("--out", out, "CSV output path");
  sim->add_option("--threads", threads, "worker threads (0 = all cores)");
  sim->add_option("--trace", trace_path, "dump trial 0 decisions as JSON lines");

  // analyze subcommands
  auto* analyze = app.add_subcommand("analyze", "exact values and bounds");
  analyze->require_subcommand(1);
  int an = 4, cap = -1;
  std::string adist = "uniform", acrit = "girls";
  auto* dp = analyze->add_subcommand("dp", "optimal online value by exact game-tree induction");
  dp->add_option("--n", an, "instance size")->required();
  dp->add_option("--criterion", acrit, "girls|boys|pairs");
  dp->add_option("--dist", adist, "uniform | half | recursion | d:<file>");
  dp->add_option("--cap", cap, "override the size cap");

  int rn = 7, rcap = -1;
  auto* rec = analyze->add_subcommand("recursion", "self-referential adversarial distribution");
  rec->add_option("--n", rn, "number of steps")->required();
  rec->add_option("--cap", rcap, "override the size cap");

  int bn = 100;
  auto* aux = analyze->add_subcommand("aux-bound", "exact satisfied-pairs upper bound");
  aux->add_option("--n", bn, "even instance size")->required();

  int on = 8, ocap = -1;
  auto* aopt = analyze->add_subcommand("aux-opt", "optimal pre-committed set in the two-stage game");
  aopt->add_option("--n", on, "even instance size")->required();
  aopt->add_option("--cap", ocap, "override the size cap");

  long long gk = 10000, gl = 100, gmc = 0;
  auto* ge = analyze->add_subcommand("good-event", "filter-minimum window probability");
  ge->add_option("--k", gk, "pool size")->required();
  ge->add_option("--l", gl, "window size")->required();
  ge->add_option("--mc", gmc, "Monte Carlo trials (0 = exact only)");

  // attack
  std::string atk_policy = "greedy";
  int atk_n = 10;
  std::uint64_t atk_seed = 1;
  auto* atk = app.add_subcommand("attack", "construct the adversarial order for a policy");
  atk->add_option("--policy", atk_policy, "policy name")->required();
  atk->add_option("--n", atk_n, "balanced instance size")->required();
  atk->add_option("--seed", atk_seed, "derandomization seed");

  // check
  std::string suite = "all";
  auto* chk = app.add_subcommand("check", "run an acceptance bundle");
  chk->add_option("suite", suite, "core-oracles | rwy-guarantee | adversarial-exact | bounds | all")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(policy, n, m, trials, arrival, gamma, weights, criterion, seed, out,
                          threads, trace_path);
    if (dp->parsed()) {
      ExactDist dist = parse_exact_dist(adist, an);
      DpResult res = optimal_online_value(an, dist, criterion_from_name(acrit),
                                          cap >= 0 ? std::optional<int>(cap) : std::nullopt);
      print_dp_json(res);
      return 0;
    }
    if (rec->parsed()) {
      AdversarialRecursion res =
          adversarial_recursion(rn, rcap >= 0 ? std::optional<int>(rcap) : std::nullopt);
      std::cout << "{\"n\":" << rn << ",\"v\":[";
      for (std::size_t i = 0; i < res.v.size(); ++i)
        std::cout << (i ? "," : "") << "\"" << res.v[i].to_string() << "\"";
      std::cout << "],\"p\":[";
      for (std::size_t i = 0; i < res.p.size(); ++i)
        std::cout << (i ? "," : "") << "\"" << res.p[i].to_string() << "\"";
      std::cout << "],\"step_inequality\":" << (res.step_inequality_ok ? "true" : "false")
                << ",\"bound_chain\":" << (res.bound_chain_ok ? "true" : "false")
                << ",\"satisfied\":"
                << (res.step_inequality_ok && res.bound_chain_ok ? "true" : "false") << "}\n";
      return 0;
    }
    if (aux->parsed()) {
      AuxBound b = auxiliary_game_bound(bn);
      std::cout << "{\"n\":" << b.n << ",\"value_num\":\"" << b.bound.num().to_string()
                << "\",\"value_den\":\"" << b.bound.den().to_string()
                << "\",\"bound\":" << b.bound.to_double()
                << ",\"ratio_to_sqrt_half_pi_n\":" << b.ratio_to_sqrt_half_pi_n << "}\n";
      return 0;
    }
    if (aopt->parsed()) {
      AuxOptimal r = auxiliary_game_optimal(on, ocap >= 0 ? std::optional<int>(ocap) : std::nullopt);
      std::cout << "{\"n\":" << r.n << ",\"value_num\":\"" << r.value.num().to_string()
                << "\",\"value_den\":\"" << r.value.den().to_string()
                << "\",\"value\":" << r.value.to_double() << ",\"best_set\":[";
      for (std::size_t i = 0; i < r.best_set.size(); ++i)
        std::cout << (i ? "," : "") << r.best_set[i];
      std::cout << "]}\n";
      return 0;
    }
    if (ge->parsed()) {
      double exact = good_event_probability_exact(gk, gl);
      std::cout << "{\"k\":" << gk << ",\"l\":" << gl << ",\"exact\":" << exact;
      if (gmc > 0) {
        Rng rng(12345);
        std::cout << ",\"monte_carlo\":" << good_event_probability_mc(gk, gl, gmc, rng)
                  << ",\"trials\":" << gmc;
      }
      std::cout << "}\n";
      return 0;
    }
    if (atk->parsed()) {
      BalancedPolicyFactory factory = [&](int nn, std::uint64_t s) {
        Instance inst(nn, nn, std::vector<double>(nn, 1.0), std::vector<double>(nn, 1.0));
        PolicyOptions opt;
        return make_policy(atk_policy, inst, opt, s);
      };
      AttackResult a = deterministic_adversary_attack(factory, atk_n, atk_seed);
      std::cout << "{\"policy\":\"" << atk_policy << "\",\"n\":" << atk_n
                << ",\"t_star\":" << a.t_star << ",\"satisfied_girls\":" << a.satisfied_girls
                << ",\"permutation\":[";
      for (std::size_t i = 0; i < a.permutation.size(); ++i)
        std::cout << (i ? "," : "") << a.permutation[i];
      std::cout << "]}\n";
      return 0;
    }
    if (chk->parsed()) {
      bool all_pass = true;
      for (int idx : suite_criteria(suite)) {
        CheckResult r = run_criterion(idx);
        all_pass = all_pass && r.pass;
        std::printf("C%02d %-24s %s  (%.1fs)  %s\n", r.index, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
