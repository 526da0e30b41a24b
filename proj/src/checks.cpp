#include "stabsec/checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "stabsec/analysis.hpp"
#include "stabsec/arrival.hpp"
#include "stabsec/core.hpp"
#include "stabsec/engine.hpp"
#include "stabsec/experiment.hpp"
#include "stabsec/policies.hpp"
#include "stabsec/rng.hpp"

namespace stabsec {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void parallel_trials(long long trials, const std::function<void(long long)>& body) {
  const int threads = resolve_threads(0);
  if (threads <= 1) {
    for (long long i = 0; i < trials; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= trials) break;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Definitional evaluation, straight from the blocking-pair definition; the
// satisfied sets are derived from blocking-set membership rather than the
// library's sweep.
struct OracleReport {
  std::vector<std::pair<int, int>> blocking;
  std::vector<int> sat_girls, sat_boys;
  std::vector<std::pair<int, int>> sat_pairs;
  double girl_weight = 0, boy_weight = 0;
};

OracleReport definitional_oracle(const Instance& inst, const Matching& m) {
  OracleReport rep;
  std::vector<char> girl_blocked(inst.num_girls() + 1, 0), boy_blocked(inst.num_boys() + 1, 0);
  for (int g = 1; g <= inst.num_girls(); ++g) {
    for (int b = 1; b <= inst.num_boys(); ++b) {
      int gb = m.girl_of(b);  // 0 = unmatched
      int bg = m.boy_of(g);
      bool girl_prefers = bg == 0 || b < bg;
      bool boy_prefers = gb == 0 || g < gb;
      if (girl_prefers && boy_prefers) {
        rep.blocking.emplace_back(g, b);
        girl_blocked[g] = 1;
        boy_blocked[b] = 1;
      }
    }
  }
  for (int g = 1; g <= inst.num_girls(); ++g)
    if (m.boy_of(g) != 0 && !girl_blocked[g]) {
      rep.sat_girls.push_back(g);
      rep.girl_weight += inst.girl_weight(g);
    }
  for (int b = 1; b <= inst.num_boys(); ++b)
    if (m.girl_of(b) != 0 && !boy_blocked[b]) {
      rep.sat_boys.push_back(b);
      rep.boy_weight += inst.boy_weight(b);
    }
  for (int g = 1; g <= inst.num_girls(); ++g) {
    int b = m.boy_of(g);
    if (b != 0 && !girl_blocked[g] && !boy_blocked[b]) rep.sat_pairs.emplace_back(g, b);
  }
  return rep;
}

Instance random_instance(Rng& rng, int max_side) {
  int ng = rng.uniform_int(1, max_side);
  int nb = rng.uniform_int(1, max_side);
  std::optional<std::vector<double>> gw, bw;
  if (rng.uniform01() < 0.5) {
    std::vector<double> w(ng);
    for (double& v : w) v = 0.25 * rng.uniform_int(1, 32);
    gw = std::move(w);
  }
  if (rng.uniform01() < 0.5) {
    std::vector<double> w(nb);
    for (double& v : w) v = 0.25 * rng.uniform_int(1, 32);
    bw = std::move(w);
  }
  return Instance(ng, nb, std::move(gw), std::move(bw));
}

Matching random_matching(const Instance& inst, Rng& rng) {
  std::vector<int> boys(inst.num_boys()), girls(inst.num_girls());
  std::iota(boys.begin(), boys.end(), 1);
  std::iota(girls.begin(), girls.end(), 1);
  int k = rng.uniform_int(0, inst.n());
  for (int i = 0; i < k; ++i) {
    std::swap(boys[i], boys[rng.uniform_int(i, inst.num_boys() - 1)]);
    std::swap(girls[i], girls[rng.uniform_int(i, inst.num_girls() - 1)]);
  }
  Matching m;
  for (int i = 0; i < k; ++i) m.add(boys[i], girls[i]);
  return m;
}

std::vector<char> satisfied_boy_flags(const Instance& inst, const Matching& m) {
  std::vector<char> sat(inst.num_boys() + 1, 0);
  int running = 0;
  for (int g = 1; g <= inst.num_girls(); ++g) {
    int b = m.boy_of(g);
    if (b != 0 && running < b) sat[b] = 1;
    running = std::max(running, b == 0 ? inst.num_boys() + 1 : b);
  }
  return sat;
}

ExperimentConfig base_config(const std::string& policy, Criterion crit, int n, int m,
                             long long trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.policy_name = policy;
  cfg.criterion = crit;
  cfg.num_girls = n;
  cfg.num_boys = m;
  cfg.trials = trials;
  cfg.master_seed = seed;
  return cfg;
}

// ---- criteria ----------------------------------------------------------------

CheckResult c01_oracle_equivalence() {
  CheckResult r{1, "oracle-equivalence"};
  Rng rng(0xC1A11001);
  int agree = 0;
  const int cases = 1000;
  for (int i = 0; i < cases; ++i) {
    Instance inst = random_instance(rng, 20);
    Matching m = random_matching(inst, rng);
    SatisfactionReport got = evaluate_satisfaction(inst, m);
    OracleReport want = definitional_oracle(inst, m);
    bool same = got.blocking_pairs == want.blocking &&
                got.satisfied_girls == want.sat_girls && got.satisfied_boys == want.sat_boys &&
                got.satisfied_pairs == want.sat_pairs &&
                std::abs(got.satisfied_girl_weight - want.girl_weight) < 1e-9 &&
                std::abs(got.satisfied_boy_weight - want.boy_weight) < 1e-9;
    agree += same;
  }
  r.pass = agree == cases;
  r.detail = fmt("%d/%d random cases agree with the definitional enumeration", agree, cases);
  return r;
}

CheckResult c02_stability_oracle() {
  CheckResult r{2, "stability-oracle"};
  Rng rng(0xC1A11002);
  int ok = 0;
  const int cases = 500;
  for (int i = 0; i < cases; ++i) {
    Instance inst(rng.uniform_int(1, 200), rng.uniform_int(1, 200));
    Matching m = stable_matching(inst);
    SatisfactionReport rep = evaluate_satisfaction(inst, m);
    ok += rep.blocking_pairs.empty() &&
          static_cast<int>(rep.satisfied_pairs.size()) == inst.n();
  }
  r.pass = ok == cases;
  r.detail = fmt("%d/%d assortative matchings stable with n satisfied pairs", ok, cases);
  return r;
}

CheckResult c03_classic_secretary() {
  CheckResult r{3, "classic-secretary"};
  std::vector<ExperimentRecord> recs;
  run_experiment(base_config("classic", Criterion::Girls, 1000, 1000, 100000, 0xC1A11003), &recs);
  double success = 0;
  for (const auto& rec : recs) success += rec.sat_girls;  // 1 iff the top girl got the top boy
  success /= static_cast<double>(recs.size());
  const double target = 1.0 / std::numbers::e;
  r.pass = std::abs(success - target) <= 0.01;
  r.detail = fmt("success frequency %.4f, required within %.4f +- 0.01", success, target);
  return r;
}

CheckResult c04_rwy_guarantee() {
  CheckResult r{4, "rwy-guarantee"};
  const int n = 10000, trials = 200;
  std::vector<ExperimentRecord> recs;
  auto cfg = base_config("rwy", Criterion::Boys, n, n, trials, 0xC1A11004);
  cfg.gamma = 0.15;
  run_experiment(cfg, &recs);
  int hits = 0;
  for (const auto& rec : recs) hits += rec.sat_boys >= n * 0.15;
  r.pass = hits >= static_cast<int>(0.95 * trials);
  r.detail = fmt("%d/%d trials reached 0.15n=%d satisfied boys (need >= %d)", hits, trials,
                 static_cast<int>(n * 0.15), static_cast<int>(0.95 * trials));
  return r;
}

CheckResult c05_girls_via_transposition() {
  CheckResult r{5, "girls-via-transposition"};
  const int n = 10000, trials = 200;
  std::vector<ExperimentRecord> recs;
  auto cfg = base_config("girls", Criterion::Girls, n, n, trials, 0xC1A11005);
  cfg.gamma = 0.15;
  run_experiment(cfg, &recs);
  int hits = 0;
  for (const auto& rec : recs) hits += rec.sat_girls >= n * 0.15;
  bool freq_ok = hits >= static_cast<int>(0.95 * trials);

  // per-permutation duality at n = 8: satisfied girls of the mirrored run
  // equal satisfied boys of the base run on the mirrored permutation
  const int dn = 8;
  Instance small(dn, dn);
  Rng rng(0xC1A11055);
  int matches = 0;
  const int perms = 10000;
  ArrivalProcess uni = ArrivalProcess::uniform(dn);
  RwyParams params{0.15, false};
  for (int i = 0; i < perms; ++i) {
    std::vector<int> perm = sample_arrival(uni, rng);
    std::vector<int> mirrored(dn);
    for (int t = 0; t < dn; ++t) mirrored[t] = dn + 1 - perm[t];
    std::uint64_t seed = rng.next_u64();
    SatisfyGirlsPolicy girls_policy(dn, params, seed);
    RwyPolicy boys_policy(dn, params, seed);
    RunTrace tg = run_online(small, perm, girls_policy);
    RunTrace tb = run_online(small, mirrored, boys_policy);
    int sg = satisfaction_counts(small, tg.final_matching).girls;
    int sb = satisfaction_counts(small, tb.final_matching).boys;
    matches += sg == sb;
  }
  bool duality_ok = matches == perms;
  r.pass = freq_ok && duality_ok;
  r.detail = fmt("%d/%d trials reached 0.15n girls; duality equality %d/%d permutations", hits,
                 trials, matches, perms);
  return r;
}

CheckResult c06_pairs_policy() {
  CheckResult r{6, "pairs-policy"};
  const int n = 1000;
  std::vector<ExperimentRecord> recs;
  run_experiment(base_config("pairs", Criterion::Pairs, n, n, 50000, 0xC1A11006), &recs);
  double mean = 0;
  for (const auto& rec : recs) mean += rec.sat_pairs;
  mean /= static_cast<double>(recs.size());
  const double target = 2.0 / std::numbers::e - 0.05;
  r.pass = mean >= target;
  r.detail = fmt("mean satisfied pairs %.4f, required >= %.4f", mean, target);
  return r;
}

CheckResult c07_pairs_upper_bound() {
  CheckResult r{7, "pairs-upper-bound"};
  bool band_ok = true;
  double worst_ratio_lo = 2, worst_ratio_hi = 0;
  std::vector<double> bound_at(501, 0.0);
  for (int n = 2; n <= 500; n += 2) {
    AuxBound b = auxiliary_game_bound(n);
    bound_at[n] = b.bound.to_double();
    if (n >= 200) {
      band_ok = band_ok && b.ratio_to_sqrt_half_pi_n >= 0.8 && b.ratio_to_sqrt_half_pi_n <= 1.2;
      worst_ratio_lo = std::min(worst_ratio_lo, b.ratio_to_sqrt_half_pi_n);
      worst_ratio_hi = std::max(worst_ratio_hi, b.ratio_to_sqrt_half_pi_n);
    }
  }
  bool mc_ok = true;
  std::string mc_note;
  for (int n : {100, 200}) {
    std::vector<ExperimentRecord> recs;
    run_experiment(base_config("pairs", Criterion::Pairs, n, n, 2000, 0xC1A11007 + n), &recs);
    double mean = 0;
    for (const auto& rec : recs) mean += rec.sat_pairs;
    mean /= static_cast<double>(recs.size());
    mc_ok = mc_ok && mean < bound_at[n];
    mc_note += fmt(" n=%d mc=%.3f<bound=%.3f", n, mean, bound_at[n]);
  }
  r.pass = band_ok && mc_ok;
  r.detail = fmt("ratio to sqrt(n*pi/2) in [%.3f, %.3f] for n>=200 (need [0.8,1.2]);%s",
                 worst_ratio_lo, worst_ratio_hi, mc_note.c_str());
  return r;
}

CheckResult c08_adversarial_exact() {
  CheckResult r{8, "adversarial-exact"};
  AdversarialRecursion rec = adversarial_recursion(7);
  bool girls_ok = true;
  std::string vals;
  for (int k = 2; k <= 7; ++k) {
    // v_k < sqrt(2k)  <=>  v_k^2 < 2k, exactly
    const Rational& v = rec.v[k - 1];
    bool ok = v * v < Rational(2 * k);
    girls_ok = girls_ok && ok;
    vals += fmt(" v%d=%s", k, v.to_string().c_str());
  }
  bool pairs_ok = true;
  for (int n = 2; n <= 6; ++n) {
    DpResult dp = optimal_online_value(n, ExactDist::adversarial_half(n), Criterion::Pairs);
    pairs_ok = pairs_ok && dp.value <= Rational(1) && dp.leaf_probability_total == Rational(1);
  }
  r.pass = girls_ok && pairs_ok && rec.step_inequality_ok;
  r.detail = fmt("girls v_k^2<2k for k<=7: %s; pairs<=1 for n<=6: %s; step inequality: %s;%s",
                 girls_ok ? "yes" : "NO", pairs_ok ? "yes" : "NO",
                 rec.step_inequality_ok ? "holds" : "VIOLATED", vals.c_str());
  return r;
}

CheckResult c09_deterministic_attack() {
  CheckResult r{9, "deterministic-attack"};
  bool ok = true;
  std::string worst;
  for (const std::string& name : balanced_policy_names()) {
    for (int n : {5, 10, 50}) {
      BalancedPolicyFactory factory = [&name](int nn, std::uint64_t seed) {
        Instance inst(nn, nn, std::vector<double>(nn, 1.0), std::vector<double>(nn, 1.0));
        PolicyOptions opt;
        return make_policy(name, inst, opt, seed);
      };
      AttackResult a = deterministic_adversary_attack(factory, n, 0xC1A11009);
      if (a.satisfied_girls > 1) {
        ok = false;
        worst += fmt(" %s@n=%d->%d", name.c_str(), n, a.satisfied_girls);
      }
    }
  }
  r.pass = ok;
  r.detail = ok ? "every built-in policy satisfies <= 1 girl at n in {5,10,50}"
                : std::string("violations:") + worst;
  return r;
}

CheckResult c10_good_event() {
  CheckResult r{10, "good-event"};
  double p1 = good_event_probability_exact(10000, 100);
  double p2 = good_event_probability_exact(100000, 1000);
  double p3 = good_event_probability_exact(1000000, 1000);
  bool lower_ok = p1 > 1.0 / 13 && p2 > 1.0 / 13 && p3 > 1.0 / 13;

  const double anchor = std::exp(-0.8) - std::exp(-1.0);
  bool anchor_ok = std::abs(p3 - anchor) <= 0.02;

  bool enum_ok = true;
  for (int k = 2; k <= 12 && enum_ok; ++k) {
    for (int l = 1; l <= k; ++l) {
      int q = (k + l - 1) / l;
      long long total = 0, hit = 0;
      // all q-subsets of [k] as the prefix value set
      std::vector<int> comb(q);
      std::iota(comb.begin(), comb.end(), 1);
      for (;;) {
        ++total;
        int rmin = comb[0];
        if (5 * rmin > l && rmin <= l) ++hit;
        int i = q - 1;
        while (i >= 0 && comb[i] == k - q + 1 + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < q; ++j) comb[j] = comb[j - 1] + 1;
      }
      double exact = good_event_probability_exact(k, l);
      double brute = static_cast<double>(hit) / static_cast<double>(total);
      if (std::abs(exact - brute) > 1e-12) {
        enum_ok = false;
        break;
      }
    }
  }
  r.pass = lower_ok && anchor_ok && enum_ok;
  r.detail = fmt(
      "p(1e4,1e2)=%.4f p(1e5,1e3)=%.4f p(1e6,1e3)=%.4f all > 1/13=%.4f: %s; "
      "|p(1e6,1e3) - (e^-4/5 - e^-1)=%.4f| = %.4f <= 0.02: %s; enumeration match k<=12: %s",
      p1, p2, p3, 1.0 / 13, lower_ok ? "yes" : "NO", anchor, std::abs(p3 - anchor),
      anchor_ok ? "yes" : "NO", enum_ok ? "yes" : "NO");
  return r;
}

CheckResult c11_weighted_girls() {
  CheckResult r{11, "weighted-girls"};
  const int n = 4096;
  const double log2n = std::log2(static_cast<double>(n));
  auto measure = [&](std::uint64_t seed) {
    auto cfg = base_config("weighted-girls", Criterion::GirlWeight, n, n, 500, seed);
    cfg.weights_spec = "geometric(0.9)";
    std::vector<ExperimentRecord> recs;
    run_experiment(cfg, &recs);
    double mean_weight = 0;
    double whg = recs.empty() ? 1 : recs[0].optimum;
    for (const auto& rec : recs) mean_weight += rec.sat_girl_weight;
    mean_weight /= static_cast<double>(recs.size());
    return mean_weight * log2n / whg;
  };
  double c1 = measure(0xC1A11011);
  double c2 = measure(0xC1A11012);
  bool positive = c1 > 0 && c2 > 0;
  double rel = std::abs(c1 - c2) / std::max(c1, c2);
  r.pass = positive && rel <= 0.20;
  r.detail = fmt("measured c = mean_w*log2(n)/w(H_G): run1 %.4f, run2 %.4f, rel diff %.1f%% "
                 "(need c > 0, within 20%%)",
                 c1, c2, 100 * rel);
  return r;
}

CheckResult c12_weighted_boys() {
  CheckResult r{12, "weighted-boys"};
  const int n = 2000;
  const long long trials = 10000;
  Instance inst(n, n, std::nullopt, make_weights("adversarial-heavy", n));
  ArrivalProcess uni = ArrivalProcess::uniform(n);
  std::vector<std::atomic<long long>> sat_count(11);  // ten heaviest boys: n-9..n
  parallel_trials(trials, [&](long long i) {
    std::uint64_t trial_seed = derive_seed(0xC1A11013, static_cast<std::uint64_t>(i));
    Rng arrival_rng(derive_seed(trial_seed, 1));
    std::vector<int> perm = sample_arrival(uni, arrival_rng);
    WeightedBoysPolicy policy(inst, 0.15, derive_seed(trial_seed, 2));
    RunTrace trace = run_online(inst, perm, policy, trial_seed);
    std::vector<char> sat = satisfied_boy_flags(inst, trace.final_matching);
    for (int j = 1; j <= 10; ++j)
      if (sat[n - 10 + j]) sat_count[j].fetch_add(1);
  });
  double min_freq = 1.0;
  for (int j = 1; j <= 10; ++j)
    min_freq = std::min(min_freq,
                        static_cast<double>(sat_count[j].load()) / static_cast<double>(trials));
  r.pass = min_freq > 0.01;
  r.detail = fmt("min satisfaction frequency over the 10 heaviest boys = %.4f (need > 0.01)",
                 min_freq);
  return r;
}

}  // namespace

CheckResult run_criterion(int index) {
  using Fn = CheckResult (*)();
  static const Fn table[kCriterionCount] = {
      c01_oracle_equivalence, c02_stability_oracle, c03_classic_secretary, c04_rwy_guarantee,
      c05_girls_via_transposition, c06_pairs_policy, c07_pairs_upper_bound, c08_adversarial_exact,
      c09_deterministic_attack, c10_good_event, c11_weighted_girls, c12_weighted_boys};
  if (index < 1 || index > kCriterionCount)
    throw std::invalid_argument("criterion index out of range");
  auto start = std::chrono::steady_clock::now();
  CheckResult r = table[index - 1]();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "core-oracles") return {1, 2};
  if (suite == "rwy-guarantee") return {4, 5};
  if (suite == "adversarial-exact") return {8};
  if (suite == "bounds") return {7};
  if (suite == "all") {
    std::vector<int> all(kCriterionCount);
    std::iota(all.begin(), all.end(), 1);
    return all;
  }
  throw std::invalid_argument("unknown check suite: " + suite +
                              " (expected core-oracles, rwy-guarantee, adversarial-exact, bounds, all)");
}

}  // namespace stabsec
