#include "stabsec/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace stabsec {

ExactDist ExactDist::adversarial(std::vector<Rational> p) {
  for (const Rational& q : p)
    if (q < Rational(0) || q > Rational(1))
      throw std::invalid_argument("ExactDist: probabilities must lie in [0,1]");
  ExactDist d;
  d.uniform = false;
  d.probs = std::move(p);
  return d;
}

ExactDist ExactDist::adversarial_half(int n) {
  ExactDist d;
  d.uniform = false;
  d.probs.assign(n >= 1 ? n - 1 : 0, Rational(1, 2));
  return d;
}

// --- game-tree solver --------------------------------------------------------

namespace {

struct DpOut {
  Rational value;
  Rational prob;  // leaf probability mass under the chosen strategy
  std::unique_ptr<StrategyNode> node;
};

struct DpContext {
  int n = 0;
  Criterion criterion = Criterion::Girls;
  bool uniform = true;
  std::vector<Rational> p_top;  // D: P(best-remaining) for step t = 1..n-1

  std::vector<int> girl_of_arrival;  // [1..n], 0 = skip
  std::vector<int> rank_of_arrival;  // D path
  std::vector<int> order;            // uniform path: arrival times, best first
  std::uint32_t free_mask = 0;

  std::vector<int> girl_of_boy, boy_of_girl;  // leaf scratch

  Rational leaf_value() {
    if (uniform) {
      for (int pos = 0; pos < n; ++pos) rank_of_arrival[order[pos]] = pos + 1;
    }
    std::fill(girl_of_boy.begin(), girl_of_boy.end(), 0);
    std::fill(boy_of_girl.begin(), boy_of_girl.end(), 0);
    for (int t = 1; t <= n; ++t) {
      int g = girl_of_arrival[t];
      if (g == 0) continue;
      int b = rank_of_arrival[t];
      girl_of_boy[b] = g;
      boy_of_girl[g] = b;
    }
    SatCounts c = satisfaction_counts_raw(n, n, girl_of_boy, boy_of_girl);
    switch (criterion) {
      case Criterion::Girls: return Rational(c.girls);
      case Criterion::Boys: return Rational(c.boys);
      case Criterion::Pairs: return Rational(c.pairs);
      default: break;
    }
    throw std::invalid_argument("dp: weighted criteria not supported");
  }

  DpOut solve_d(int t, int lo, int hi) {
    DpOut best;
    bool have = false;
    auto consider = [&](Action action) {
      int g = action.value_or(0);
      girl_of_arrival[t] = g;
      if (g) free_mask &= ~(1u << (g - 1));
      DpOut cur;
      if (t == n) {
        rank_of_arrival[n] = lo;
        cur.value = leaf_value();
        cur.prob = Rational(1);
        cur.node = std::make_unique<StrategyNode>();
        cur.node->action = action;
      } else {
        const Rational& pt = p_top[t - 1];
        Rational pb = Rational(1) - pt;
        rank_of_arrival[t] = lo;
        DpOut top = solve_d(t + 1, lo + 1, hi);
        rank_of_arrival[t] = hi;
        DpOut bot = solve_d(t + 1, lo, hi - 1);
        cur.value = pt * top.value + pb * bot.value;
        cur.prob = pt * top.prob + pb * bot.prob;
        cur.node = std::make_unique<StrategyNode>();
        cur.node->action = action;
        cur.node->children.push_back(std::move(top.node));
        cur.node->children.push_back(std::move(bot.node));
      }
      if (g) free_mask |= 1u << (g - 1);
      if (!have || cur.value > best.value) {
        best = std::move(cur);
        have = true;
      }
    };
    for (int g = 1; g <= n; ++g)
      if (free_mask & (1u << (g - 1))) consider(g);
    consider(std::nullopt);
    return best;
  }

  DpOut solve_u(int t) {
    DpOut best;
    bool have = false;
    auto consider = [&](Action action) {
      int g = action.value_or(0);
      girl_of_arrival[t] = g;
      if (g) free_mask &= ~(1u << (g - 1));
      DpOut cur;
      if (t == n) {
        cur.value = leaf_value();
        cur.prob = Rational(1);
        cur.node = std::make_unique<StrategyNode>();
        cur.node->action = action;
      } else {
        cur.node = std::make_unique<StrategyNode>();
        cur.node->action = action;
        Rational sum_v(0), sum_p(0);
        for (int r = 1; r <= t + 1; ++r) {
          order.insert(order.begin() + (r - 1), t + 1);
          DpOut child = solve_u(t + 1);
          order.erase(order.begin() + (r - 1));
          sum_v += child.value;
          sum_p += child.prob;
          cur.node->children.push_back(std::move(child.node));
        }
        Rational inv(1, t + 1);
        cur.value = sum_v * inv;
        cur.prob = sum_p * inv;
      }
      if (g) free_mask |= 1u << (g - 1);
      if (!have || cur.value > best.value) {
        best = std::move(cur);
        have = true;
      }
    };
    for (int g = 1; g <= n; ++g)
      if (free_mask & (1u << (g - 1))) consider(g);
    consider(std::nullopt);
    return best;
  }
};

double tree_size_estimate(int n, bool uniform) {
  // decision paths: a(t, u) = (n-u) a(t+1, u+1) + a(t+1, u)
  std::vector<double> a(n + 2, 1.0);
  for (int t = n; t >= 1; --t) {
    std::vector<double> next(n + 2, 0.0);
    for (int u = 0; u <= n; ++u) next[u] = (n - u) * a[u + 1] + a[u];
    a = std::move(next);
  }
  double chance = 1.0;
  if (uniform)
    for (int t = 2; t <= n; ++t) chance *= t;
  else
    chance = std::pow(2.0, n - 1);
  return a[0] * chance;
}

}  // namespace

DpResult optimal_online_value(int n, const ExactDist& dist, Criterion criterion,
                              std::optional<int> cap_override) {
  if (n < 1) throw std::invalid_argument("dp: n must be positive");
  if (criterion != Criterion::Girls && criterion != Criterion::Boys &&
      criterion != Criterion::Pairs)
    throw std::invalid_argument("dp: weighted criteria not supported");
  int cap = cap_override.value_or(dist.uniform ? kDpCapUniform : kDpCapAdversarial);
  if (n > cap) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "dp: n=%d exceeds cap %d (full game tree has ~%.3g leaves); raise the cap "
                  "explicitly to force it",
                  n, cap, tree_size_estimate(n, dist.uniform));
    throw std::invalid_argument(buf);
  }
  if (!dist.uniform && static_cast<int>(dist.probs.size()) != n - 1)
    throw std::invalid_argument("dp: adversarial distribution needs p_2..p_n");
  if (n > 31) throw std::invalid_argument("dp: n too large for the free-set mask");

  DpContext ctx;
  ctx.n = n;
  ctx.criterion = criterion;
  ctx.uniform = dist.uniform;
  ctx.girl_of_arrival.assign(n + 1, 0);
  ctx.rank_of_arrival.assign(n + 1, 0);
  ctx.girl_of_boy.assign(n + 1, 0);
  ctx.boy_of_girl.assign(n + 1, 0);
  ctx.free_mask = n == 31 ? 0x7fffffffu : ((1u << n) - 1);
  if (!dist.uniform) {
    // step t compares against p_{n+1-t}
    ctx.p_top.resize(n >= 1 ? n - 1 : 0, Rational(0));
    for (int t = 1; t <= n - 1; ++t) ctx.p_top[t - 1] = dist.probs[n - 1 - t];
  }

  DpOut out;
  if (dist.uniform) {
    ctx.order.reserve(n);
    ctx.order.push_back(1);
    out = ctx.solve_u(1);
  } else {
    out = ctx.solve_d(1, 1, n);
  }

  DpResult res;
  res.n = n;
  res.criterion = criterion;
  res.distribution = dist.describe();
  res.value = std::move(out.value);
  res.leaf_probability_total = std::move(out.prob);
  res.strategy = std::move(out.node);
  return res;
}

StrategyReplayPolicy::StrategyReplayPolicy(const StrategyNode* root, const ExactDist& dist, int n)
    : node_(root), uniform_(dist.uniform), n_(n) {}

Action StrategyReplayPolicy::on_arrival(const ArrivalEvent& ev, const GirlView&) {
  if (ev.time == 1) {
    top_count_ = 0;
    return node_->action;
  }
  std::size_t idx;
  if (uniform_) {
    idx = static_cast<std::size_t>(ev.relative_rank - 1);
  } else {
    int new_top = ev.relative_rank - 1;  // best-remaining draws among steps 1..t-1
    idx = (new_top == top_count_ + 1) ? 0 : 1;
    top_count_ = new_top;
  }
  if (idx >= node_->children.size() || !node_->children[idx])
    throw std::logic_error("strategy replay: event stream left the solved tree");
  node_ = node_->children[idx].get();
  return node_->action;
}

// --- adversarial recursion ---------------------------------------------------

AdversarialRecursion adversarial_recursion(int n, std::optional<int> cap_override) {
  if (n < 1) throw std::invalid_argument("recursion: n must be positive");
  int cap = cap_override.value_or(kDpCapAdversarial);
  if (n > cap)
    throw std::invalid_argument("recursion: n exceeds the exact-solver cap; override to force");

  AdversarialRecursion rec;
  rec.v.push_back(Rational(1));
  rec.v_chain.push_back(Rational(1));
  std::vector<Rational> probs;  // p_2..p_k
  for (int k = 2; k <= n; ++k) {
    Rational pk = Rational(1) / (Rational(1) + rec.v.back());
    probs.push_back(pk);
    rec.p.push_back(pk);
    DpResult dp = optimal_online_value(k, ExactDist::adversarial(probs), Criterion::Girls, cap);
    rec.v.push_back(dp.value);
    rec.v_chain.push_back(rec.v_chain.back() + Rational(1) / (Rational(1) + rec.v_chain.back()));
  }
  for (int k = 1; k < n; ++k) {
    Rational allowed = rec.v[k - 1] + Rational(1) / (Rational(1) + rec.v[k - 1]);
    if (rec.v[k] > allowed) rec.step_inequality_ok = false;
  }
  for (int k = 1; k <= n; ++k) {
    Rational lhs = (Rational(1) + rec.v[k - 1]) * (Rational(1) + rec.v[k - 1]);
    Rational rhs = Rational(2 * static_cast<std::int64_t>(k) * k + 4 * k + 2, k);
    if (!(lhs < rhs)) rec.bound_chain_ok = false;
  }
  return rec;
}

// --- auxiliary game ----------------------------------------------------------

AuxBound auxiliary_game_bound(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("aux-bound: n must be even and >= 2");
  std::vector<BigInt> central(n);  // central[j] = C(j, ceil(j/2))
  for (int j = 0; j < n; ++j) central[j] = BigInt::binomial(j, (j + 1) / 2);
  BigInt num(0);
  for (int i = 1; i <= n; ++i) num = num + central[i - 1] * central[n - i];
  BigInt den = BigInt::binomial(n, n / 2);
  AuxBound out;
  out.n = n;
  out.bound = Rational(num, den);
  out.ratio_to_sqrt_half_pi_n = out.bound.to_double() / std::sqrt(n * std::numbers::pi / 2.0);
  return out;
}

namespace {

std::uint64_t small_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// matching of the two-stage simple strategy: red boys to a_set in preference
// order, white boys to the complement in preference order
int simple_strategy_pairs(int n, std::uint32_t red_mask, const std::vector<int>& a_set,
                          std::vector<int>& gob, std::vector<int>& bog) {
  std::fill(gob.begin(), gob.end(), 0);
  std::fill(bog.begin(), bog.end(), 0);
  std::vector<char> in_a(n + 1, 0);
  for (int g : a_set) in_a[g] = 1;
  std::size_t next_a = 0, next_c = 0;
  std::vector<int> comp;
  comp.reserve(n - a_set.size());
  for (int g = 1; g <= n; ++g)
    if (!in_a[g]) comp.push_back(g);
  for (int b = 1; b <= n; ++b) {
    int g;
    if (red_mask & (1u << (b - 1)))
      g = a_set[next_a++];
    else
      g = comp[next_c++];
    gob[b] = g;
    bog[g] = b;
  }
  return satisfaction_counts_raw(n, n, gob, bog).pairs;
}

}  // namespace

AuxOptimal auxiliary_game_optimal(int n, std::optional<int> cap_override) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("aux-opt: n must be even and >= 2");
  int cap = cap_override.value_or(kAuxOptimalCap);
  if (n > cap) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "aux-opt: n=%d exceeds cap %d (C(n,n/2) subsets); override to force",
                  n, cap);
    throw std::invalid_argument(buf);
  }
  const std::uint64_t denom = small_binomial(n, n / 2);
  std::uint64_t best_num = 0;
  std::uint32_t best_mask = 0;
  const std::uint32_t limit = 1u << n;
  // Gosper iteration over n/2-subsets
  std::uint32_t mask = (1u << (n / 2)) - 1;
  while (mask < limit) {
    std::uint64_t num = 0;
    for (int i = 1; i <= n; ++i) {
      int below = std::popcount(mask & ((1u << (i - 1)) - 1));
      int above = std::popcount(mask >> i);
      num += small_binomial(i - 1, below) * small_binomial(n - i, above);
    }
    if (num > best_num) {
      best_num = num;
      best_mask = mask;
    }
    std::uint32_t c = mask & (~mask + 1);
    std::uint32_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }

  AuxOptimal out;
  out.n = n;
  out.value = Rational(BigInt::from_u64(best_num), BigInt::from_u64(denom));
  for (int g = 1; g <= n; ++g)
    if (best_mask & (1u << (g - 1))) out.best_set.push_back(g);
  for (int i = 1; i <= n; ++i) {
    int below = std::popcount(best_mask & ((1u << (i - 1)) - 1));
    int above = std::popcount(best_mask >> i);
    std::uint64_t num = small_binomial(i - 1, below) * small_binomial(n - i, above);
    out.event_probs.push_back(Rational(BigInt::from_u64(num), BigInt::from_u64(denom)));
  }
  return out;
}

Rational auxiliary_game_enumerate(int n, const std::vector<int>& a_set) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("aux-enumerate: n must be even");
  if (static_cast<int>(a_set.size()) != n / 2)
    throw std::invalid_argument("aux-enumerate: |A| must be n/2");
  std::vector<int> gob(n + 1), bog(n + 1);
  std::uint64_t total = 0;
  const std::uint32_t limit = 1u << n;
  std::uint32_t mask = (1u << (n / 2)) - 1;
  while (mask < limit) {
    total += simple_strategy_pairs(n, mask, a_set, gob, bog);
    std::uint32_t c = mask & (~mask + 1);
    std::uint32_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return Rational(BigInt::from_u64(total), BigInt::from_u64(small_binomial(n, n / 2)));
}

double auxiliary_game_simulate(int n, const std::vector<int>& a_set, long long trials, Rng& rng) {
  std::vector<int> boys(n);
  std::iota(boys.begin(), boys.end(), 1);
  std::vector<int> gob(n + 1), bog(n + 1);
  long long total = 0;
  for (long long t = 0; t < trials; ++t) {
    std::uint32_t red_mask = 0;
    for (int i = 0; i < n / 2; ++i) {
      int j = rng.uniform_int(i, n - 1);
      std::swap(boys[i], boys[j]);
      red_mask |= 1u << (boys[i] - 1);
    }
    total += simple_strategy_pairs(n, red_mask, a_set, gob, bog);
  }
  return static_cast<double>(total) / static_cast<double>(trials);
}

// --- good event --------------------------------------------------------------

double good_event_probability_exact(long long k, long long l) {
  if (k < 1 || l < 1 || l > k) throw std::invalid_argument("good-event: need 1 <= l <= k");
  const long long q = (k + l - 1) / l;  // sample prefix length
  auto tail = [&](long long r) -> long double {
    // Pr(R > r): none of the r best values appear in the first q positions
    if (r <= 0) return 1.0L;
    if (r > k - q) return 0.0L;
    long double p = 1.0L;
    for (long long j = 0; j < r; ++j)
      p *= static_cast<long double>(k - q - j) / static_cast<long double>(k - j);
    return p;
  };
  return static_cast<double>(tail(l / 5) - tail(l));
}

double good_event_probability_mc(long long k, long long l, long long trials, Rng& rng) {
  if (k < 1 || l < 1 || l > k) throw std::invalid_argument("good-event: need 1 <= l <= k");
  const long long q = (k + l - 1) / l;
  std::vector<int> pool(k);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<std::pair<int, int>> undo;
  undo.reserve(q);
  long long hits = 0;
  for (long long t = 0; t < trials; ++t) {
    undo.clear();
    int r_min = k + 1;
    for (long long i = 0; i < q; ++i) {
      int j = rng.uniform_int(static_cast<int>(i), static_cast<int>(k - 1));
      undo.emplace_back(static_cast<int>(i), j);
      std::swap(pool[i], pool[j]);
      r_min = std::min(r_min, pool[i]);
    }
    // l/5 < R <= l
    if (5 * static_cast<long long>(r_min) > l && r_min <= l) ++hits;
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) std::swap(pool[it->first], pool[it->second]);
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

// --- deterministic adversary -------------------------------------------------

AttackResult deterministic_adversary_attack(const BalancedPolicyFactory& factory, int n,
                                            std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("attack: n must be positive");
  Instance inst(n, n);

  // probe with an ever-improving stream: arrival t has true rank n+1-t
  std::vector<int> probe(n);
  for (int t = 1; t <= n; ++t) probe[t - 1] = n + 1 - t;
  auto probe_policy = factory(n, seed);
  RunTrace probe_trace = run_online(inst, probe, *probe_policy, seed);

  int t_star = 0;
  for (const Decision& d : probe_trace.decisions) {
    if (!d.action || *d.action == n) {
      t_star = d.time;
      break;
    }
  }
  if (t_star == 0) t_star = n;  // unreachable: n matches must use girl n somewhere

  AttackResult out;
  out.t_star = t_star;
  out.permutation.resize(n);
  for (int t = 1; t <= t_star; ++t) out.permutation[t - 1] = t_star + 1 - t;
  for (int t = t_star + 1; t <= n; ++t) out.permutation[t - 1] = t;

  auto victim = factory(n, seed);
  out.trace = run_online(inst, out.permutation, *victim, seed);
  out.satisfied_girls = satisfaction_counts(inst, out.trace.final_matching).girls;
  return out;
}

}  // namespace stabsec
