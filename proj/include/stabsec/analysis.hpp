#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stabsec/core.hpp"
#include "stabsec/engine.hpp"
#include "stabsec/policies.hpp"
#include "stabsec/rational.hpp"
#include "stabsec/rng.hpp"

namespace stabsec {

// Exact arrival distribution for the game-tree solver.
// D holds p_2..p_n as exact rationals: step k < n brings the best remaining
// boy with probability p_{n+1-k}, otherwise the worst remaining.
struct ExactDist {
  bool uniform = true;
  std::vector<Rational> probs;  // probs[i] = p_{i+2}; size n-1 when used

  static ExactDist make_uniform() { return ExactDist{}; }
  static ExactDist adversarial(std::vector<Rational> p);
  static ExactDist adversarial_half(int n);  // D(1/2,...,1/2)
  std::string describe() const { return uniform ? "uniform" : "adversarial-d"; }
};

// Optimal deterministic online strategy as a tree over observation
// histories: node.action is the decision for the current arrival, children
// are indexed by the next observation (D: 0 = best-remaining next, 1 = worst;
// uniform: relative rank - 1 of the next arrival).
struct StrategyNode {
  Action action;
  std::vector<std::unique_ptr<StrategyNode>> children;
};

struct DpResult {
  int n = 0;
  Criterion criterion = Criterion::Girls;
  std::string distribution;
  Rational value;
  Rational leaf_probability_total;  // == 1 exactly
  std::unique_ptr<StrategyNode> strategy;
};

inline constexpr int kDpCapUniform = 6;
inline constexpr int kDpCapAdversarial = 7;
inline constexpr int kAuxOptimalCap = 12;

// Exact optimum over all deterministic online strategies by backward
// induction over the full game tree. Throws std::invalid_argument with a
// size estimate when n exceeds the cap (caps are caller-overridable).
DpResult optimal_online_value(int n, const ExactDist& dist, Criterion criterion,
                              std::optional<int> cap_override = std::nullopt);

// Replays a solved strategy tree as an online policy (for engine-level
// cross-checks of the DP value).
class StrategyReplayPolicy : public OnlinePolicy {
 public:
  StrategyReplayPolicy(const StrategyNode* root, const ExactDist& dist, int n);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;

 private:
  const StrategyNode* node_;
  bool uniform_;
  int n_;
  int top_count_ = 0;  // D only: best-remaining draws observed so far
};

// v_k: exact optimal satisfied-girl counts against the self-referential
// adversarial distribution with p_{k+1} = 1/(1 + v_k); v_chain is the
// recurrence majorant v'_{k+1} = v'_k + 1/(1 + v'_k).
struct AdversarialRecursion {
  std::vector<Rational> v;        // v[k-1] = v_k, k = 1..n
  std::vector<Rational> p;        // p[k-2] = p_k, k = 2..n
  std::vector<Rational> v_chain;  // same indexing as v
  bool step_inequality_ok = true; // v_{k+1} <= v_k + 1/(1+v_k)
  bool bound_chain_ok = true;     // (1+v_k)^2 < 2k + 2/k + 4
};

AdversarialRecursion adversarial_recursion(int n, std::optional<int> cap_override = std::nullopt);

// Exact Sum_i C(i-1,ceil((i-1)/2)) C(n-i,ceil((n-i)/2)) / C(n, n/2) and its
// ratio to sqrt(n*pi/2). n even.
struct AuxBound {
  int n = 0;
  Rational bound;
  double ratio_to_sqrt_half_pi_n = 0;
};

AuxBound auxiliary_game_bound(int n);

// Exhaustive optimum over pre-committed girl subsets A in the two-stage
// relaxation; value <= auxiliary_game_bound(n).
struct AuxOptimal {
  int n = 0;
  Rational value;
  std::vector<int> best_set;           // girl indices in A
  std::vector<Rational> event_probs;   // per girl, for the best set
};

AuxOptimal auxiliary_game_optimal(int n, std::optional<int> cap_override = std::nullopt);

// Exact expected satisfied pairs of the simple strategy A by enumerating all
// red sets (test oracle; n up to ~12).
Rational auxiliary_game_enumerate(int n, const std::vector<int>& a_set);

// Monte Carlo of the two-stage game under a fixed A.
double auxiliary_game_simulate(int n, const std::vector<int>& a_set, long long trials, Rng& rng);

// Pr(l/5 < R <= l) where R = min of the first ceil(k/l) values of a uniform
// random permutation of [k]; telescoping-product evaluation.
double good_event_probability_exact(long long k, long long l);
double good_event_probability_mc(long long k, long long l, long long trials, Rng& rng);

// Ascending-probe attack: find the first time t* the policy skips or plays
// the least preferred girl, then rearrange so the t*-th arrival is the best
// boy overall. The verified run satisfies at most one girl.
struct AttackResult {
  std::vector<int> permutation;
  int t_star = 0;
  int satisfied_girls = 0;
  RunTrace trace;
};

AttackResult deterministic_adversary_attack(const BalancedPolicyFactory& factory, int n,
                                            std::uint64_t seed);

}  // namespace stabsec
