#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "stabsec/core.hpp"
#include "stabsec/engine.hpp"
#include "stabsec/rng.hpp"

namespace stabsec {

// builds a fresh policy for a balanced k-by-k instance
using BalancedPolicyFactory =
    std::function<std::unique_ptr<OnlinePolicy>(int n, std::uint64_t seed)>;

// Classic secretary: skip the first floor(n/e) arrivals, then hand the
// designated girl to the first best-so-far arrival. With force_last set, the
// last arrival gets her if nobody qualified (keeps the matching maximum in
// the single-girl reduction case).
class ClassicSecretaryPolicy : public OnlinePolicy {
 public:
  explicit ClassicSecretaryPolicy(int num_boys, int designated_girl = 1, bool force_last = false);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  int threshold() const { return threshold_; }

 private:
  int num_boys_;
  int girl_;
  bool force_last_;
  int threshold_;
  bool awarded_ = false;
};

// Three-phase red/white/yellow policy for balanced instances. With slack
// r > 0 it targets a (1/5 - eps) fraction of satisfied boys with high
// probability; with r = 0 it gives every individual boy a positive
// satisfaction probability. Catastrophes are recorded, never fatal: once one
// is declared, every remaining boy takes the least preferred free girl, so
// runs stay perfect matchings.
struct RwyParams {
  double gamma = 0.15;      // in (0, 1/5)
  bool zero_slack = false;  // r = 0 variant

  double delta() const { return 0.2 - gamma; }
  double color_prob() const { return gamma + 0.2; }  // red = white = 2*gamma + delta
  int slack(int n) const;
};

class RwyPolicy : public OnlinePolicy {
 public:
  RwyPolicy(int n, RwyParams params, std::uint64_t seed);
  RwyPolicy(int n, RwyParams params, int forced_red, int forced_white);  // test hook

  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  std::optional<Catastrophe> catastrophe() const override { return cat_; }

  struct Diagnostics {
    int red = 0, white = 0, yellow = 0;
    int slack = 0;
    std::vector<int> white_ranks;                       // rank(x) per white arrival
    std::vector<std::pair<int, int>> rank_rule_matches;  // (time, girl) placed at g_{rank-r}
  };
  const Diagnostics& diagnostics() const { return diag_; }

 private:
  int n_;
  int r_;
  int red_, white_;
  bool fallback_ = false;
  std::optional<Catastrophe> cat_;
  OrderTracker order_;
  Diagnostics diag_;

  void init();
  void declare(Catastrophe c);
};

// Satisfies girls by driving the boy-side policy on the mirrored event
// stream and reflecting its girl choices; per-permutation, its satisfied
// girl count equals the base policy's satisfied boy count on the mirrored
// permutation under the same seed.
class SatisfyGirlsPolicy : public OnlinePolicy {
 public:
  SatisfyGirlsPolicy(int n, RwyParams params, std::uint64_t seed);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  std::optional<Catastrophe> catastrophe() const override { return inner_.catastrophe(); }

 private:
  int n_;
  RwyPolicy inner_;
};

// Reserves the best and worst girls for the first best-so-far and
// worst-so-far arrivals after a secretary threshold; everyone else fills the
// middle. Expected satisfied pairs approach 2/e.
class PairsPolicy : public OnlinePolicy {
 public:
  explicit PairsPolicy(int n);  // requires n >= 4
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;

 private:
  int n_;
  int threshold_;
  bool best_claimed_ = false;
  bool worst_claimed_ = false;
};

// Unbalanced-to-balanced reduction for the girl side. Skips filter boys,
// then runs the inner balanced policy on the least preferred fifth of the
// usable girls against the stream of arrivals that beat the best filter boy.
class BalancedReductionGirls : public OnlinePolicy {
 public:
  BalancedReductionGirls(std::vector<int> girl_members, int num_boys,
                         const BalancedPolicyFactory& inner_factory, std::uint64_t seed,
                         int regularity = 5);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  std::optional<Catastrophe> catastrophe() const override;

  int filter_count() const { return filter_count_; }
  int inner_size() const { return inner_size_; }

 private:
  enum class Mode { Direct, Classic, Filter };
  Mode mode_;
  std::vector<int> usable_;      // Direct/Classic: girls handed to the inner policy
  std::vector<int> targets_;     // Filter: inner's girls (real indices)
  std::vector<int> non_targets_; // Filter: overflow girls (real indices)
  int num_boys_;
  int filter_count_ = 0;
  int inner_size_ = 0;
  int pos_best_filter_ = 0;  // current relative position of the best filter boy
  int x_count_ = 0;
  std::unique_ptr<OnlinePolicy> inner_;
};

// Weighted-boy counterpart: the filter is by weight, the inner balanced
// policy runs on all girls against the first n arrivals heavier than the
// heaviest filter boy. Weight ties break by a per-arrival random draw.
class BalancedReductionBoys : public OnlinePolicy {
 public:
  BalancedReductionBoys(int num_girls, int num_boys, const BalancedPolicyFactory& inner_factory,
                        std::uint64_t seed, int regularity = 5);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  std::optional<Catastrophe> catastrophe() const override;

  int filter_count() const { return filter_count_; }
  int effective_boys() const { return effective_boys_; }

 private:
  int num_girls_;
  int num_boys_;
  int effective_boys_;
  int filter_count_;
  double best_filter_weight_ = 0;
  std::uint64_t best_filter_tie_ = 0;
  bool have_filter_best_ = false;
  int x_count_ = 0;
  OrderTracker order_;
  Rng rng_;
  std::unique_ptr<OnlinePolicy> inner_;
};

// Weight-class decomposition for girl weights: pick the heaviest dyadic
// class inside H_G, satisfy it via the girls machinery, and hand leftover
// arrivals to the most preferred free girl outside the class.
class WeightedGirlsPolicy : public OnlinePolicy {
 public:
  WeightedGirlsPolicy(const Instance& inst, double gamma, std::uint64_t seed);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  std::optional<Catastrophe> catastrophe() const override;

  const std::vector<int>& class_girls() const { return class_girls_; }
  int class_count() const { return class_count_; }

 private:
  std::vector<int> class_girls_;
  std::vector<char> in_class_;
  int class_count_ = 0;  // number of dyadic classes considered
  bool direct_ = false;  // machinery acts in class-subset space
  int non_class_free_left_;
  std::unique_ptr<OnlinePolicy> machinery_;
};

// Boy-weight policy: zero-slack three-phase on the balanced core, wrapped in
// the weighted reduction when boys outnumber girls.
class WeightedBoysPolicy : public OnlinePolicy {
 public:
  WeightedBoysPolicy(const Instance& inst, double gamma, std::uint64_t seed);
  Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) override;
  std::optional<Catastrophe> catastrophe() const override;

 private:
  std::vector<int> usable_;  // nonempty when surplus girls are ignored
  std::unique_ptr<OnlinePolicy> machinery_;
};

// baselines
class GreedyBestPolicy : public OnlinePolicy {
 public:
  Action on_arrival(const ArrivalEvent&, const GirlView& girls) override {
    return girls.first_free();
  }
};

class AllSkipPolicy : public OnlinePolicy {
 public:
  Action on_arrival(const ArrivalEvent&, const GirlView&) override { return std::nullopt; }
};

struct PolicyOptions {
  double gamma = 0.15;
  int classic_girl = 1;
  bool classic_force_last = false;
};

// Name-string selection: classic, rwy, rwy-r0, girls, pairs, weighted-girls,
// weighted-boys, reduce-girls:<inner>, reduce-boys:<inner>, greedy.
std::unique_ptr<OnlinePolicy> make_policy(const std::string& name, const Instance& inst,
                                          const PolicyOptions& opt, std::uint64_t seed);

BalancedPolicyFactory balanced_factory(const std::string& name, double gamma);

// policies meaningful on balanced unweighted instances (attack targets)
std::vector<std::string> balanced_policy_names();

}  // namespace stabsec
