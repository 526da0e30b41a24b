#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stabsec {

// Girls and boys are identified by preference index, 1 = most preferred.
// Preference orders are total, so the index carries the whole order.
class Instance {
 public:
  Instance(int num_girls, int num_boys,
           std::optional<std::vector<double>> girl_weights = std::nullopt,
           std::optional<std::vector<double>> boy_weights = std::nullopt);

  int num_girls() const { return num_girls_; }
  int num_boys() const { return num_boys_; }
  int n() const { return num_girls_ < num_boys_ ? num_girls_ : num_boys_; }
  bool balanced() const { return num_girls_ == num_boys_; }

  bool has_girl_weights() const { return girl_weights_.has_value(); }
  bool has_boy_weights() const { return boy_weights_.has_value(); }
  double girl_weight(int g) const { return girl_weights_ ? (*girl_weights_)[g - 1] : 1.0; }
  double boy_weight(int b) const { return boy_weights_ ? (*boy_weights_)[b - 1] : 1.0; }
  const std::optional<std::vector<double>>& girl_weights() const { return girl_weights_; }
  const std::optional<std::vector<double>>& boy_weights() const { return boy_weights_; }

 private:
  int num_girls_;
  int num_boys_;
  std::optional<std::vector<double>> girl_weights_;
  std::optional<std::vector<double>> boy_weights_;
};

// Partial injective assignment boy -> girl, both sides 1-based.
class Matching {
 public:
  Matching() = default;

  // throws std::invalid_argument on reuse of either side or nonpositive index
  void add(int boy, int girl);
  bool boy_matched(int boy) const;
  bool girl_matched(int girl) const;
  int girl_of(int boy) const;  // 0 if unmatched
  int boy_of(int girl) const;  // 0 if unmatched

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }  // (boy, girl)
  int size() const { return static_cast<int>(pairs_.size()); }

  int max_boy_index() const { return max_boy_; }
  int max_girl_index() const { return max_girl_; }

 private:
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> girl_of_boy_;  // grow-on-demand, 0 = unmatched
  std::vector<int> boy_of_girl_;
  int max_boy_ = 0;
  int max_girl_ = 0;
};

enum class Criterion { Girls, Boys, Pairs, GirlWeight, BoyWeight };

const char* criterion_name(Criterion c);
Criterion criterion_from_name(const std::string& name);

struct SatCounts {
  int girls = 0;
  int boys = 0;
  int pairs = 0;
  double girl_weight = 0.0;
  double boy_weight = 0.0;

  double by(Criterion c) const;
};

struct SatisfactionReport {
  std::vector<std::pair<int, int>> blocking_pairs;  // (girl, boy), lexicographic
  std::vector<int> satisfied_girls;
  std::vector<int> satisfied_boys;
  std::vector<std::pair<int, int>> satisfied_pairs;  // (girl, boy)
  double satisfied_girl_weight = 0.0;
  double satisfied_boy_weight = 0.0;
};

// throws std::invalid_argument if the matching references out-of-range indices
void validate_matching(const Instance& inst, const Matching& m);

std::vector<std::pair<int, int>> blocking_pairs(const Instance& inst, const Matching& m);

SatisfactionReport evaluate_satisfaction(const Instance& inst, const Matching& m);

// Counts-only evaluation, O(num_girls + num_boys). Used by the experiment
// loop where materializing the blocking set would dominate the runtime.
SatCounts satisfaction_counts(const Instance& inst, const Matching& m);

// Low-level variant over raw assignment arrays (1-based indices, entry 0 of
// each array unused, value 0 = unmatched). Shared by the game-tree DP.
SatCounts satisfaction_counts_raw(int num_girls, int num_boys,
                                  const std::vector<int>& girl_of_boy,
                                  const std::vector<int>& boy_of_girl,
                                  const Instance* weights = nullptr);

// Assortative matching: i-th best boy with i-th best girl, i = 1..n.
Matching stable_matching(const Instance& inst);

// Benchmark value: n for the count criteria, w(H) for the weighted ones.
// Weight ties break toward the lower preference index.
double optimum_value(const Instance& inst, Criterion criterion);

// The n heaviest girls (resp. boys), by descending weight then ascending
// index; returns preference indices sorted ascending.
std::vector<int> heaviest_girls(const Instance& inst);
std::vector<int> heaviest_boys(const Instance& inst);

// Preference reversal i -> n+1-i on both sides. Balanced, unweighted only.
Instance transpose_instance(const Instance& inst);
Matching transpose_matching(const Matching& m, const Instance& inst);

}  // namespace stabsec
