#include "stabsec/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace stabsec {

namespace {
constexpr int kUnmatchedRank = std::numeric_limits<int>::max();
}

Instance::Instance(int num_girls, int num_boys,
                   std::optional<std::vector<double>> girl_weights,
                   std::optional<std::vector<double>> boy_weights)
    : num_girls_(num_girls),
      num_boys_(num_boys),
      girl_weights_(std::move(girl_weights)),
      boy_weights_(std::move(boy_weights)) {
  if (num_girls_ < 1 || num_boys_ < 1)
    throw std::invalid_argument("Instance: counts must be positive");
  auto check = [](const std::optional<std::vector<double>>& w, int count, const char* side) {
    if (!w) return;
    if (static_cast<int>(w->size()) != count)
      throw std::invalid_argument(std::string("Instance: ") + side + " weight count mismatch");
    for (double v : *w)
      if (!(v > 0.0))
        throw std::invalid_argument(std::string("Instance: ") + side + " weights must be positive");
  };
  check(girl_weights_, num_girls_, "girl");
  check(boy_weights_, num_boys_, "boy");
}

void Matching::add(int boy, int girl) {
  if (boy < 1 || girl < 1) throw std::invalid_argument("Matching: indices are 1-based");
  if (boy <= max_boy_ && girl_of_boy_[boy - 1] != 0)
    throw std::invalid_argument("Matching: boy already matched");
  if (girl <= max_girl_ && boy_of_girl_[girl - 1] != 0)
    throw std::invalid_argument("Matching: girl already matched");
  if (boy > max_boy_) {
    girl_of_boy_.resize(boy, 0);
    max_boy_ = boy;
  }
  if (girl > max_girl_) {
    boy_of_girl_.resize(girl, 0);
    max_girl_ = girl;
  }
  girl_of_boy_[boy - 1] = girl;
  boy_of_girl_[girl - 1] = boy;
  pairs_.emplace_back(boy, girl);
}

bool Matching::boy_matched(int boy) const { return girl_of(boy) != 0; }
bool Matching::girl_matched(int girl) const { return boy_of(girl) != 0; }

int Matching::girl_of(int boy) const {
  if (boy < 1 || boy > max_boy_) return 0;
  return girl_of_boy_[boy - 1];
}

int Matching::boy_of(int girl) const {
  if (girl < 1 || girl > max_girl_) return 0;
  return boy_of_girl_[girl - 1];
}

const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Girls: return "girls";
    case Criterion::Boys: return "boys";
    case Criterion::Pairs: return "pairs";
    case Criterion::GirlWeight: return "girl-weight";
    case Criterion::BoyWeight: return "boy-weight";
  }
  return "?";
}

Criterion criterion_from_name(const std::string& name) {
  if (name == "girls") return Criterion::Girls;
  if (name == "boys") return Criterion::Boys;
  if (name == "pairs") return Criterion::Pairs;
  if (name == "girl-weight") return Criterion::GirlWeight;
  if (name == "boy-weight") return Criterion::BoyWeight;
  throw std::invalid_argument("unknown criterion: " + name);
}

double SatCounts::by(Criterion c) const {
  switch (c) {
    case Criterion::Girls: return girls;
    case Criterion::Boys: return boys;
    case Criterion::Pairs: return pairs;
    case Criterion::GirlWeight: return girl_weight;
    case Criterion::BoyWeight: return boy_weight;
  }
  return 0;
}

void validate_matching(const Instance& inst, const Matching& m) {
  for (auto [boy, girl] : m.pairs()) {
    if (boy > inst.num_boys() || girl > inst.num_girls())
      throw std::invalid_argument("Matching: index out of range for instance");
  }
}

std::vector<std::pair<int, int>> blocking_pairs(const Instance& inst, const Matching& m) {
  validate_matching(inst, m);
  std::vector<std::pair<int, int>> out;
  for (int g = 1; g <= inst.num_girls(); ++g) {
    int bg = m.boy_of(g);
    int boy_rank = bg == 0 ? kUnmatchedRank : bg;
    for (int b = 1; b <= inst.num_boys(); ++b) {
      int gb = m.girl_of(b);
      int girl_rank = gb == 0 ? kUnmatchedRank : gb;
      // g > g(b) and b > b(g), with unmatched treated as worst
      if (g < girl_rank && b < boy_rank) out.emplace_back(g, b);
    }
  }
  return out;
}

SatCounts satisfaction_counts_raw(int num_girls, int num_boys,
                                  const std::vector<int>& girl_of_boy,
                                  const std::vector<int>& boy_of_girl,
                                  const Instance* weights) {
  SatCounts c;
  // boy at girl i is satisfied iff every better girl holds a better boy
  std::vector<char> boy_sat(num_boys + 1, 0), girl_sat(num_girls + 1, 0);
  int running = 0;  // worst boy index seen so far; kUnmatchedRank once a gap appears
  for (int g = 1; g <= num_girls; ++g) {
    int b = boy_of_girl[g];
    if (b != 0 && running < b) boy_sat[b] = 1;
    running = std::max(running, b == 0 ? kUnmatchedRank : b);
  }
  running = 0;
  for (int b = 1; b <= num_boys; ++b) {
    int g = girl_of_boy[b];
    if (g != 0 && running < g) girl_sat[g] = 1;
    running = std::max(running, g == 0 ? kUnmatchedRank : g);
  }
  for (int b = 1; b <= num_boys; ++b) {
    if (!boy_sat[b]) continue;
    c.boys += 1;
    c.boy_weight += weights ? weights->boy_weight(b) : 1.0;
  }
  for (int g = 1; g <= num_girls; ++g) {
    if (!girl_sat[g]) continue;
    c.girls += 1;
    c.girl_weight += weights ? weights->girl_weight(g) : 1.0;
    int b = boy_of_girl[g];
    if (b != 0 && boy_sat[b]) c.pairs += 1;
  }
  return c;
}

namespace {

void fill_arrays(const Instance& inst, const Matching& m, std::vector<int>& girl_of_boy,
                 std::vector<int>& boy_of_girl) {
  girl_of_boy.assign(inst.num_boys() + 1, 0);
  boy_of_girl.assign(inst.num_girls() + 1, 0);
  for (auto [boy, girl] : m.pairs()) {
    girl_of_boy[boy] = girl;
    boy_of_girl[girl] = boy;
  }
}

}  // namespace

SatCounts satisfaction_counts(const Instance& inst, const Matching& m) {
  validate_matching(inst, m);
  std::vector<int> gob, bog;
  fill_arrays(inst, m, gob, bog);
  return satisfaction_counts_raw(inst.num_girls(), inst.num_boys(), gob, bog, &inst);
}

SatisfactionReport evaluate_satisfaction(const Instance& inst, const Matching& m) {
  validate_matching(inst, m);
  std::vector<int> gob, bog;
  fill_arrays(inst, m, gob, bog);

  SatisfactionReport rep;
  rep.blocking_pairs = blocking_pairs(inst, m);

  std::vector<char> boy_sat(inst.num_boys() + 1, 0), girl_sat(inst.num_girls() + 1, 0);
  int running = 0;
  for (int g = 1; g <= inst.num_girls(); ++g) {
    int b = bog[g];
    if (b != 0 && running < b) boy_sat[b] = 1;
    running = std::max(running, b == 0 ? kUnmatchedRank : b);
  }
  running = 0;
  for (int b = 1; b <= inst.num_boys(); ++b) {
    int g = gob[b];
    if (g != 0 && running < g) girl_sat[g] = 1;
    running = std::max(running, g == 0 ? kUnmatchedRank : g);
  }

  for (int g = 1; g <= inst.num_girls(); ++g) {
    if (!girl_sat[g]) continue;
    rep.satisfied_girls.push_back(g);
    rep.satisfied_girl_weight += inst.girl_weight(g);
  }
  for (int b = 1; b <= inst.num_boys(); ++b) {
    if (!boy_sat[b]) continue;
    rep.satisfied_boys.push_back(b);
    rep.satisfied_boy_weight += inst.boy_weight(b);
  }
  for (int g = 1; g <= inst.num_girls(); ++g) {
    int b = bog[g];
    if (b != 0 && girl_sat[g] && boy_sat[b]) rep.satisfied_pairs.emplace_back(g, b);
  }
  return rep;
}

Matching stable_matching(const Instance& inst) {
  Matching m;
  for (int i = 1; i <= inst.n(); ++i) m.add(i, i);
  return m;
}

namespace {

std::vector<int> heaviest(int count, int n, const std::vector<double>& w) {
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 1);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (w[a - 1] != w[b - 1]) return w[a - 1] > w[b - 1];
    return a < b;  // tie toward the more preferred
  });
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::vector<int> heaviest_girls(const Instance& inst) {
  if (!inst.has_girl_weights()) {
    std::vector<int> idx(inst.n());
    std::iota(idx.begin(), idx.end(), 1);
    return idx;
  }
  return heaviest(inst.num_girls(), inst.n(), *inst.girl_weights());
}

std::vector<int> heaviest_boys(const Instance& inst) {
  if (!inst.has_boy_weights()) {
    std::vector<int> idx(inst.n());
    std::iota(idx.begin(), idx.end(), 1);
    return idx;
  }
  return heaviest(inst.num_boys(), inst.n(), *inst.boy_weights());
}

double optimum_value(const Instance& inst, Criterion criterion) {
  switch (criterion) {
    case Criterion::Girls:
    case Criterion::Boys:
    case Criterion::Pairs:
      return inst.n();
    case Criterion::GirlWeight: {
      if (!inst.has_girl_weights())
        throw std::invalid_argument("optimum_value: girl weights required");
      double s = 0;
      for (int g : heaviest_girls(inst)) s += inst.girl_weight(g);
      return s;
    }
    case Criterion::BoyWeight: {
      if (!inst.has_boy_weights())
        throw std::invalid_argument("optimum_value: boy weights required");
      double s = 0;
      for (int b : heaviest_boys(inst)) s += inst.boy_weight(b);
      return s;
    }
  }
  return 0;
}

Instance transpose_instance(const Instance& inst) {
  if (!inst.balanced()) throw std::invalid_argument("transpose: instance must be balanced");
  if (inst.has_girl_weights() || inst.has_boy_weights())
    throw std::invalid_argument("transpose: weighted instances not supported");
  return inst;  // index reversal maps the instance onto itself
}

Matching transpose_matching(const Matching& m, const Instance& inst) {
  transpose_instance(inst);  // same preconditions
  validate_matching(inst, m);
  int n = inst.n();
  Matching out;
  std::vector<std::pair<int, int>> rev;
  for (auto [boy, girl] : m.pairs()) rev.emplace_back(n + 1 - boy, n + 1 - girl);
  std::sort(rev.begin(), rev.end());
  for (auto [boy, girl] : rev) out.add(boy, girl);
  return out;
}

}  // namespace stabsec
