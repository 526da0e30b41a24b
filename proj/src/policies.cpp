#include "stabsec/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stabsec {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

int ceil_log2(int n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

}  // namespace

// --- classic secretary -------------------------------------------------------

ClassicSecretaryPolicy::ClassicSecretaryPolicy(int num_boys, int designated_girl, bool force_last)
    : num_boys_(num_boys), girl_(designated_girl), force_last_(force_last) {
  if (num_boys_ < 1) throw std::invalid_argument("classic: need at least one boy");
  if (girl_ < 1) throw std::invalid_argument("classic: designated girl is 1-based");
  threshold_ = static_cast<int>(std::floor(num_boys_ / std::numbers::e));
}

Action ClassicSecretaryPolicy::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  if (awarded_) return std::nullopt;
  if (ev.time > threshold_ && ev.relative_rank == 1 && girls.is_free(girl_)) {
    awarded_ = true;
    return girl_;
  }
  if (force_last_ && ev.time == num_boys_ && girls.is_free(girl_)) {
    awarded_ = true;
    return girl_;
  }
  return std::nullopt;
}

// --- red/white/yellow --------------------------------------------------------

int RwyParams::slack(int n) const {
  if (zero_slack) return 0;
  // guard the ceiling against representation noise in delta()
  return static_cast<int>(std::ceil(delta() * n / 4.0 - 1e-9));
}

RwyPolicy::RwyPolicy(int n, RwyParams params, std::uint64_t seed) : n_(n) {
  if (n_ < 1) throw std::invalid_argument("rwy: n must be positive");
  if (!(params.gamma > 0.0 && params.gamma < 0.2))
    throw std::invalid_argument("rwy: gamma must lie in (0, 1/5)");
  r_ = params.slack(n_);
  const double a = params.color_prob();
  Rng rng(seed);
  red_ = white_ = 0;
  for (int i = 0; i < n_; ++i) {
    double u = rng.uniform01();
    if (u < a)
      ++red_;
    else if (u < 2 * a)
      ++white_;
  }
  init();
}

RwyPolicy::RwyPolicy(int n, RwyParams params, int forced_red, int forced_white) : n_(n) {
  if (forced_red + forced_white > n) throw std::invalid_argument("rwy: bad forced colors");
  r_ = params.slack(n_);
  red_ = forced_red;
  white_ = forced_white;
  init();
}

void RwyPolicy::init() {
  diag_.red = red_;
  diag_.white = white_;
  diag_.yellow = n_ - red_ - white_;
  diag_.slack = r_;
  // the r-shifted placements need the red girls clear of the top block
  if (2 * red_ - r_ > n_) declare(Catastrophe::TypeI);
}

void RwyPolicy::declare(Catastrophe c) {
  if (!cat_) cat_ = c;
  fallback_ = true;
}

Action RwyPolicy::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  const int t = ev.time;
  if (t <= red_) {
    order_.insert(ev.relative_rank - 1, true);
    return girls.last_free();  // bottom girls, in arrival order
  }
  const int rank = order_.insert(ev.relative_rank - 1, false);  // reds better than x
  if (t <= red_ + white_) {
    diag_.white_ranks.push_back(rank);
    if (fallback_) return girls.last_free();
    if (rank > r_ && girls.is_free(rank - r_)) {
      diag_.rank_rule_matches.emplace_back(t, rank - r_);
      return rank - r_;
    }
    auto g = girls.last_free();
    if (g && *g <= red_ - r_) declare(Catastrophe::TypeII);
    return g;
  }
  // yellow
  if (!fallback_) {
    auto g = girls.first_free_at_or_after(std::max(1, rank - r_));
    if (g) return g;
    declare(Catastrophe::TypeIII);
  }
  return girls.last_free();
}

SatisfyGirlsPolicy::SatisfyGirlsPolicy(int n, RwyParams params, std::uint64_t seed)
    : n_(n), inner_(n, params, seed) {}

Action SatisfyGirlsPolicy::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  ArrivalEvent mirrored{ev.time, ev.time + 1 - ev.relative_rank, ev.weight};
  MirrorView mv(girls, n_);
  Action a = inner_.on_arrival(mirrored, mv);
  if (!a) return std::nullopt;
  return n_ + 1 - *a;
}

// --- satisfied pairs ---------------------------------------------------------

PairsPolicy::PairsPolicy(int n) : n_(n) {
  if (n_ < 4) throw std::invalid_argument("pairs: need n >= 4");
  threshold_ = static_cast<int>(std::floor(n_ / std::numbers::e));
}

Action PairsPolicy::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  const int t = ev.time;
  const int rel = ev.relative_rank;
  auto middle = [&]() -> Action {
    auto g = girls.first_free_at_or_after(2);
    if (g && *g <= n_ - 1) return g;
    return girls.first_free();
  };
  if (t <= threshold_) return middle();
  if (t <= n_ - 2) {
    if (rel == 1 && !best_claimed_) {
      best_claimed_ = true;
      return 1;
    }
    if (rel == t && !worst_claimed_) {
      worst_claimed_ = true;
      return n_;
    }
    return middle();
  }
  // last two arrivals fill whatever is left, reservations first
  if (rel == 1 && !best_claimed_ && girls.is_free(1)) {
    best_claimed_ = true;
    return 1;
  }
  if (rel == t && !worst_claimed_ && girls.is_free(n_)) {
    worst_claimed_ = true;
    return n_;
  }
  return girls.first_free();
}

// --- reduction, girl side ----------------------------------------------------

BalancedReductionGirls::BalancedReductionGirls(std::vector<int> girl_members, int num_boys,
                                               const BalancedPolicyFactory& inner_factory,
                                               std::uint64_t seed, int regularity)
    : num_boys_(num_boys) {
  if (girl_members.empty()) throw std::invalid_argument("reduce-girls: no girls");
  if (num_boys_ < 1) throw std::invalid_argument("reduce-girls: no boys");
  std::sort(girl_members.begin(), girl_members.end());
  const int c = regularity;
  const int n0 = static_cast<int>(girl_members.size());

  if (n0 >= num_boys_) {
    // surplus girls: keep the most preferred |B| of them and play balanced
    mode_ = Mode::Direct;
    usable_.assign(girl_members.begin(), girl_members.begin() + num_boys_);
    inner_size_ = num_boys_;
    inner_ = inner_factory(inner_size_, derive_seed(seed, 17));
    return;
  }

  int n_eff = std::min(n0, num_boys_ / c);
  if (n_eff < c) {
    // too small for the filter argument; satisfy one girl the classic way
    mode_ = Mode::Classic;
    usable_ = {girl_members.front()};
    inner_size_ = 1;
    inner_ = std::make_unique<ClassicSecretaryPolicy>(num_boys_, 1, false);
    return;
  }

  mode_ = Mode::Filter;
  filter_count_ = ceil_div(num_boys_, n_eff);
  inner_size_ = ceil_div(n_eff, 5);
  // targets are the least preferred fifth of the usable girls
  targets_.assign(girl_members.begin() + (n_eff - inner_size_), girl_members.begin() + n_eff);
  non_targets_.assign(girl_members.begin(), girl_members.begin() + (n_eff - inner_size_));
  inner_ = inner_factory(inner_size_, derive_seed(seed, 17));
}

Action BalancedReductionGirls::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  if (mode_ != Mode::Filter) {
    SubsetView sv(girls, usable_);
    Action a = inner_->on_arrival(ev, sv);
    if (!a) return std::nullopt;
    return usable_[*a - 1];
  }

  const int rel = ev.relative_rank;
  if (ev.time <= filter_count_) {
    if (pos_best_filter_ == 0 || rel <= pos_best_filter_) pos_best_filter_ = rel;
    return std::nullopt;
  }
  const bool in_x = rel <= pos_best_filter_;  // beats the best filter boy
  if (in_x) ++pos_best_filter_;               // it shifted down one slot
  if (!in_x) return std::nullopt;

  ++x_count_;
  if (x_count_ <= inner_size_) {
    // within the surviving stream, the relative rank is unchanged: everyone
    // outside it is worse than the best filter boy, hence worse than x
    SubsetView tv(girls, targets_);
    Action a = inner_->on_arrival({x_count_, rel, ev.weight}, tv);
    if (!a) return std::nullopt;
    return targets_[*a - 1];
  }
  for (int real : non_targets_)
    if (girls.is_free(real)) return real;
  return std::nullopt;
}

std::optional<Catastrophe> BalancedReductionGirls::catastrophe() const {
  return inner_ ? inner_->catastrophe() : std::nullopt;
}

// --- reduction, boy side (weighted) ------------------------------------------

BalancedReductionBoys::BalancedReductionBoys(int num_girls, int num_boys,
                                             const BalancedPolicyFactory& inner_factory,
                                             std::uint64_t seed, int regularity)
    : num_girls_(num_girls), num_boys_(num_boys), rng_(derive_seed(seed, 29)) {
  if (num_girls_ < 1 || num_boys_ < 1) throw std::invalid_argument("reduce-boys: empty side");
  const int c = regularity;
  const long long ell = 5LL * num_girls_;
  // when the boy pool is not much larger than 5n, only a prefix is used
  effective_boys_ = (ell <= num_boys_ / c) ? num_boys_
                                           : static_cast<int>(std::min<long long>(num_boys_, ell));
  filter_count_ = ceil_div(effective_boys_, static_cast<int>(std::min<long long>(ell, effective_boys_)));
  inner_ = inner_factory(num_girls_, derive_seed(seed, 17));
}

Action BalancedReductionBoys::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  if (ev.time > effective_boys_) return std::nullopt;
  const double w = ev.weight.value_or(1.0);
  const std::uint64_t tie = rng_.next_u64();

  if (ev.time <= filter_count_) {
    order_.insert(ev.relative_rank - 1, false);
    if (!have_filter_best_ || w > best_filter_weight_ ||
        (w == best_filter_weight_ && tie > best_filter_tie_)) {
      best_filter_weight_ = w;
      best_filter_tie_ = tie;
      have_filter_best_ = true;
    }
    return std::nullopt;
  }

  const bool in_x =
      w > best_filter_weight_ || (w == best_filter_weight_ && tie > best_filter_tie_);
  const int x_before = order_.insert(ev.relative_rank - 1, in_x);
  if (!in_x) return std::nullopt;
  ++x_count_;
  if (x_count_ > num_girls_) return std::nullopt;
  return inner_->on_arrival({x_count_, x_before + 1, ev.weight}, girls);
}

std::optional<Catastrophe> BalancedReductionBoys::catastrophe() const {
  return inner_ ? inner_->catastrophe() : std::nullopt;
}

// --- weighted girls ----------------------------------------------------------

WeightedGirlsPolicy::WeightedGirlsPolicy(const Instance& inst, double gamma, std::uint64_t seed) {
  if (!inst.has_girl_weights())
    throw std::invalid_argument("weighted-girls: girl weights required");
  const int n = inst.n();
  std::vector<int> heavy = heaviest_girls(inst);
  double w_star = 0;
  for (int g : heavy) w_star = std::max(w_star, inst.girl_weight(g));

  class_count_ = ceil_log2(n) + 1;
  std::vector<std::vector<int>> classes(class_count_);
  std::vector<double> class_weight(class_count_, 0.0);
  double covered = 0;
  for (int g : heavy) {
    double w = inst.girl_weight(g);
    double bound = w_star;
    for (int i = 0; i < class_count_; ++i) {
      bound /= 2;
      if (w > bound) {
        classes[i].push_back(g);
        class_weight[i] += w;
        covered += w;
        break;
      }
    }
  }
  double heavy_total = 0;
  for (int g : heavy) heavy_total += inst.girl_weight(g);
  if (covered < heavy_total / 2 - 1e-9 * heavy_total)
    throw std::logic_error("weighted-girls: class cover fell below half of w(H_G)");

  int best = 0;
  for (int i = 1; i < class_count_; ++i)
    if (class_weight[i] > class_weight[best]) best = i;
  class_girls_ = classes[best];

  in_class_.assign(inst.num_girls() + 1, 0);
  for (int g : class_girls_) in_class_[g] = 1;
  non_class_free_left_ = inst.num_girls() - static_cast<int>(class_girls_.size());

  const int k = static_cast<int>(class_girls_.size());
  if (k == inst.num_boys()) {
    direct_ = true;
    machinery_ = std::make_unique<SatisfyGirlsPolicy>(k, RwyParams{gamma, false},
                                                      derive_seed(seed, 3));
  } else {
    direct_ = false;
    machinery_ = std::make_unique<BalancedReductionGirls>(
        class_girls_, inst.num_boys(), balanced_factory("girls", gamma), derive_seed(seed, 3));
  }
}

Action WeightedGirlsPolicy::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  Action a;
  if (direct_) {
    SubsetView sv(girls, class_girls_);
    a = machinery_->on_arrival(ev, sv);
    if (a) return class_girls_[*a - 1];
  } else {
    a = machinery_->on_arrival(ev, girls);
    if (a) return a;
  }
  // leftover arrival: most preferred free girl outside the class
  if (non_class_free_left_ == 0) return std::nullopt;
  int g = 1;
  while (true) {
    auto f = girls.first_free_at_or_after(g);
    if (!f) return std::nullopt;
    if (!in_class_[*f]) {
      --non_class_free_left_;
      return f;
    }
    g = *f + 1;
  }
}

std::optional<Catastrophe> WeightedGirlsPolicy::catastrophe() const {
  return machinery_ ? machinery_->catastrophe() : std::nullopt;
}

// --- weighted boys -----------------------------------------------------------

WeightedBoysPolicy::WeightedBoysPolicy(const Instance& inst, double gamma, std::uint64_t seed) {
  RwyParams params{gamma, true};
  if (inst.num_boys() == inst.num_girls()) {
    machinery_ = std::make_unique<RwyPolicy>(inst.n(), params, derive_seed(seed, 3));
  } else if (inst.num_boys() < inst.num_girls()) {
    // ignore the surplus least preferred girls
    usable_.resize(inst.num_boys());
    for (int i = 0; i < inst.num_boys(); ++i) usable_[i] = i + 1;
    machinery_ = std::make_unique<RwyPolicy>(inst.num_boys(), params, derive_seed(seed, 3));
  } else {
    machinery_ = std::make_unique<BalancedReductionBoys>(
        inst.num_girls(), inst.num_boys(), balanced_factory("rwy-r0", gamma),
        derive_seed(seed, 3));
  }
}

Action WeightedBoysPolicy::on_arrival(const ArrivalEvent& ev, const GirlView& girls) {
  if (usable_.empty()) return machinery_->on_arrival(ev, girls);
  SubsetView sv(girls, usable_);
  Action a = machinery_->on_arrival(ev, sv);
  if (!a) return std::nullopt;
  return usable_[*a - 1];
}

std::optional<Catastrophe> WeightedBoysPolicy::catastrophe() const {
  return machinery_ ? machinery_->catastrophe() : std::nullopt;
}

// --- registry ----------------------------------------------------------------

BalancedPolicyFactory balanced_factory(const std::string& name, double gamma) {
  if (name == "classic")
    return [](int n, std::uint64_t) { return std::make_unique<ClassicSecretaryPolicy>(n); };
  if (name == "rwy")
    return [gamma](int n, std::uint64_t seed) {
      return std::make_unique<RwyPolicy>(n, RwyParams{gamma, false}, seed);
    };
  if (name == "rwy-r0")
    return [gamma](int n, std::uint64_t seed) {
      return std::make_unique<RwyPolicy>(n, RwyParams{gamma, true}, seed);
    };
  if (name == "girls")
    return [gamma](int n, std::uint64_t seed) {
      return std::make_unique<SatisfyGirlsPolicy>(n, RwyParams{gamma, false}, seed);
    };
  if (name == "pairs")
    return [](int n, std::uint64_t) { return std::make_unique<PairsPolicy>(n); };
  if (name == "greedy")
    return [](int, std::uint64_t) { return std::make_unique<GreedyBestPolicy>(); };
  throw std::invalid_argument("unknown balanced policy: " + name);
}

std::unique_ptr<OnlinePolicy> make_policy(const std::string& name, const Instance& inst,
                                          const PolicyOptions& opt, std::uint64_t seed) {
  auto require_balanced = [&](const char* what) {
    if (!inst.balanced())
      throw std::invalid_argument(std::string(what) + " requires a balanced instance");
  };
  if (name == "classic")
    return std::make_unique<ClassicSecretaryPolicy>(inst.num_boys(), opt.classic_girl,
                                                    opt.classic_force_last);
  if (name == "rwy" || name == "rwy-r0" || name == "girls" || name == "pairs") {
    require_balanced(name.c_str());
    return balanced_factory(name, opt.gamma)(inst.num_boys(), seed);
  }
  if (name == "greedy") return std::make_unique<GreedyBestPolicy>();
  if (name == "weighted-girls") return std::make_unique<WeightedGirlsPolicy>(inst, opt.gamma, seed);
  if (name == "weighted-boys") return std::make_unique<WeightedBoysPolicy>(inst, opt.gamma, seed);

  constexpr const char* kReduceGirls = "reduce-girls:";
  constexpr const char* kReduceBoys = "reduce-boys:";
  if (name.rfind(kReduceGirls, 0) == 0) {
    std::string inner = name.substr(std::string(kReduceGirls).size());
    std::vector<int> members(inst.num_girls());
    for (int i = 0; i < inst.num_girls(); ++i) members[i] = i + 1;
    return std::make_unique<BalancedReductionGirls>(std::move(members), inst.num_boys(),
                                                    balanced_factory(inner, opt.gamma), seed);
  }
  if (name.rfind(kReduceBoys, 0) == 0) {
    std::string inner = name.substr(std::string(kReduceBoys).size());
    return std::make_unique<BalancedReductionBoys>(inst.num_girls(), inst.num_boys(),
                                                   balanced_factory(inner, opt.gamma), seed);
  }
  throw std::invalid_argument("unknown policy: " + name);
}

std::vector<std::string> balanced_policy_names() {
  return {"classic", "rwy", "rwy-r0", "girls", "pairs", "weighted-girls", "weighted-boys"};
}

}  // namespace stabsec
