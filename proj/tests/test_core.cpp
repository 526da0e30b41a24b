#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "stabsec/core.hpp"
#include "stabsec/json_io.hpp"
#include "stabsec/rng.hpp"

using namespace stabsec;

namespace {

Matching from_pairs(std::initializer_list<std::pair<int, int>> boy_girl) {
  Matching m;
  for (auto [b, g] : boy_girl) m.add(b, g);
  return m;
}

// blocking pairs straight from the definition, independent of the library sweep
std::vector<std::pair<int, int>> oracle_blocking(const Instance& inst, const Matching& m) {
  std::vector<std::pair<int, int>> out;
  for (int g = 1; g <= inst.num_girls(); ++g)
    for (int b = 1; b <= inst.num_boys(); ++b) {
      int gb = m.girl_of(b), bg = m.boy_of(g);
      if ((gb == 0 || g < gb) && (bg == 0 || b < bg)) out.emplace_back(g, b);
    }
  return out;
}

Matching random_partial_matching(const Instance& inst, Rng& rng) {
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

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS(Instance(0, 3));
  CHECK_THROWS(Instance(3, 3, std::vector<double>{1, 2}));
  CHECK_THROWS(Instance(2, 2, std::vector<double>{1, -1}));
  Instance ok(2, 3, std::vector<double>{1, 2}, std::vector<double>{5, 1, 7});
  CHECK(ok.n() == 2);
}

TEST_CASE("matching enforces injectivity") {
  Matching m;
  m.add(1, 2);
  CHECK_THROWS(m.add(1, 3));
  CHECK_THROWS(m.add(2, 2));
  m.add(2, 1);
  CHECK(m.girl_of(2) == 1);
  CHECK(m.boy_of(2) == 1);
  CHECK(m.boy_of(3) == 0);
}

TEST_CASE("blocking pairs: empty matching blocks everywhere") {
  Instance inst(2, 2);
  auto bp = blocking_pairs(inst, Matching{});
  CHECK(bp.size() == 4);  // everyone prefers any match to none
}

TEST_CASE("blocking pairs: assortative matching is stable") {
  Instance inst(3, 3);
  CHECK(blocking_pairs(inst, from_pairs({{1, 1}, {2, 2}, {3, 3}})).empty());
}

TEST_CASE("blocking pairs: one swap yields exactly (g1,b1)") {
  Instance inst(3, 3);
  auto bp = blocking_pairs(inst, from_pairs({{1, 2}, {2, 1}, {3, 3}}));
  CHECK(bp == std::vector<std::pair<int, int>>{{1, 1}});
  CHECK(bp == oracle_blocking(inst, from_pairs({{1, 2}, {2, 1}, {3, 3}})));
}

TEST_CASE("satisfaction on the swapped matching") {
  Instance inst(3, 3);
  auto rep = evaluate_satisfaction(inst, from_pairs({{1, 2}, {2, 1}, {3, 3}}));
  CHECK(rep.satisfied_girls == std::vector<int>{2, 3});
  CHECK(rep.satisfied_boys == std::vector<int>{2, 3});
  CHECK(rep.satisfied_pairs == std::vector<std::pair<int, int>>{{3, 3}});
}

TEST_CASE("satisfaction on the assortative matching") {
  Instance inst(3, 3);
  auto rep = evaluate_satisfaction(inst, from_pairs({{1, 1}, {2, 2}, {3, 3}}));
  CHECK(rep.satisfied_girls.size() == 3);
  CHECK(rep.satisfied_boys.size() == 3);
  CHECK(rep.satisfied_pairs.size() == 3);
}

TEST_CASE("the top pair is satisfied whenever matched together") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Instance inst(rng.uniform_int(1, 12), rng.uniform_int(1, 12));
    Matching m = random_partial_matching(inst, rng);
    if (m.girl_of(1) != 1) continue;
    auto rep = evaluate_satisfaction(inst, m);
    CHECK(std::count(rep.satisfied_pairs.begin(), rep.satisfied_pairs.end(),
                     std::pair<int, int>{1, 1}) == 1);
  }
}

TEST_CASE("invalid matching is rejected") {
  Instance inst(2, 2);
  CHECK_THROWS(blocking_pairs(inst, from_pairs({{1, 3}})));
  CHECK_THROWS(evaluate_satisfaction(inst, from_pairs({{3, 1}})));
}

TEST_CASE("stable matching examples") {
  Instance wide(3, 5);
  Matching m = stable_matching(wide);
  CHECK(m.pairs() == std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 3}});
  CHECK(!m.boy_matched(4));
  CHECK(!m.boy_matched(5));
  CHECK(blocking_pairs(wide, m).empty());

  Instance one(1, 1);
  CHECK(stable_matching(one).pairs() == std::vector<std::pair<int, int>>{{1, 1}});
}

TEST_CASE("stable matching is blocking-free across random sizes") {
  Rng rng(8);
  for (int i = 0; i < 120; ++i) {
    Instance inst(rng.uniform_int(1, 200), rng.uniform_int(1, 200));
    Matching m = stable_matching(inst);
    auto rep = evaluate_satisfaction(inst, m);
    CHECK(rep.blocking_pairs.empty());
    CHECK(static_cast<int>(rep.satisfied_pairs.size()) == inst.n());
  }
}

TEST_CASE("optimum values") {
  CHECK(optimum_value(Instance(4, 2), Criterion::Girls) == 2);
  Instance weighted(2, 3, std::nullopt, std::vector<double>{5, 1, 7});
  CHECK(optimum_value(weighted, Criterion::BoyWeight) == 12);  // two heaviest of {5,1,7}
  Instance unit(6, 6, std::vector<double>(6, 1.0), std::nullopt);
  CHECK(optimum_value(unit, Criterion::GirlWeight) == 6);
  CHECK_THROWS(optimum_value(Instance(2, 2), Criterion::GirlWeight));
}

TEST_CASE("heaviest set breaks weight ties toward preferred indices") {
  Instance inst(4, 2, std::vector<double>{3, 7, 7, 3}, std::nullopt);
  CHECK(heaviest_girls(inst) == std::vector<int>{2, 3});
  Instance tied(4, 2, std::vector<double>{5, 5, 5, 5}, std::nullopt);
  CHECK(heaviest_girls(tied) == std::vector<int>{1, 2});
}

TEST_CASE("transposition") {
  Instance inst(3, 3);
  Matching m = from_pairs({{1, 2}});
  Matching t = transpose_matching(m, inst);
  CHECK(t.girl_of(3) == 2);  // boy 1 -> boy 3, girl 2 -> girl 2
  CHECK(t.size() == 1);

  CHECK_THROWS(transpose_instance(Instance(2, 3)));
  CHECK_THROWS(transpose_instance(Instance(2, 2, std::vector<double>{1, 2}, std::nullopt)));

  Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    int n = rng.uniform_int(1, 12);
    Instance bal(n, n);
    std::vector<int> girls(n);
    std::iota(girls.begin(), girls.end(), 1);
    for (int j = n - 1; j > 0; --j) std::swap(girls[j], girls[rng.uniform_int(0, j)]);
    Matching perfect;
    for (int b = 1; b <= n; ++b) perfect.add(b, girls[b - 1]);
    Matching tp = transpose_matching(perfect, bal);
    // involution
    Matching back = transpose_matching(tp, bal);
    CHECK(back.pairs() == perfect.pairs());
    // boy satisfaction maps to girl satisfaction of the transposed matching
    auto rep = evaluate_satisfaction(bal, perfect);
    auto rep_t = evaluate_satisfaction(bal, tp);
    CHECK(rep.satisfied_boys.size() == rep_t.satisfied_girls.size());
    for (int b : rep.satisfied_boys) {
      int tb = n + 1 - b;
      CHECK(std::count(rep_t.satisfied_girls.begin(), rep_t.satisfied_girls.end(),
                       tp.girl_of(tb)) == 1);
    }
  }
}

TEST_CASE("satisfied individuals are matched and unblocked") {
  Rng rng(10);
  for (int i = 0; i < 400; ++i) {
    Instance inst(rng.uniform_int(1, 15), rng.uniform_int(1, 15));
    Matching m = random_partial_matching(inst, rng);
    auto rep = evaluate_satisfaction(inst, m);
    std::set<int> blocked_girls, blocked_boys;
    for (auto [g, b] : rep.blocking_pairs) {
      blocked_girls.insert(g);
      blocked_boys.insert(b);
    }
    for (int g : rep.satisfied_girls) {
      CHECK(m.girl_matched(g));
      CHECK(blocked_girls.count(g) == 0);
    }
    for (int b : rep.satisfied_boys) {
      CHECK(m.boy_matched(b));
      CHECK(blocked_boys.count(b) == 0);
    }
    // pairs are exactly the matched pairs with both sides satisfied
    for (auto [g, b] : rep.satisfied_pairs) CHECK(m.boy_of(g) == b);
  }
}

TEST_CASE("counts agree with the full report") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Instance inst(rng.uniform_int(1, 18), rng.uniform_int(1, 18));
    Matching m = random_partial_matching(inst, rng);
    auto rep = evaluate_satisfaction(inst, m);
    SatCounts c = satisfaction_counts(inst, m);
    CHECK(c.girls == static_cast<int>(rep.satisfied_girls.size()));
    CHECK(c.boys == static_cast<int>(rep.satisfied_boys.size()));
    CHECK(c.pairs == static_cast<int>(rep.satisfied_pairs.size()));
  }
}

TEST_CASE("json round trips") {
  Instance inst(2, 3, std::vector<double>{1.5, 2.0}, std::nullopt);
  Instance back = instance_from_json(instance_to_json(inst));
  CHECK(back.num_girls() == 2);
  CHECK(back.num_boys() == 3);
  CHECK(back.girl_weight(2) == 2.0);
  CHECK(!back.has_boy_weights());

  Matching m = from_pairs({{2, 1}, {1, 2}});
  Matching mback = matching_from_json(matching_to_json(m));
  CHECK(mback.pairs() == m.pairs());
}
