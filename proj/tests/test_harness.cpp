#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "stabsec/checks.hpp"
#include "stabsec/experiment.hpp"
#include "stabsec/json_io.hpp"

using namespace stabsec;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.policy_name = "rwy";
  cfg.criterion = Criterion::Boys;
  cfg.num_girls = 50;
  cfg.num_boys = 50;
  cfg.trials = 64;
  cfg.gamma = 0.15;
  cfg.master_seed = 99;
  return cfg;
}

std::string csv_string(const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& recs) {
  std::ostringstream os;
  write_csv(os, cfg, recs);
  return os.str();
}

}  // namespace

TEST_CASE("weights generators") {
  CHECK(make_weights("unit", 3) == std::vector<double>{1, 1, 1});
  CHECK_THROWS(make_weights("", 2));
  CHECK(make_weights("adversarial-heavy", 4) == std::vector<double>{1, 2, 3, 4});
  auto g = make_weights("geometric(0.5)", 4);
  CHECK(g == std::vector<double>{1, 0.5, 0.25, 0.125});
  CHECK_THROWS(make_weights("geometric(-1)", 4));
  CHECK_THROWS(make_weights("/nonexistent/weights.txt", 4));

  // file-backed weights
  const char* path = "weights_test_tmp.txt";
  {
    std::ofstream f(path);
    f << "2.5 1.0\n0.5";
  }
  CHECK(make_weights(path, 3) == std::vector<double>{2.5, 1.0, 0.5});
  CHECK_THROWS(make_weights(path, 4));
  std::remove(path);
}

TEST_CASE("config validation happens before any trial") {
  ExperimentConfig cfg = small_config();
  cfg.criterion = Criterion::GirlWeight;  // no weights spec side for rwy
  CHECK_THROWS(validate_config(cfg));

  cfg = small_config();
  cfg.policy_name = "rwy";
  cfg.num_boys = 60;  // rwy needs balance
  CHECK_THROWS(validate_config(cfg));

  cfg = small_config();
  cfg.policy_name = "no-such-policy";
  CHECK_THROWS(validate_config(cfg));

  cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS(validate_config(cfg));

  CHECK_NOTHROW(validate_config(small_config()));
}

TEST_CASE("reruns with one seed are bit-identical; seeds change the stream") {
  ExperimentConfig cfg = small_config();
  std::vector<ExperimentRecord> a, b, c;
  run_experiment(cfg, &a);
  run_experiment(cfg, &b);
  CHECK(csv_string(cfg, a) == csv_string(cfg, b));

  ExperimentConfig other = cfg;
  other.master_seed = 100;
  run_experiment(other, &c);
  CHECK(csv_string(cfg, a) != csv_string(other, c));
}

TEST_CASE("parallel and sequential runs produce the same records") {
  ExperimentConfig cfg = small_config();
  cfg.trials = 200;
  cfg.threads = 1;
  std::vector<ExperimentRecord> seq, par;
  run_experiment(cfg, &seq);
  cfg.threads = 8;
  run_experiment(cfg, &par);
  CHECK(csv_string(cfg, seq) == csv_string(cfg, par));
}

TEST_CASE("csv schema is stable") {
  CHECK(std::string(kCsvHeader) ==
        "trial,seed,n,m,policy,criterion,sat_girls,sat_boys,sat_pairs,sat_girl_w,sat_boy_w,"
        "optimum,ratio,catastrophe,conservative");
  ExperimentConfig cfg = small_config();
  cfg.trials = 3;
  std::vector<ExperimentRecord> recs;
  run_experiment(cfg, &recs);
  std::istringstream is(csv_string(cfg, recs));
  std::string line;
  std::getline(is, line);
  CHECK(line == kCsvHeader);
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 14);
  }
  CHECK(rows == 3);
}

TEST_CASE("summary quantiles use nearest rank") {
  ExperimentConfig cfg = small_config();
  cfg.policy_name = "classic";
  cfg.criterion = Criterion::Girls;
  cfg.trials = 100;
  std::vector<ExperimentRecord> recs;
  ExperimentSummary s = run_experiment(cfg, &recs);
  std::vector<double> ratios;
  for (const auto& r : recs) ratios.push_back(r.ratio);
  std::sort(ratios.begin(), ratios.end());
  CHECK(s.q5 == ratios[4]);    // ceil(5) = 5th of 100
  CHECK(s.q50 == ratios[49]);
  CHECK(s.q95 == ratios[94]);
  CHECK(s.trials == 100);
  CHECK(s.mean_ratio >= 0);
  CHECK(s.mean_ratio <= 1);
}

TEST_CASE("records stay within the ratio contract") {
  ExperimentConfig cfg = small_config();
  cfg.policy_name = "pairs";
  cfg.criterion = Criterion::Pairs;
  std::vector<ExperimentRecord> recs;
  run_experiment(cfg, &recs);
  for (const auto& r : recs) {
    CHECK(r.ratio >= 0);
    CHECK(r.ratio <= 1);
    CHECK(r.optimum == 50);
    CHECK(r.conservative);  // the pairs policy never skips
  }
}

TEST_CASE("weighted experiment wiring") {
  ExperimentConfig cfg;
  cfg.policy_name = "weighted-boys";
  cfg.criterion = Criterion::BoyWeight;
  cfg.num_girls = 30;
  cfg.num_boys = 30;
  cfg.trials = 50;
  cfg.weights_spec = "adversarial-heavy";
  cfg.master_seed = 3;
  std::vector<ExperimentRecord> recs;
  ExperimentSummary s = run_experiment(cfg, &recs);
  CHECK(s.mean_ratio > 0);
  for (const auto& r : recs) CHECK(r.optimum == doctest::Approx(30.0 * 31 / 2));
}

TEST_CASE("trace dump emits one json line per decision") {
  RunTrace t;
  t.decisions = {{1, 1, Action{3}}, {2, 2, std::nullopt}};
  std::ostringstream os;
  dump_trace_jsonl(os, t);
  CHECK(os.str() == "{\"t\":1,\"relative_rank\":1,\"action\":3}\n"
                    "{\"t\":2,\"relative_rank\":2,\"action\":\"skip\"}\n");
}

TEST_CASE("suite names resolve to criteria") {
  CHECK(suite_criteria("core-oracles") == std::vector<int>{1, 2});
  CHECK(suite_criteria("rwy-guarantee") == std::vector<int>{4, 5});
  CHECK(suite_criteria("adversarial-exact") == std::vector<int>{8});
  CHECK(suite_criteria("bounds") == std::vector<int>{7});
  CHECK(suite_criteria("all").size() == kCriterionCount);
  CHECK_THROWS(suite_criteria("nope"));
}
