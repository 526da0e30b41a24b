#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stabsec/arrival.hpp"
#include "stabsec/core.hpp"
#include "stabsec/engine.hpp"

namespace stabsec {

struct ExperimentConfig {
  std::string policy_name;
  Criterion criterion = Criterion::Girls;
  int num_girls = 0;
  int num_boys = 0;  // 0 means balanced
  long long trials = 1;
  ArrivalProcess arrival;  // boy_count filled in by validate() when left at 0
  double gamma = 0.15;
  std::string weights_spec;  // "", "unit", "geometric(q)", "adversarial-heavy", or a file path
  std::uint64_t master_seed = 1;
  std::string output_path;  // CSV per trial; empty = no file
  int threads = 0;          // 0 = hardware concurrency (capped by STABSEC_THREADS)
};

struct ExperimentRecord {
  long long trial = 0;
  std::uint64_t seed = 0;
  int sat_girls = 0;
  int sat_boys = 0;
  int sat_pairs = 0;
  double sat_girl_weight = 0;
  double sat_boy_weight = 0;
  double optimum = 0;
  double ratio = 0;
  std::optional<Catastrophe> catastrophe;
  bool conservative = false;
};

struct ExperimentSummary {
  double mean_ratio = 0;
  double std_dev = 0;
  double q5 = 0, q50 = 0, q95 = 0;  // nearest-rank quantiles of the ratio
  double catastrophe_rate = 0;
  long long trials = 0;
};

// Weight vectors from a spec string: "unit", "geometric(q)" with w_i =
// q^(i-1), "adversarial-heavy" with w_i = i (heaviest least preferred), or a
// whitespace-separated file of positive reals.
std::vector<double> make_weights(const std::string& spec, int count);

// Builds the instance the config describes (weights attached to the side the
// criterion scores; unweighted criteria leave both sides plain).
Instance build_instance(const ExperimentConfig& cfg);

// Throws std::invalid_argument on bad combinations before any trial runs.
void validate_config(const ExperimentConfig& cfg);

// Runs all trials (parallel), writes the CSV when output_path is set, and
// returns the summary. Bit-identical output for a fixed master_seed
// regardless of thread count.
ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 std::vector<ExperimentRecord>* out_records = nullptr);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const ExperimentConfig& cfg,
               const std::vector<ExperimentRecord>& records);
std::string summary_json(const ExperimentSummary& s);

// one decision per line: {"t":..,"relative_rank":..,"action":..}
void dump_trace_jsonl(std::ostream& os, const RunTrace& trace);

int resolve_threads(int requested);

}  // namespace stabsec
