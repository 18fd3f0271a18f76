#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romsched/algorithms.hpp"
#include "romsched/generators.hpp"
#include "romsched/harness.hpp"
#include "romsched/opt_oracle.hpp"

namespace romsched {

/// Everything that determines an experiment. Re-running a manifest
/// reproduces its outputs bit for bit: all randomness is derived from `seed`.
struct ExperimentManifest {
  std::string experiment = "experiment";
  std::vector<std::string> schedulers{"greedy", "alg"};

  // input: a generated family or a sequence file
  std::optional<GenSpec> gen;
  std::optional<std::string> input;
  std::optional<int> input_m;  // machine count for CSV / bare-array input

  std::string mode = "exact";  // fixed | exact | mc
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = logical cores
  std::uint64_t max_arrangements = 5'000'000;
  OptLimits limits;
  double tail_threshold = 1.5;
  HChoice h_choice;

  // stability sweeps
  double epsilon = 0.1;
  std::vector<int> m_values;
  double n_per_m = 1.3;
  std::vector<double> phis{0.5};

  bool verify_constants = false;

  // outputs; an empty out_dir falls back to $ROMSCHED_OUTPUT_DIR, then "."
  std::string out_dir;
  bool write_csv = true;
  bool write_json = true;
  bool traces = false;

  friend bool operator==(const ExperimentManifest&, const ExperimentManifest&) = default;
};

std::string manifest_to_json(const ExperimentManifest& manifest);
/// Throws InvalidInput on malformed manifests. Missing keys keep defaults.
ExperimentManifest manifest_from_json(const std::string& text);

/// Checks cross-field consistency (exactly one input, known mode, ...).
void validate(const ExperimentManifest& manifest);

/// The evaluation mode described by the manifest.
EvalMode eval_mode(const ExperimentManifest& manifest);

std::string to_string(HChoice choice);
HChoice parse_h_choice(const std::string& text);

}  // namespace romsched
