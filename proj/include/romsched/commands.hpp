#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "romsched/harness.hpp"
#include "romsched/manifest.hpp"
#include "romsched/stability.hpp"

namespace romsched {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidManifest = 2,
  kExitBudgetExceeded = 3,
  kExitInternal = 4,
};

/// Maps a library exception to the CLI exit code.
int exit_code_for(const std::exception& error);

inline constexpr const char* kResultsCsvHeader =
    "experiment,scheduler,m,n,seed,mode,rom_mean,rom_stderr,opt,opt_kind,ratio_lo,ratio_hi,tail_prob";
inline constexpr int kResultsSchemaVersion = 1;

struct ExperimentRow {
  std::string experiment;
  std::string scheduler;
  int m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  RomStats stats;
  std::vector<StepTrace> traces;  // given-order run, when requested
};

/// Builds the experiment's job sequence from the manifest input.
Generated load_input(const ExperimentManifest& manifest);

/// Runs every scheduler of the manifest on its input.
std::vector<ExperimentRow> run_experiment(const ExperimentManifest& manifest, const JobSequence& seq);

std::string csv_row(const ExperimentRow& row);
std::string results_json(const ExperimentManifest& manifest, const std::vector<ExperimentRow>& rows);

/// The report printed by --verify-constants.
std::string constants_summary(const ConstantsReport& report, const AlgConfig& cfg);

/// Output directory: manifest.out_dir, else $ROMSCHED_OUTPUT_DIR, else ".".
std::filesystem::path output_dir(const ExperimentManifest& manifest);

int cmd_run(const ExperimentManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_stability(const ExperimentManifest& manifest, std::ostream& out, std::ostream& err);

}  // namespace romsched
