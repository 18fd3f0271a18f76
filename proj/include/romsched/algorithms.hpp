#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "romsched/model.hpp"

namespace romsched {

/// The unique real root of Q(x) = 4x^3 - 14x^2 + 16x - 7, from the closed
/// form refined by Newton steps on Q.
double competitive_constant();

/// Q(x) = 4x^3 - 14x^2 + 16x - 7.
double cubic_Q(double x);

enum class HRule { cbrt, log, explicit_h };

struct HChoice {
  HRule rule = HRule::cbrt;
  int h = 0;  // only read for HRule::explicit_h

  static HChoice explicit_value(int h) { return {HRule::explicit_h, h}; }
  friend bool operator==(const HChoice&, const HChoice&) = default;
};

/// h for a given m: floor(cbrt(m)) or floor(ln m), clamped to >= 1, or the
/// explicit value.
int reluctance_for(int m, HChoice choice);

/// Constants driving ALG for one machine count.
struct AlgConfig {
  int m = 0;
  int h = 0;
  double c = 0.0;
  int i = 0;  // rank of the heavily loaded candidate, ceil((2c-3)m) + h
  int k = 0;  // steepness rank, 2i - m
  double alpha = 0.0;
};

/// Derives and validates the configuration. Throws ConfigInvalid when the
/// ranks i, m-h, m are not distinct and ordered (i.e. i >= m-h or k < 1),
/// reporting the minimal valid m for the same rule.
AlgConfig derive_constants(int m, HChoice choice = {});

/// Smallest m >= 1 for which derive_constants succeeds, or 0 if none up to
/// `search_limit`.
int minimal_valid_m(HChoice choice, int search_limit = 100000);

/// Checks the structural invariants of a (possibly hand-built) config.
void validate_config(const AlgConfig& cfg);

/// One candidate probe of ALG: the machine's load and whether l + p <= c O^t.
struct CandidateCheck {
  double load = 0.0;
  bool fits = false;
};

/// Per-job record of a placement decision.
struct StepTrace {
  std::size_t t = 0;  // 1-based arrival position
  std::size_t job_id = 0;
  double p = 0.0;
  double lower_bound = 0.0;  // O^t
  std::optional<bool> steep;  // set by ALG only
  std::optional<CandidateCheck> rank_i;
  std::optional<CandidateCheck> rank_m_minus_h;
  int chosen_rank = 0;
  double resulting_load = 0.0;
  double makespan = 0.0;
};

/// A placement decision. `trace` is pre-filled by the scheduler with its
/// decision details; run_online completes the outcome fields.
struct Placement {
  int rank = 0;
  StepTrace trace;
};

/// An online scheduler. Implementations are stateless: all state lives in
/// the ScheduleState/PrefixStats pair owned by a run, so one instance can
/// serve concurrent runs.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  /// `stats` already includes `job`.
  virtual Placement place(const ScheduleState& state, const PrefixStats& stats, const Job& job) const = 0;
};

class GreedyScheduler final : public Scheduler {
 public:
  std::string name() const override { return "greedy"; }
  Placement place(const ScheduleState& state, const PrefixStats& stats, const Job& job) const override;
};

/// NOT(l_k < alpha * L_{i+1}) on the schedule before the incoming job.
bool is_steep(const ScheduleState& state, const AlgConfig& cfg);

/// ALG's decision for one job; returns the rank i, m-h or m.
Placement alg_place(const ScheduleState& state, const PrefixStats& stats, const Job& job, const AlgConfig& cfg);

/// Greedy's decision: always rank m.
int greedy_place(const ScheduleState& state, const Job& job);

class AlgScheduler final : public Scheduler {
 public:
  explicit AlgScheduler(AlgConfig cfg);
  std::string name() const override { return "alg"; }
  Placement place(const ScheduleState& state, const PrefixStats& stats, const Job& job) const override;
  const AlgConfig& config() const noexcept { return cfg_; }

 private:
  AlgConfig cfg_;
};

struct RunResult {
  double makespan = 0.0;
  std::vector<int> machine_of_job;  // indexed by job id
  std::vector<double> final_loads;  // sorted, non-increasing
  std::vector<StepTrace> traces;    // empty unless requested
};

/// Processes the sequence in the given order: observe, then place, for each
/// job.
RunResult run_online(const Scheduler& scheduler, const JobSequence& seq, bool keep_traces = false);

/// Makespan only; avoids trace bookkeeping.
double online_makespan(const Scheduler& scheduler, const JobSequence& seq);

/// Options passed to scheduler factories.
struct SchedulerOptions {
  HChoice h_choice;
};

using SchedulerFactory = std::function<std::unique_ptr<Scheduler>(int m, const SchedulerOptions&)>;

/// Name -> factory map. "greedy" and "alg" are always present.
class SchedulerRegistry {
 public:
  SchedulerRegistry();
  void add(const std::string& name, SchedulerFactory factory);
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;
  /// Throws InvalidInput on unknown names; factories may throw ConfigInvalid.
  std::unique_ptr<Scheduler> make(const std::string& name, int m, const SchedulerOptions& options = {}) const;

  static SchedulerRegistry& global();

 private:
  mutable std::mutex mutex_;
  std::map<std::string, SchedulerFactory> factories_;
};

/// One JSON object per line.
std::string trace_to_json_line(const StepTrace& trace);

}  // namespace romsched
