#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "romsched/algorithms.hpp"
#include "romsched/model.hpp"
#include "romsched/opt_oracle.hpp"
#include "romsched/statistics.hpp"

namespace romsched {

/// Run the sequence once, in the order given (adversarial order).
struct FixedOrder {
  friend bool operator==(const FixedOrder&, const FixedOrder&) = default;
};

/// Average over every arrival order.
///
/// With `collapse` set, orders that differ only by swapping equal-sized jobs
/// are visited once; every distinct arrangement of the size multiset is
/// equally likely, so the plain average over arrangements is the exact
/// expectation. This assumes the scheduler looks at sizes only, never at job
/// ids, which holds for every built-in scheduler. Without `collapse` all n!
/// orders are enumerated (n <= full_cap).
struct ExactMode {
  bool collapse = true;
  std::uint64_t max_arrangements = 5'000'000;
  std::size_t full_cap = 9;
  friend bool operator==(const ExactMode&, const ExactMode&) = default;
};

/// Average over `trials` uniformly random orders. Trial k uses the stream
/// derive_seed(seed, "permute", k), so results do not depend on `threads`.
struct MonteCarloMode {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  friend bool operator==(const MonteCarloMode&, const MonteCarloMode&) = default;
};

using EvalMode = std::variant<FixedOrder, ExactMode, MonteCarloMode>;

std::string mode_name(const EvalMode& mode);

/// A uniformly random permutation of the sequence, deterministic per seed.
JobSequence permute(const JobSequence& seq, std::uint64_t seed);

/// Calls visit(order) once for each of the n! orders of 0..n-1.
/// Throws BudgetExceeded if n > cap.
void enumerate_permutations(std::size_t n, const std::function<void(std::span<const std::size_t>)>& visit,
                            std::size_t cap = 9);

/// Number of distinct arrangements of the size multiset, saturating at
/// UINT64_MAX.
std::uint64_t count_distinct_arrangements(const JobSequence& seq);

/// Calls visit(order) once per distinct arrangement of the size multiset;
/// `order` indexes into seq.jobs().
void enumerate_distinct_arrangements(const JobSequence& seq,
                                     const std::function<void(std::span<const std::size_t>)>& visit);

/// Makespans observed over the orders selected by the mode.
struct MakespanSamples {
  std::vector<double> values;
  bool exact = false;  // values cover every order with equal weight
};

MakespanSamples sample_makespans(const Scheduler& scheduler, const JobSequence& seq, const EvalMode& mode);

struct TailEstimate {
  double lo = 0.0;  // against the upper bound of OPT
  double hi = 0.0;  // against the lower bound of OPT; equal to lo when OPT is exact
  Interval ci;      // Wilson 95% around [lo, hi] for Monte Carlo, [lo, hi] otherwise
};

struct RomStats {
  std::string mode;
  std::size_t runs = 0;
  bool exact = false;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<OptBounds> opt;
  double ratio_lo = 0.0;  // mean / OPT upper bound
  double ratio_hi = 0.0;  // mean / OPT lower bound
  double tail_threshold = 0.0;
  TailEstimate tail;
};

/// Expected makespan over random arrival orders (no OPT).
RomStats rom_expected_makespan(const Scheduler& scheduler, const JobSequence& seq, const EvalMode& mode);

/// Fraction of orders with makespan >= ratio_threshold * OPT.
TailEstimate tail_probability(const Scheduler& scheduler, const JobSequence& seq, double ratio_threshold,
                              const EvalMode& mode, const OptLimits& limits = {});

struct ReportOptions {
  OptLimits limits;
  double tail_threshold = 1.5;
};

/// rom expectation combined with OPT: exact ratio when OPT is solved,
/// otherwise an interval from opt_lower_bound and the best upper bound.
RomStats ratio_report(const Scheduler& scheduler, const JobSequence& seq, const EvalMode& mode,
                      const ReportOptions& options = {});

}  // namespace romsched
