#pragma once

#include <cstdint>
#include <string_view>

#include "romsched/model.hpp"

namespace romsched {

enum class OptKind { exact, lower_bound, upper_bound };

std::string_view to_string(OptKind kind);

struct OptResult {
  double value = 0.0;
  OptKind kind = OptKind::exact;
  std::uint64_t node_count = 0;
};

struct OptLimits {
  std::size_t max_n = 24;
  std::uint64_t node_budget = 50'000'000;

  friend bool operator==(const OptLimits&, const OptLimits&) = default;
};

/// max{L, p_max, 2 P_{m+1}}.
double opt_lower_bound(const JobSequence& seq);

/// Makespan of longest-processing-time-first list scheduling.
double lpt_upper_bound(const JobSequence& seq);

/// Exact minimum makespan by depth-first branch-and-bound.
///
/// Jobs are branched in descending size; machines are tried in ascending load
/// order and machines whose load duplicates one already tried at the node are
/// skipped. When the node budget runs out the best schedule found so far is
/// returned with kind upper_bound. Throws InvalidInput when n > max_n.
OptResult exact_opt(const JobSequence& seq, const OptLimits& limits = {});

/// Lower bound, upper bound and (when available) the exact value.
struct OptBounds {
  double lower = 0.0;
  double upper = 0.0;
  OptResult best;  // exact when solved, otherwise the tighter known bound

  bool is_exact() const { return best.kind == OptKind::exact; }
};

/// Exact OPT when n <= max_n and the budget suffices, otherwise
/// [opt_lower_bound, min(LPT, best incumbent)].
OptBounds resolve_opt(const JobSequence& seq, const OptLimits& limits = {});

}  // namespace romsched
