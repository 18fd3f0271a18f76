#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romsched/algorithms.hpp"
#include "romsched/model.hpp"
#include "romsched/statistics.hpp"

namespace romsched {

// Stability of a permuted job sequence.
//
// Conventions used throughout this module:
//  * L is the average load of the whole permuted sequence, accumulated in
//    arrival order, so that L^n == L exactly.
//  * "the prefix ending once L^t >= X" is the shortest prefix whose last job
//    makes L^t reach X (inclusive); if X is never reached it is the whole
//    sequence. "ending right before" drops that last job.
//  * The set of the j largest jobs is the first j jobs when sorted by
//    processing time descending, ties broken by ascending id.

struct StabilityParams {
  double epsilon = 0.1;
  AlgConfig cfg;
};

/// Throws InvalidInput unless 0 < epsilon < 2 - c and cfg is structurally
/// valid.
void validate(const StabilityParams& params);

/// Load thresholds, as fractions of L, used by the four conditions.
struct StabilityThresholds {
  double pmax_reveal;  // (c-1) i/m                 condition 2
  double early;        // (i/m)(c-1) epsilon         condition 4(a)
  /// j/m + epsilon/2                               condition 3
  double counting(int j) const { return static_cast<double>(j) / m + epsilon / 2.0; }
  int m;
  double epsilon;
};

StabilityThresholds thresholds(const StabilityParams& params);

/// Job ids ordered by processing time descending, ties by ascending id.
std::vector<std::size_t> ranked_job_ids(const JobSequence& seq);

/// Ids of the j largest jobs, in ascending id order.
std::vector<std::size_t> largest_job_set(const JobSequence& seq, std::size_t j);

struct ConditionVerdict {
  bool holds = true;
  std::size_t t = 0;      // 1-based position where the verdict was decided, 0 if vacuous
  double observed = 0.0;  // condition-specific quantity seen
  double required = 0.0;  // and the bound it had to meet
  std::optional<int> j;   // condition 3: offending j
};

struct StabilityReport {
  bool stable = false;
  std::array<ConditionVerdict, 4> conditions;

  /// 1-based indices of violated conditions.
  std::vector<int> violated() const;
};

/// Evaluates the four stability conditions on a permuted sequence in one
/// pass over the arrivals.
///   1. n > m
///   2. at the first t with L^t >= (c-1)(i/m)L: p_max^t >= P_h
///   3. for j in [i, m-h-1]: the prefix ending once L^t >= (j/m + eps/2)L
///      holds >= j+h+2 of the m+1 largest jobs
///   4. the prefix ending right before the earlier of L^t >= (i/m)(c-1)eps L
///      and the arrival of the rank-h job holds >= h+1 of the m+1 largest jobs
StabilityReport check_stable(const JobSequence& perm, const StabilityParams& params);

/// N(phi): members of the m+1 largest jobs arriving at a t with L^t <= phi L.
std::size_t count_N(const JobSequence& perm, double phi);

/// |L^{floor(phi n)} / (phi L) - 1|.
double load_lemma_deviation(const JobSequence& perm, double phi);

struct StabilityEstimate {
  double estimate = 0.0;
  Interval ci;  // Wilson 95%; degenerate when exact
  std::size_t samples = 0;
  std::size_t stable = 0;
  bool exact = false;
};

struct EstimateOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t exact_cap = 9;  // enumerate all n! orders when n <= exact_cap
};

/// Fraction of stable permutations of a proper sequence. Throws NotProper
/// for plain sequences and InvalidInput for trials == 0.
StabilityEstimate estimate_stability_probability(const JobSequence& seq, const StabilityParams& params,
                                                 const EstimateOptions& options);

/// Closed-form helpers for the analysis constants.
struct AnalysisConstants {
  double c;

  double lambda_start() const { return (c - 1.0) / (1.0 + 2.0 * c * (2.0 - c)); }
  double lambda_end(double epsilon) const { return 1.0 / (2.0 * (c - 1.0 + epsilon)); }
  double f(double lambda) const { return 2.0 * c * lambda - 1.0; }
  double g(double w) const { return g_slope() * w + g_intercept(); }
  double f_b(double w, double b) const { return f(w / b) * b; }
  double g_b(double lambda, double b) const { return g(lambda / b) * b; }
  double g_slope() const { return c * (2.0 * c - 3.0) - 1.0; }
  double g_intercept() const { return 4.0 - 2.0 * c; }
  /// F(lambda) = g(f(lambda)) - lambda, which is linear in lambda.
  double F(double lambda) const { return g(f(lambda)) - lambda; }
  double F_slope() const { return ((4.0 * c - 6.0) * c - 2.0) * c - 1.0; }
  double F_intercept() const { return (-2.0 * c + 1.0) * c + 5.0; }
};

struct ConstantsReport {
  double c = 0.0;
  double Q_residual = 0.0;
  double alpha = 0.0;
  double alpha_identity_error = 0.0;
  double i_over_m = 0.0;
  double k_over_m = 0.0;
  double lambda_start = 0.0;
  double lambda_end_limit = 0.0;  // epsilon -> 0+
  double F_at_start = 0.0;
  double F_slope = 0.0;
  double F_intercept = 0.0;
  double F_linear_max_error = 0.0;
  double g_slope = 0.0;
  double g_intercept = 0.0;
  std::size_t gf_points = 0;
  std::size_t gf_failures = 0;     // g(f(lambda)) <= lambda
  std::size_t geps_points = 0;
  std::size_t geps_failures = 0;   // g(1-eps) <= lambda_end(eps)
  std::size_t order_failures = 0;  // lambda_start >= lambda_end(eps); expected once eps passes the crossover
  double order_crossover = 0.0;    // lambda_start < lambda_end(eps) exactly for eps below this

  bool passed() const {
    return gf_failures == 0 && geps_failures == 0 && F_at_start > 0.0 &&
           F_linear_max_error <= 1e-12;
  }
};

/// `count` evenly spaced points in (lo, hi].
std::vector<double> half_open_grid(double lo, double hi, std::size_t count);

/// Checks g(f(lambda)) > lambda on lambda_grid, g(1-eps) > lambda_end(eps)
/// and lambda_start < lambda_end(eps) on epsilon_grid, F(lambda_start) > 0,
/// and that F agrees with its linear form on lambda_grid.
ConstantsReport verify_analysis_constants(const AlgConfig& cfg, const std::vector<double>& epsilon_grid,
                                          const std::vector<double>& lambda_grid);

std::string to_json(const StabilityReport& report);

}  // namespace romsched
