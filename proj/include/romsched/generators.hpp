#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "romsched/algorithms.hpp"
#include "romsched/model.hpp"

namespace romsched {

class Rng;

/// r*m unit jobs.
JobSequence uniform_jobs(int r, int m);

/// 4m-4 unit jobs followed by one job of size 4; OPT = 4. The lower-bound
/// argument needs m >= 8, smaller m is still generated.
JobSequence lb_four_thirds(int m);

/// 2m-2 unit jobs followed by one job of size 2; OPT = 2.
JobSequence lb_three_halves(int m);

/// m(m-1) unit jobs followed by one job of size m. Greedy in this order has
/// ratio 2 - 1/m.
JobSequence greedy_adversarial(int m);

enum class DistKind { uniform, two_point, pareto };

/// Processing-time distribution.
///   uniform:   U[a, b)
///   two_point: b with probability q, else a
///   pareto:    Pareto(scale a, shape q) truncated to [a, b]
struct Distribution {
  DistKind kind = DistKind::uniform;
  double a = 1.0;
  double b = 2.0;
  double q = 0.5;

  double sample(Rng& rng) const;
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

std::string to_string(const Distribution& dist);
/// Parses "uniform(a,b)", "two-point(a,b,q)" or "pareto(a,b,shape)".
Distribution parse_distribution(std::string_view text);

/// n i.i.d. draws, regenerated with a fresh derived stream until the
/// sequence is proper. Attempt k draws from derive_seed(seed, "random_proper", k).
JobSequence random_proper(int m, std::size_t n, const Distribution& dist, std::uint64_t seed, int max_retries = 100);

enum class Family { uniform_r, lb_four_thirds, lb_three_halves, greedy_adversarial, random_proper };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct GenSpec {
  Family family = Family::lb_four_thirds;
  int m = 8;
  int r = 1;           // uniform_r
  std::size_t n = 0;   // random_proper
  Distribution dist;   // random_proper
  std::uint64_t seed = 0;

  friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

struct Generated {
  JobSequence seq;
  std::vector<std::string> warnings;
};

/// Generates the family and checks the result has the family's shape.
Generated generate(const GenSpec& spec);

struct ProbeResult {
  int rounds = 0;          // r(A, m), capped at r_max
  bool saturated = false;  // every probed job went to a least-loaded machine
};

/// Feeds r_max rounds of m unit jobs and returns the number of complete
/// rounds in which every job landed on a machine of minimum load.
ProbeResult probe_r(const Scheduler& scheduler, int m, int r_max);

}  // namespace romsched
