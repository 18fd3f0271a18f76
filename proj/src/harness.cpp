#include "romsched/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "romsched/error.hpp"
#include "romsched/rng.hpp"

namespace romsched {

std::string mode_name(const EvalMode& mode) {
  struct Visitor {
    std::string operator()(const FixedOrder&) const { return "fixed"; }
    std::string operator()(const ExactMode&) const { return "exact"; }
    std::string operator()(const MonteCarloMode&) const { return "mc"; }
  };
  return std::visit(Visitor{}, mode);
}

JobSequence permute(const JobSequence& seq, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "permute", 0));
  return seq.reordered(random_order(seq.size(), rng));
}

void enumerate_permutations(std::size_t n, const std::function<void(std::span<const std::size_t>)>& visit,
                            std::size_t cap) {
  if (n > cap) {
    throw BudgetExceeded("full permutation enumeration limited to n <= " + std::to_string(cap) + ", got " +
                         std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  do {
    visit(order);
  } while (std::next_permutation(order.begin(), order.end()));
}

namespace {

/// Positions of jobs grouped by identical size; class labels follow the
/// first appearance in seq.jobs().
struct SizeClasses {
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> labels;  // sorted multiset of class labels
};

SizeClasses size_classes(const JobSequence& seq) {
  SizeClasses out;
  std::map<double, std::size_t> index;
  for (std::size_t pos = 0; pos < seq.size(); ++pos) {
    auto [it, inserted] = index.try_emplace(seq[pos].p, out.members.size());
    if (inserted) out.members.emplace_back();
    out.members[it->second].push_back(pos);
    out.labels.push_back(it->second);
  }
  std::sort(out.labels.begin(), out.labels.end());
  return out;
}

}  // namespace

std::uint64_t count_distinct_arrangements(const JobSequence& seq) {
  // n! / prod(k_v!) built as a product of binomials to stay exact
  const auto classes = size_classes(seq);
  std::uint64_t count = 1;
  std::uint64_t placed = 0;
  for (const auto& group : classes.members) {
    // count * C(placed + r, r) / C(placed + r - 1, r - 1) stays integral
    for (std::uint64_t r = 1; r <= group.size(); ++r) {
      const unsigned __int128 next = static_cast<unsigned __int128>(count) * (placed + r) / r;
      if (next > UINT64_MAX) return UINT64_MAX;
      count = static_cast<std::uint64_t>(next);
    }
    placed += group.size();
  }
  return count;
}

void enumerate_distinct_arrangements(const JobSequence& seq,
                                     const std::function<void(std::span<const std::size_t>)>& visit) {
  auto classes = size_classes(seq);
  std::vector<std::size_t> order(seq.size());
  std::vector<std::size_t> next(classes.members.size());
  do {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t pos = 0; pos < classes.labels.size(); ++pos) {
      const std::size_t label = classes.labels[pos];
      order[pos] = classes.members[label][next[label]++];
    }
    visit(order);
  } while (std::next_permutation(classes.labels.begin(), classes.labels.end()));
}

MakespanSamples sample_makespans(const Scheduler& scheduler, const JobSequence& seq, const EvalMode& mode) {
  MakespanSamples out;
  const auto sizes = seq.sizes_by_id();
  const bool identical = std::all_of(sizes.begin(), sizes.end(), [&](double p) { return p == sizes.front(); });

  if (std::holds_alternative<FixedOrder>(mode)) {
    out.values.push_back(online_makespan(scheduler, seq));
    out.exact = identical;
    return out;
  }
  if (identical) {
    // every order is the same sequence of sizes
    out.values.push_back(online_makespan(scheduler, seq));
    out.exact = true;
    return out;
  }
  if (const auto* exact = std::get_if<ExactMode>(&mode)) {
    auto run = [&](std::span<const std::size_t> order) {
      out.values.push_back(online_makespan(scheduler, seq.reordered(order)));
    };
    if (exact->collapse) {
      const auto count = count_distinct_arrangements(seq);
      if (count > exact->max_arrangements) {
        throw BudgetExceeded("exact mode needs " + (count == UINT64_MAX ? std::string("> 2^64") : std::to_string(count)) +
                             " arrangements, limit is " + std::to_string(exact->max_arrangements));
      }
      out.values.reserve(count);
      enumerate_distinct_arrangements(seq, run);
    } else {
      enumerate_permutations(seq.size(), run, exact->full_cap);
    }
    out.exact = true;
    return out;
  }
  const auto& mc = std::get<MonteCarloMode>(mode);
  if (mc.trials == 0) throw InvalidInput("Monte Carlo mode needs at least one trial");
  out.values.assign(mc.trials, 0.0);
  parallel_for(mc.trials, mc.threads, [&](std::size_t trial) {
    Rng rng(derive_seed(mc.seed, "permute", trial));
    out.values[trial] = online_makespan(scheduler, seq.reordered(random_order(seq.size(), rng)));
  });
  return out;
}

namespace {

RomStats summarize(const MakespanSamples& samples, const EvalMode& mode) {
  RomStats stats;
  stats.mode = mode_name(mode);
  stats.exact = samples.exact;
  stats.runs = samples.values.size();
  const double n = static_cast<double>(stats.runs);
  stats.mean = pairwise_sum(samples.values) / n;
  auto [lo, hi] = std::minmax_element(samples.values.begin(), samples.values.end());
  stats.min = *lo;
  stats.max = *hi;
  // the mean of identical values can land an ulp outside [min, max]
  stats.mean = std::clamp(stats.mean, stats.min, stats.max);
  if (!samples.exact && stats.runs > 1) {
    std::vector<double> sq(stats.runs);
    for (std::size_t k = 0; k < stats.runs; ++k) {
      const double d = samples.values[k] - stats.mean;
      sq[k] = d * d;
    }
    const double variance = pairwise_sum(sq) / (n - 1.0);
    stats.std_error = std::sqrt(variance / n);
  }
  return stats;
}

TailEstimate tail_from(const MakespanSamples& samples, double threshold, const OptBounds& opt) {
  std::size_t above_upper = 0;
  std::size_t above_lower = 0;
  for (double v : samples.values) {
    if (v >= threshold * opt.upper) ++above_upper;
    if (v >= threshold * opt.lower) ++above_lower;
  }
  const double n = static_cast<double>(samples.values.size());
  TailEstimate tail;
  tail.lo = static_cast<double>(above_upper) / n;
  tail.hi = static_cast<double>(above_lower) / n;
  if (samples.exact) {
    tail.ci = {tail.lo, tail.hi};
  } else {
    tail.ci = {wilson_interval(above_upper, samples.values.size()).lo,
               wilson_interval(above_lower, samples.values.size()).hi};
  }
  return tail;
}

}  // namespace

RomStats rom_expected_makespan(const Scheduler& scheduler, const JobSequence& seq, const EvalMode& mode) {
  return summarize(sample_makespans(scheduler, seq, mode), mode);
}

TailEstimate tail_probability(const Scheduler& scheduler, const JobSequence& seq, double ratio_threshold,
                              const EvalMode& mode, const OptLimits& limits) {
  return tail_from(sample_makespans(scheduler, seq, mode), ratio_threshold, resolve_opt(seq, limits));
}

RomStats ratio_report(const Scheduler& scheduler, const JobSequence& seq, const EvalMode& mode,
                      const ReportOptions& options) {
  const auto samples = sample_makespans(scheduler, seq, mode);
  RomStats stats = summarize(samples, mode);
  const auto opt = resolve_opt(seq, options.limits);
  stats.opt = opt;
  if (opt.upper > 0.0) {
    stats.ratio_lo = stats.mean / opt.upper;
    stats.ratio_hi = stats.mean / opt.lower;
  } else {
    // all-zero input: every schedule is optimal
    stats.ratio_lo = stats.ratio_hi = 1.0;
  }
  stats.tail_threshold = options.tail_threshold;
  stats.tail = tail_from(samples, options.tail_threshold, opt);
  return stats;
}

}  // namespace romsched
