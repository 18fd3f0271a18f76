#include "romsched/opt_oracle.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_set>

#include "romsched/error.hpp"

namespace romsched {

std::string_view to_string(OptKind kind) {
  switch (kind) {
    case OptKind::exact: return "exact";
    case OptKind::lower_bound: return "lower_bound";
    case OptKind::upper_bound: return "upper_bound";
  }
  return "?";
}

double opt_lower_bound(const JobSequence& seq) {
  const auto stats = SequenceStats::of(seq);
  return std::max({stats.average_load, stats.p_max, 2.0 * stats.P(static_cast<std::size_t>(stats.m) + 1)});
}

double lpt_upper_bound(const JobSequence& seq) {
  auto sizes = seq.sizes_by_id();
  std::stable_sort(sizes.begin(), sizes.end(), std::greater<>());
  std::vector<double> loads(seq.machines(), 0.0);
  for (double p : sizes) *std::min_element(loads.begin(), loads.end()) += p;
  return *std::max_element(loads.begin(), loads.end());
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(std::vector<double> sizes, int m, double lower, double incumbent, std::uint64_t budget)
      : sizes_(std::move(sizes)), loads_(m, 0.0), lower_(lower), best_(incumbent), budget_(budget) {
    remaining_.resize(sizes_.size() + 1, 0.0);
    for (std::size_t d = sizes_.size(); d-- > 0;) remaining_[d] = remaining_[d + 1] + sizes_[d];
  }

  /// Returns false when the node budget ran out.
  bool solve() {
    if (best_ <= lower_) return true;
    search(0, 0.0);
    return !exhausted_;
  }

  double best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void search(std::size_t depth, double current_max) {
    if (exhausted_ || best_ <= lower_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (depth == sizes_.size()) {
      best_ = current_max;
      return;
    }
    double total = 0.0;
    for (double l : loads_) total += l;
    if (std::max(current_max, (total + remaining_[depth]) / loads_.size()) >= best_) return;
    if (seen_before(depth)) return;

    const double p = sizes_[depth];
    std::vector<int> machines(loads_.size());
    std::iota(machines.begin(), machines.end(), 0);
    std::sort(machines.begin(), machines.end(), [&](int a, int b) { return loads_[a] < loads_[b]; });

    double previous = -1.0;
    for (int machine : machines) {
      const double load = loads_[machine];
      if (load == previous) continue;
      previous = load;
      const double next = load + p;
      // Machines are sorted by load, so every later one is worse.
      if (next >= best_) break;
      loads_[machine] = next;
      search(depth + 1, std::max(current_max, next));
      loads_[machine] = load;
      if (exhausted_ || best_ <= lower_) return;
    }
  }

  // A state is the multiset of loads at a depth. Once explored it cannot
  // beat the incumbent again, since the incumbent only decreases.
  bool seen_before(std::size_t depth) {
    if (depth == 0) return false;
    std::vector<double> key_loads(loads_);
    std::sort(key_loads.begin(), key_loads.end());
    std::string key(sizeof(std::size_t) + key_loads.size() * sizeof(double), '\0');
    std::memcpy(key.data(), &depth, sizeof depth);
    std::memcpy(key.data() + sizeof depth, key_loads.data(), key_loads.size() * sizeof(double));
    if (visited_.count(key)) return true;
    if (visited_.size() < kMaxVisited) visited_.insert(std::move(key));
    return false;
  }

  static constexpr std::size_t kMaxVisited = 1 << 20;

  std::vector<double> sizes_;
  std::vector<double> loads_;
  std::unordered_set<std::string> visited_;
  std::vector<double> remaining_;
  double lower_;
  double best_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

OptResult exact_opt(const JobSequence& seq, const OptLimits& limits) {
  if (seq.size() > limits.max_n) {
    throw InvalidInput("exact_opt: n=" + std::to_string(seq.size()) + " exceeds max_n=" + std::to_string(limits.max_n));
  }
  auto sizes = seq.sizes_by_id();
  std::stable_sort(sizes.begin(), sizes.end(), std::greater<>());
  BranchAndBound bnb(std::move(sizes), seq.machines(), opt_lower_bound(seq), lpt_upper_bound(seq), limits.node_budget);
  const bool complete = bnb.solve();
  return {bnb.best(), complete ? OptKind::exact : OptKind::upper_bound, bnb.nodes()};
}

OptBounds resolve_opt(const JobSequence& seq, const OptLimits& limits) {
  OptBounds bounds;
  bounds.lower = opt_lower_bound(seq);
  bounds.upper = lpt_upper_bound(seq);
  if (seq.size() <= limits.max_n) {
    bounds.best = exact_opt(seq, limits);
    if (bounds.best.kind == OptKind::exact) {
      bounds.lower = bounds.upper = bounds.best.value;
    } else {
      bounds.upper = std::min(bounds.upper, bounds.best.value);
      bounds.best.value = bounds.upper;
    }
    return bounds;
  }
  if (bounds.lower == bounds.upper) {
    bounds.best = {bounds.lower, OptKind::exact, 0};
  } else {
    bounds.best = {bounds.lower, OptKind::lower_bound, 0};
  }
  return bounds;
}

}  // namespace romsched
