#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <vector>

namespace romsched {

/// A job: its index in the original input order and its processing time.
struct Job {
  std::size_t id = 0;
  double p = 0.0;

  friend bool operator==(const Job&, const Job&) = default;
};

/// Jobs in arrival order together with the machine count.
///
/// Job ids are always exactly {0, ..., n-1}; a permuted sequence keeps the
/// ids of the base sequence and only changes the order.
class JobSequence {
 public:
  /// Builds a sequence in input order, assigning ids 0..n-1.
  JobSequence(std::vector<double> sizes, int machines);

  /// Builds a sequence from explicit jobs (arrival order = vector order).
  /// The ids must form a permutation of 0..n-1.
  static JobSequence from_jobs(std::vector<Job> jobs, int machines);

  int machines() const noexcept { return machines_; }
  std::size_t size() const noexcept { return jobs_.size(); }
  std::span<const Job> jobs() const noexcept { return jobs_; }
  const Job& operator[](std::size_t t) const { return jobs_[t]; }

  /// Processing times indexed by job id (the base order).
  std::vector<double> sizes_by_id() const;

  /// Returns the sequence reordered so that position t holds jobs()[order[t]].
  JobSequence reordered(std::span<const std::size_t> order) const;

  /// The sequence in ascending id order.
  JobSequence base() const;

  friend bool operator==(const JobSequence&, const JobSequence&) = default;

 private:
  JobSequence() = default;
  std::vector<Job> jobs_;
  int machines_ = 1;
};

/// Throws InvalidInput unless p is finite and non-negative.
void validate_processing_time(double p);

/// Whole-sequence statistics. The total is accumulated in ascending id order
/// so the result does not depend on the arrival order.
struct SequenceStats {
  int m = 1;
  std::size_t n = 0;
  double total = 0.0;
  double average_load = 0.0;  // L
  double p_max = 0.0;
  std::vector<double> descending;  // P_1 >= P_2 >= ... >= P_n

  static SequenceStats of(const JobSequence& seq);

  /// P_j (1-based); 0 when j > n.
  double P(std::size_t j) const;

  /// R(J) = min{L/p_max, p_max/L}; empty for all-zero sequences.
  std::optional<double> R() const;
};

/// R(J); throws DegenerateSequence when every processing time is zero.
double ratio_R(const JobSequence& seq);

enum class SequenceClass { plain, proper };

/// Plain iff n <= m or R(J) <= c - 1. All-zero sequences count as plain.
SequenceClass classify_plain(const JobSequence& seq, double c);

/// Machine loads with a maintained non-increasing order.
///
/// Ranks are 1-based: rank 1 is the most loaded machine, rank m the least
/// loaded one. Equal loads are ordered by ascending machine id, so among
/// equally loaded machines the one with the highest id has the largest rank.
class ScheduleState {
 public:
  explicit ScheduleState(int machines);

  int machines() const noexcept { return static_cast<int>(loads_.size()); }
  std::size_t placed() const noexcept { return placed_; }

  /// l_rank^t.
  double load_at_rank(int rank) const;
  /// Physical machine id currently at the given rank.
  int machine_at_rank(int rank) const;
  double makespan() const { return load_at_rank(1); }
  double least_load() const { return load_at_rank(machines()); }

  std::vector<double> sorted_loads() const;
  std::span<const double> loads_by_machine() const noexcept { return loads_; }

  /// L_j^t: average load of the machines at ranks j..m.
  double suffix_average(int rank) const;

  /// Adds job to the machine currently at `rank`; returns that machine id.
  int assign(int rank, const Job& job);

  /// Machine the job was assigned to, if any.
  std::optional<int> machine_of(std::size_t job_id) const;

  /// Sum of all loads taken in machine-id order.
  double total_load() const;

 private:
  bool precedes(int a, int b) const;
  void check_rank(int rank) const;

  std::vector<double> loads_;
  std::vector<int> order_;     // rank-1 -> machine id
  std::vector<int> position_;  // machine id -> rank-1
  std::vector<int> machine_for_job_;
  std::size_t placed_ = 0;
};

/// Running statistics of the prefix seen so far: L^t, p_max^t, the m+1
/// largest processing times and O^t.
class PrefixStats {
 public:
  explicit PrefixStats(int machines);

  /// Folds in the next arriving job. Must run before that job is placed.
  void observe(const Job& job);

  std::size_t t() const noexcept { return t_; }
  double total() const noexcept { return total_; }
  double average_load() const noexcept { return total_ / machines_; }
  double p_max() const noexcept { return p_max_; }
  /// P_{m+1}^t; 0 while t <= m.
  double p_m_plus_1() const;
  /// O^t = max{L^t, p_max^t, 2 P_{m+1}^t}.
  double lower_bound() const;
  /// The min(t, m+1) largest processing times seen, descending.
  std::vector<double> top_jobs() const;

 private:
  int machines_;
  std::size_t t_ = 0;
  double total_ = 0.0;
  double p_max_ = 0.0;
  std::priority_queue<double, std::vector<double>, std::greater<>> top_;
};

}  // namespace romsched
