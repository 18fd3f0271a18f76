#include "romsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "romsched/error.hpp"

namespace romsched {

void validate_processing_time(double p) {
  if (!std::isfinite(p) || p < 0.0) {
    throw InvalidInput("processing time must be finite and non-negative, got " + std::to_string(p));
  }
}

namespace {

void validate_machines(int machines) {
  if (machines < 1) throw InvalidInput("machine count must be >= 1");
}

}  // namespace

JobSequence::JobSequence(std::vector<double> sizes, int machines) : machines_(machines) {
  validate_machines(machines);
  if (sizes.empty()) throw InvalidInput("job sequence must contain at least one job");
  jobs_.reserve(sizes.size());
  for (std::size_t id = 0; id < sizes.size(); ++id) {
    validate_processing_time(sizes[id]);
    jobs_.push_back({id, sizes[id]});
  }
}

JobSequence JobSequence::from_jobs(std::vector<Job> jobs, int machines) {
  validate_machines(machines);
  if (jobs.empty()) throw InvalidInput("job sequence must contain at least one job");
  std::vector<bool> seen(jobs.size(), false);
  for (const Job& job : jobs) {
    validate_processing_time(job.p);
    if (job.id >= jobs.size() || seen[job.id]) {
      throw InvalidInput("job ids must be exactly 0..n-1, offending id " + std::to_string(job.id));
    }
    seen[job.id] = true;
  }
  JobSequence seq;
  seq.jobs_ = std::move(jobs);
  seq.machines_ = machines;
  return seq;
}

std::vector<double> JobSequence::sizes_by_id() const {
  std::vector<double> sizes(jobs_.size());
  for (const Job& job : jobs_) sizes[job.id] = job.p;
  return sizes;
}

JobSequence JobSequence::reordered(std::span<const std::size_t> order) const {
  if (order.size() != jobs_.size()) throw InvalidInput("order length does not match sequence length");
  std::vector<Job> jobs;
  jobs.reserve(order.size());
  for (std::size_t idx : order) {
    if (idx >= jobs_.size()) throw InvalidInput("order index out of range");
    jobs.push_back(jobs_[idx]);
  }
  return from_jobs(std::move(jobs), machines_);
}

JobSequence JobSequence::base() const { return JobSequence(sizes_by_id(), machines_); }

SequenceStats SequenceStats::of(const JobSequence& seq) {
  SequenceStats s;
  s.m = seq.machines();
  s.n = seq.size();
  s.descending = seq.sizes_by_id();
  for (double p : s.descending) s.total += p;
  s.average_load = s.total / s.m;
  std::sort(s.descending.begin(), s.descending.end(), std::greater<>());
  s.p_max = s.descending.front();
  return s;
}

double SequenceStats::P(std::size_t j) const {
  if (j == 0) throw InvalidInput("P_j is 1-based");
  return j <= n ? descending[j - 1] : 0.0;
}

std::optional<double> SequenceStats::R() const {
  if (p_max <= 0.0) return std::nullopt;
  return std::min(average_load / p_max, p_max / average_load);
}

double ratio_R(const JobSequence& seq) {
  auto r = SequenceStats::of(seq).R();
  if (!r) throw DegenerateSequence("R(J) is undefined for an all-zero sequence");
  return *r;
}

SequenceClass classify_plain(const JobSequence& seq, double c) {
  if (seq.size() <= static_cast<std::size_t>(seq.machines())) return SequenceClass::plain;
  auto r = SequenceStats::of(seq).R();
  if (!r || *r <= c - 1.0) return SequenceClass::plain;
  return SequenceClass::proper;
}

ScheduleState::ScheduleState(int machines) {
  validate_machines(machines);
  loads_.assign(machines, 0.0);
  order_.resize(machines);
  position_.resize(machines);
  std::iota(order_.begin(), order_.end(), 0);
  std::iota(position_.begin(), position_.end(), 0);
}

bool ScheduleState::precedes(int a, int b) const {
  return loads_[a] > loads_[b] || (loads_[a] == loads_[b] && a < b);
}

void ScheduleState::check_rank(int rank) const {
  if (rank < 1 || rank > machines()) {
    throw InvalidInput("rank " + std::to_string(rank) + " outside [1, " + std::to_string(machines()) + "]");
  }
}

double ScheduleState::load_at_rank(int rank) const {
  check_rank(rank);
  return loads_[order_[rank - 1]];
}

int ScheduleState::machine_at_rank(int rank) const {
  check_rank(rank);
  return order_[rank - 1];
}

std::vector<double> ScheduleState::sorted_loads() const {
  std::vector<double> out;
  out.reserve(order_.size());
  for (int machine : order_) out.push_back(loads_[machine]);
  return out;
}

double ScheduleState::suffix_average(int rank) const {
  check_rank(rank);
  double sum = 0.0;
  for (int r = rank; r <= machines(); ++r) sum += loads_[order_[r - 1]];
  return sum / (machines() - rank + 1);
}

int ScheduleState::assign(int rank, const Job& job) {
  check_rank(rank);
  validate_processing_time(job.p);
  const int machine = order_[rank - 1];
  loads_[machine] += job.p;
  // Loads only grow, so the machine can only move towards rank 1.
  int pos = position_[machine];
  while (pos > 0 && precedes(machine, order_[pos - 1])) {
    order_[pos] = order_[pos - 1];
    position_[order_[pos]] = pos;
    --pos;
  }
  order_[pos] = machine;
  position_[machine] = pos;

  if (job.id >= machine_for_job_.size()) machine_for_job_.resize(job.id + 1, -1);
  machine_for_job_[job.id] = machine;
  ++placed_;
  return machine;
}

std::optional<int> ScheduleState::machine_of(std::size_t job_id) const {
  if (job_id >= machine_for_job_.size() || machine_for_job_[job_id] < 0) return std::nullopt;
  return machine_for_job_[job_id];
}

double ScheduleState::total_load() const {
  double sum = 0.0;
  for (double l : loads_) sum += l;
  return sum;
}

PrefixStats::PrefixStats(int machines) : machines_(machines) { validate_machines(machines); }

void PrefixStats::observe(const Job& job) {
  validate_processing_time(job.p);
  ++t_;
  total_ += job.p;
  p_max_ = std::max(p_max_, job.p);
  const auto capacity = static_cast<std::size_t>(machines_) + 1;
  if (top_.size() < capacity) {
    top_.push(job.p);
  } else if (job.p > top_.top()) {
    top_.pop();
    top_.push(job.p);
  }
}

double PrefixStats::p_m_plus_1() const {
  return top_.size() == static_cast<std::size_t>(machines_) + 1 ? top_.top() : 0.0;
}

double PrefixStats::lower_bound() const {
  return std::max({average_load(), p_max_, 2.0 * p_m_plus_1()});
}

std::vector<double> PrefixStats::top_jobs() const {
  auto copy = top_;
  std::vector<double> out;
  out.reserve(copy.size());
  while (!copy.empty()) {
    out.push_back(copy.top());
    copy.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace romsched
