#include "romsched/algorithms.hpp"

#include <cmath>
#include <string>

#include "json.hpp"
#include "romsched/error.hpp"

namespace romsched {

double cubic_Q(double x) { return ((4.0 * x - 14.0) * x + 16.0) * x - 7.0; }

double competitive_constant() {
  static const double c = [] {
    const double root87 = std::sqrt(87.0);
    double x = (7.0 + std::cbrt(28.0 - 3.0 * root87) + std::cbrt(28.0 + 3.0 * root87)) / 6.0;
    for (int iter = 0; iter < 8; ++iter) {
      const double slope = (12.0 * x - 28.0) * x + 16.0;
      const double step = cubic_Q(x) / slope;
      x -= step;
      if (std::abs(step) < 1e-17) break;
    }
    return x;
  }();
  return c;
}

int reluctance_for(int m, HChoice choice) {
  int h = 1;
  switch (choice.rule) {
    case HRule::cbrt:
      h = static_cast<int>(std::floor(std::cbrt(static_cast<double>(m))));
      // cbrt of a perfect cube may land one ulp low
      while (static_cast<long long>(h + 1) * (h + 1) * (h + 1) <= m) ++h;
      break;
    case HRule::log:
      h = static_cast<int>(std::floor(std::log(static_cast<double>(m))));
      break;
    case HRule::explicit_h:
      if (choice.h < 1) throw InvalidInput("explicit h must be >= 1");
      h = choice.h;
      break;
  }
  return std::max(h, 1);
}

namespace {

bool structurally_valid(const AlgConfig& cfg) {
  return cfg.h >= 1 && cfg.k >= 1 && cfg.k <= cfg.i && cfg.i <= cfg.m && cfg.i < cfg.m - cfg.h;
}

AlgConfig compute(int m, HChoice choice) {
  AlgConfig cfg;
  cfg.m = m;
  cfg.c = competitive_constant();
  cfg.h = reluctance_for(m, choice);
  cfg.i = static_cast<int>(std::ceil((2.0 * cfg.c - 3.0) * m)) + cfg.h;
  cfg.k = 2 * cfg.i - m;
  cfg.alpha = 2.0 * (cfg.c - 1.0) / (2.0 * cfg.c - 3.0);
  return cfg;
}

std::string describe(HChoice choice) {
  switch (choice.rule) {
    case HRule::cbrt: return "h = floor(cbrt(m))";
    case HRule::log: return "h = floor(ln m)";
    case HRule::explicit_h: return "h = " + std::to_string(choice.h);
  }
  return "?";
}

}  // namespace

int minimal_valid_m(HChoice choice, int search_limit) {
  for (int m = 1; m <= search_limit; ++m) {
    if (structurally_valid(compute(m, choice))) return m;
  }
  return 0;
}

void validate_config(const AlgConfig& cfg) {
  if (!structurally_valid(cfg)) {
    throw ConfigInvalid("invalid ALG configuration for m=" + std::to_string(cfg.m) + " (h=" + std::to_string(cfg.h) +
                            ", i=" + std::to_string(cfg.i) + ", k=" + std::to_string(cfg.k) +
                            "): need 1 <= k <= i and i < m - h",
                        0);
  }
  if (std::abs(cubic_Q(cfg.c)) > 1e-12) throw InvariantViolation("c is not a root of Q");
  if (std::abs(1.0 / cfg.alpha - (1.0 - 1.0 / (2.0 * (cfg.c - 1.0)))) > 1e-12) {
    throw InvariantViolation("alpha violates 1/alpha = 1 - 1/(2(c-1))");
  }
}

AlgConfig derive_constants(int m, HChoice choice) {
  if (m < 1) throw InvalidInput("machine count must be >= 1");
  AlgConfig cfg = compute(m, choice);
  if (!structurally_valid(cfg)) {
    const int minimal = minimal_valid_m(choice);
    throw ConfigInvalid("no valid ALG configuration for m=" + std::to_string(m) + " with " + describe(choice) +
                            " (i=" + std::to_string(cfg.i) + ", m-h=" + std::to_string(m - cfg.h) +
                            "); minimal valid m for this rule is " + std::to_string(minimal),
                        minimal);
  }
  validate_config(cfg);
  return cfg;
}

Placement GreedyScheduler::place(const ScheduleState& state, const PrefixStats& stats, const Job& job) const {
  Placement out;
  out.rank = greedy_place(state, job);
  out.trace.lower_bound = stats.lower_bound();
  return out;
}

int greedy_place(const ScheduleState& state, const Job& /*job*/) { return state.machines(); }

bool is_steep(const ScheduleState& state, const AlgConfig& cfg) {
  return !(state.load_at_rank(cfg.k) < cfg.alpha * state.suffix_average(cfg.i + 1));
}

Placement alg_place(const ScheduleState& state, const PrefixStats& stats, const Job& job, const AlgConfig& cfg) {
  if (state.machines() != cfg.m) throw InvalidInput("schedule and config disagree on m");
  Placement out;
  StepTrace& tr = out.trace;
  tr.lower_bound = stats.lower_bound();
  const double budget = cfg.c * tr.lower_bound;

  tr.steep = is_steep(state, cfg);
  if (*tr.steep) {
    out.rank = cfg.m;
    return out;
  }
  const double load_i = state.load_at_rank(cfg.i);
  tr.rank_i = CandidateCheck{load_i, load_i + job.p <= budget};
  if (tr.rank_i->fits) {
    out.rank = cfg.i;
    return out;
  }
  const double load_mh = state.load_at_rank(cfg.m - cfg.h);
  tr.rank_m_minus_h = CandidateCheck{load_mh, load_mh + job.p <= budget};
  out.rank = tr.rank_m_minus_h->fits ? cfg.m - cfg.h : cfg.m;
  return out;
}

AlgScheduler::AlgScheduler(AlgConfig cfg) : cfg_(cfg) { validate_config(cfg_); }

Placement AlgScheduler::place(const ScheduleState& state, const PrefixStats& stats, const Job& job) const {
  return alg_place(state, stats, job, cfg_);
}

RunResult run_online(const Scheduler& scheduler, const JobSequence& seq, bool keep_traces) {
  const int m = seq.machines();
  ScheduleState state(m);
  PrefixStats stats(m);
  RunResult result;
  if (keep_traces) result.traces.reserve(seq.size());
  for (const Job& job : seq.jobs()) {
    stats.observe(job);
    Placement placement = scheduler.place(state, stats, job);
    if (placement.rank < 1 || placement.rank > m) {
      throw InvariantViolation(scheduler.name() + " chose rank " + std::to_string(placement.rank));
    }
    const int machine = state.assign(placement.rank, job);
    if (keep_traces) {
      StepTrace& tr = placement.trace;
      tr.t = stats.t();
      tr.job_id = job.id;
      tr.p = job.p;
      tr.chosen_rank = placement.rank;
      tr.resulting_load = state.loads_by_machine()[machine];
      tr.makespan = state.makespan();
      result.traces.push_back(std::move(tr));
    }
  }
  result.makespan = state.makespan();
  result.final_loads = state.sorted_loads();
  result.machine_of_job.resize(seq.size());
  for (const Job& job : seq.jobs()) result.machine_of_job[job.id] = *state.machine_of(job.id);
  return result;
}

double online_makespan(const Scheduler& scheduler, const JobSequence& seq) {
  const int m = seq.machines();
  ScheduleState state(m);
  PrefixStats stats(m);
  for (const Job& job : seq.jobs()) {
    stats.observe(job);
    state.assign(scheduler.place(state, stats, job).rank, job);
  }
  return state.makespan();
}

SchedulerRegistry::SchedulerRegistry() {
  factories_["greedy"] = [](int, const SchedulerOptions&) { return std::make_unique<GreedyScheduler>(); };
  factories_["alg"] = [](int m, const SchedulerOptions& options) {
    return std::make_unique<AlgScheduler>(derive_constants(m, options.h_choice));
  };
}

void SchedulerRegistry::add(const std::string& name, SchedulerFactory factory) {
  std::lock_guard lock(mutex_);
  factories_[name] = std::move(factory);
}

bool SchedulerRegistry::contains(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return factories_.count(name) > 0;
}

std::vector<std::string> SchedulerRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, factory] : factories_) out.push_back(name);
  return out;
}

std::unique_ptr<Scheduler> SchedulerRegistry::make(const std::string& name, int m,
                                                   const SchedulerOptions& options) const {
  SchedulerFactory factory;
  {
    std::lock_guard lock(mutex_);
    auto it = factories_.find(name);
    if (it == factories_.end()) throw InvalidInput("unknown scheduler '" + name + "'");
    factory = it->second;
  }
  return factory(m, options);
}

SchedulerRegistry& SchedulerRegistry::global() {
  static SchedulerRegistry registry;
  return registry;
}

std::string trace_to_json_line(const StepTrace& tr) {
  nlohmann::json j = {
      {"t", tr.t},
      {"job", tr.job_id},
      {"p", tr.p},
      {"O_t", tr.lower_bound},
      {"chosen_rank", tr.chosen_rank},
      {"resulting_load", tr.resulting_load},
      {"makespan", tr.makespan},
  };
  if (tr.steep) j["schedule"] = *tr.steep ? "steep" : "flat";
  auto candidate = [](const CandidateCheck& cc) { return nlohmann::json{{"load", cc.load}, {"fits", cc.fits}}; };
  if (tr.rank_i) j["rank_i"] = candidate(*tr.rank_i);
  if (tr.rank_m_minus_h) j["rank_m_minus_h"] = candidate(*tr.rank_m_minus_h);
  return j.dump();
}

}  // namespace romsched
