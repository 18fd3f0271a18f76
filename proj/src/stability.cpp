#include "romsched/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "romsched/error.hpp"
#include "romsched/rng.hpp"

namespace romsched {

void validate(const StabilityParams& params) {
  validate_config(params.cfg);
  const double c = params.cfg.c;
  if (!(params.epsilon > 0.0 && params.epsilon < 2.0 - c)) {
    throw InvalidInput("epsilon must lie in (0, 2 - c)");
  }
}

StabilityThresholds thresholds(const StabilityParams& params) {
  const auto& cfg = params.cfg;
  const double i_over_m = static_cast<double>(cfg.i) / cfg.m;
  return StabilityThresholds{
      .pmax_reveal = (cfg.c - 1.0) * i_over_m,
      .early = i_over_m * (cfg.c - 1.0) * params.epsilon,
      .m = cfg.m,
      .epsilon = params.epsilon,
  };
}

std::vector<std::size_t> ranked_job_ids(const JobSequence& seq) {
  const auto sizes = seq.sizes_by_id();
  std::vector<std::size_t> ids(sizes.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  return ids;
}

std::vector<std::size_t> largest_job_set(const JobSequence& seq, std::size_t j) {
  if (j < 1 || j > seq.size()) throw InvalidInput("largest_job_set: j out of range");
  auto ids = ranked_job_ids(seq);
  ids.resize(j);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<int> StabilityReport::violated() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < conditions.size(); ++k) {
    if (!conditions[k].holds) out.push_back(static_cast<int>(k) + 1);
  }
  return out;
}

namespace {

/// Per-arrival quantities shared by the stability tools.
struct ArrivalProfile {
  std::vector<double> load;       // L^t for t = 1..n at index t-1
  double full = 0.0;              // L = L^n
  std::vector<std::size_t> top;   // top[t] = members of the m+1 largest among the first t
  std::vector<bool> in_top;       // by job id
  std::vector<std::size_t> rank;  // by job id, 1-based
};

ArrivalProfile profile(const JobSequence& perm) {
  const std::size_t n = perm.size();
  const auto m = static_cast<std::size_t>(perm.machines());
  ArrivalProfile prof;
  const auto ranked = ranked_job_ids(perm);
  prof.in_top.assign(n, false);
  prof.rank.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    prof.rank[ranked[r]] = r + 1;
    if (r < m + 1) prof.in_top[ranked[r]] = true;
  }
  prof.load.resize(n);
  prof.top.assign(n + 1, 0);
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const Job& job = perm[t];
    sum += job.p;
    prof.load[t] = sum / perm.machines();
    prof.top[t + 1] = prof.top[t] + (prof.in_top[job.id] ? 1 : 0);
  }
  prof.full = prof.load.back();
  return prof;
}

/// First 1-based t with L^t >= fraction * L, or n+1 if never.
std::size_t first_crossing(const ArrivalProfile& prof, double fraction, std::size_t from = 1) {
  const double target = fraction * prof.full;
  for (std::size_t t = from; t <= prof.load.size(); ++t) {
    if (prof.load[t - 1] >= target) return t;
  }
  return prof.load.size() + 1;
}

}  // namespace

StabilityReport check_stable(const JobSequence& perm, const StabilityParams& params) {
  validate(params);
  const auto& cfg = params.cfg;
  if (perm.machines() != cfg.m) throw InvalidInput("sequence and config disagree on m");
  const std::size_t n = perm.size();
  const auto m = static_cast<std::size_t>(cfg.m);
  const auto h = static_cast<std::size_t>(cfg.h);
  const auto th = thresholds(params);
  const auto prof = profile(perm);
  const auto stats = SequenceStats::of(perm);

  StabilityReport report;

  // 1
  report.conditions[0] = {n > m, n, static_cast<double>(n), static_cast<double>(m + 1), std::nullopt};

  // 2: p_max^t only grows, so the first crossing decides
  {
    auto& v = report.conditions[1];
    v.required = stats.P(h);
    const std::size_t t = first_crossing(prof, th.pmax_reveal);
    if (t <= n) {
      double pmax = 0.0;
      for (std::size_t s = 0; s < t; ++s) pmax = std::max(pmax, perm[s].p);
      v.t = t;
      v.observed = pmax;
      v.holds = pmax >= v.required;
    }
  }

  // 3: thresholds grow with j, so the crossing search resumes where it left off
  {
    auto& v = report.conditions[2];
    std::size_t t = 1;
    for (int j = cfg.i; j <= cfg.m - cfg.h - 1; ++j) {
      t = first_crossing(prof, th.counting(j), t);
      const std::size_t end = std::min(t, n);
      const std::size_t have = prof.top[end];
      const std::size_t need = static_cast<std::size_t>(j) + h + 2;
      if (have < need) {
        v = {false, end, static_cast<double>(have), static_cast<double>(need), j};
        break;
      }
    }
  }

  // 4
  {
    auto& v = report.conditions[3];
    const std::size_t crossing = first_crossing(prof, th.early);
    std::size_t arrival = n + 1;
    for (std::size_t t = 0; t < n; ++t) {
      if (prof.rank[perm[t].id] == h) {
        arrival = t + 1;
        break;
      }
    }
    const std::size_t stop = std::min(crossing, arrival);
    const std::size_t have = prof.top[stop - 1];
    v = {have >= h + 1, stop - 1, static_cast<double>(have), static_cast<double>(h + 1), std::nullopt};
  }

  report.stable = std::all_of(report.conditions.begin(), report.conditions.end(),
                              [](const ConditionVerdict& v) { return v.holds; });
  return report;
}

std::size_t count_N(const JobSequence& perm, double phi) {
  if (!(phi > 0.0)) throw InvalidInput("count_N: phi must be positive");
  const auto prof = profile(perm);
  const double limit = phi * prof.full;
  std::size_t count = 0;
  for (std::size_t t = 0; t < perm.size(); ++t) {
    if (prof.load[t] <= limit && prof.in_top[perm[t].id]) ++count;
  }
  return count;
}

double load_lemma_deviation(const JobSequence& perm, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) throw InvalidInput("load_lemma_deviation: phi must lie in (0, 1]");
  const auto t = static_cast<std::size_t>(std::floor(phi * static_cast<double>(perm.size())));
  if (t < 1) throw InvalidInput("load_lemma_deviation: floor(phi n) is zero");
  double prefix = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    total += perm[s].p;
    if (s + 1 == t) prefix = total;
  }
  if (total <= 0.0) throw DegenerateSequence("load_lemma_deviation: all processing times are zero");
  const double m = perm.machines();
  return std::abs((prefix / m) / (phi * (total / m)) - 1.0);
}

StabilityEstimate estimate_stability_probability(const JobSequence& seq, const StabilityParams& params,
                                                 const EstimateOptions& options) {
  validate(params);
  if (options.trials == 0) throw InvalidInput("estimate_stability_probability: trials must be >= 1");
  if (classify_plain(seq, params.cfg.c) != SequenceClass::proper) {
    throw NotProper("stability probability is only defined for proper sequences");
  }
  StabilityEstimate out;
  const std::size_t n = seq.size();
  if (n <= options.exact_cap) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
      ++out.samples;
      if (check_stable(seq.reordered(order), params).stable) ++out.stable;
    } while (std::next_permutation(order.begin(), order.end()));
    out.exact = true;
    out.estimate = static_cast<double>(out.stable) / static_cast<double>(out.samples);
    out.ci = {out.estimate, out.estimate};
    return out;
  }

  std::vector<char> stable(options.trials, 0);
  parallel_for(options.trials, options.threads, [&](std::size_t trial) {
    Rng rng(derive_seed(options.seed, "stability", trial));
    const auto order = random_order(n, rng);
    stable[trial] = check_stable(seq.reordered(order), params).stable ? 1 : 0;
  });
  out.samples = options.trials;
  out.stable = static_cast<std::size_t>(std::count(stable.begin(), stable.end(), 1));
  out.estimate = static_cast<double>(out.stable) / static_cast<double>(out.samples);
  out.ci = wilson_interval(out.stable, out.samples);
  return out;
}

std::vector<double> half_open_grid(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(count);
  }
  return grid;
}

ConstantsReport verify_analysis_constants(const AlgConfig& cfg, const std::vector<double>& epsilon_grid,
                                          const std::vector<double>& lambda_grid) {
  const AnalysisConstants k{cfg.c};
  ConstantsReport r;
  r.c = cfg.c;
  r.Q_residual = cubic_Q(cfg.c);
  r.alpha = cfg.alpha;
  r.alpha_identity_error = std::abs(1.0 / cfg.alpha - (1.0 - 1.0 / (2.0 * (cfg.c - 1.0))));
  r.i_over_m = static_cast<double>(cfg.i) / cfg.m;
  r.k_over_m = static_cast<double>(cfg.k) / cfg.m;
  r.lambda_start = k.lambda_start();
  r.lambda_end_limit = k.lambda_end(0.0);
  r.F_at_start = k.F(r.lambda_start);
  r.F_slope = k.F_slope();
  r.F_intercept = k.F_intercept();
  r.g_slope = k.g_slope();
  r.g_intercept = k.g_intercept();

  for (double lambda : lambda_grid) {
    ++r.gf_points;
    if (!(k.g(k.f(lambda)) > lambda)) ++r.gf_failures;
    r.F_linear_max_error = std::max(r.F_linear_max_error, std::abs(k.F(lambda) - (r.F_slope * lambda + r.F_intercept)));
  }
  r.order_crossover = 1.0 / (2.0 * r.lambda_start) - (k.c - 1.0);
  for (double eps : epsilon_grid) {
    ++r.geps_points;
    if (!(k.g(1.0 - eps) > k.lambda_end(eps))) ++r.geps_failures;
    if (!(r.lambda_start < k.lambda_end(eps))) ++r.order_failures;
  }
  return r;
}

std::string to_json(const StabilityReport& report) {
  nlohmann::json conditions = nlohmann::json::array();
  for (std::size_t k = 0; k < report.conditions.size(); ++k) {
    const auto& v = report.conditions[k];
    nlohmann::json entry = {{"condition", k + 1}, {"holds", v.holds},       {"t", v.t},
                            {"observed", v.observed}, {"required", v.required}};
    if (v.j) entry["j"] = *v.j;
    conditions.push_back(entry);
  }
  return nlohmann::json{{"stable", report.stable}, {"conditions", conditions}}.dump();
}

}  // namespace romsched
