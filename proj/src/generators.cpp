#include "romsched/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "romsched/error.hpp"
#include "romsched/format.hpp"
#include "romsched/rng.hpp"

namespace romsched {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

JobSequence units_then_big(std::size_t units, double big, int m) {
  std::vector<double> sizes(units, 1.0);
  sizes.push_back(big);
  return JobSequence(std::move(sizes), m);
}

}  // namespace

JobSequence uniform_jobs(int r, int m) {
  require(r >= 1, "uniform_jobs: r must be >= 1");
  require(m >= 2, "uniform_jobs: m must be >= 2");
  return JobSequence(std::vector<double>(static_cast<std::size_t>(r) * m, 1.0), m);
}

JobSequence lb_four_thirds(int m) {
  require(m >= 2, "lb_four_thirds: m must be >= 2");
  return units_then_big(4 * static_cast<std::size_t>(m) - 4, 4.0, m);
}

JobSequence lb_three_halves(int m) {
  require(m >= 2, "lb_three_halves: m must be >= 2");
  return units_then_big(2 * static_cast<std::size_t>(m) - 2, 2.0, m);
}

JobSequence greedy_adversarial(int m) {
  require(m >= 2, "greedy_adversarial: m must be >= 2");
  return units_then_big(static_cast<std::size_t>(m) * (m - 1), static_cast<double>(m), m);
}

double Distribution::sample(Rng& rng) const {
  switch (kind) {
    case DistKind::uniform:
      return rng.uniform(a, b);
    case DistKind::two_point:
      return rng.unit() < q ? b : a;
    case DistKind::pareto: {
      // inverse CDF of the Pareto law conditioned on [a, b]
      const double tail = 1.0 - std::pow(a / b, q);
      return a / std::pow(1.0 - rng.unit() * tail, 1.0 / q);
    }
  }
  return a;
}

std::string to_string(const Distribution& dist) {
  switch (dist.kind) {
    case DistKind::uniform:
      return "uniform(" + format_double(dist.a) + "," + format_double(dist.b) + ")";
    case DistKind::two_point:
      return "two-point(" + format_double(dist.a) + "," + format_double(dist.b) + "," + format_double(dist.q) + ")";
    case DistKind::pareto:
      return "pareto(" + format_double(dist.a) + "," + format_double(dist.b) + "," + format_double(dist.q) + ")";
  }
  return "?";
}

Distribution parse_distribution(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw InvalidInput("distribution must look like name(args): '" + std::string(text) + "'");
  }
  const auto name = text.substr(0, open);
  auto args_text = text.substr(open + 1, text.size() - open - 2);
  std::vector<double> args;
  while (!args_text.empty()) {
    const auto comma = args_text.find(',');
    auto field = args_text.substr(0, comma);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw InvalidInput("bad distribution argument '" + std::string(field) + "'");
    }
    args.push_back(v);
    args_text = comma == std::string_view::npos ? std::string_view{} : args_text.substr(comma + 1);
  }

  Distribution dist;
  if (name == "uniform") {
    require(args.size() == 2, "uniform(a,b) takes two arguments");
    dist = {DistKind::uniform, args[0], args[1]};
    require(0.0 <= dist.a && dist.a <= dist.b, "uniform(a,b) needs 0 <= a <= b");
  } else if (name == "two-point") {
    require(args.size() == 3, "two-point(a,b,q) takes three arguments");
    dist = {DistKind::two_point, args[0], args[1], args[2]};
    require(0.0 <= dist.a && 0.0 <= dist.b && 0.0 <= dist.q && dist.q <= 1.0, "two-point(a,b,q) out of range");
  } else if (name == "pareto") {
    require(args.size() == 3, "pareto(scale,cap,shape) takes three arguments");
    dist = {DistKind::pareto, args[0], args[1], args[2]};
    require(0.0 < dist.a && dist.a < dist.b && dist.q > 0.0, "pareto(scale,cap,shape) out of range");
  } else {
    throw InvalidInput("unknown distribution '" + std::string(name) + "'");
  }
  return dist;
}

JobSequence random_proper(int m, std::size_t n, const Distribution& dist, std::uint64_t seed, int max_retries) {
  require(m >= 1, "random_proper: m must be >= 1");
  require(n > static_cast<std::size_t>(m), "random_proper: a proper sequence needs n > m");
  const double c = competitive_constant();
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(derive_seed(seed, "random_proper", attempt));
    std::vector<double> sizes(n);
    for (double& p : sizes) p = dist.sample(rng);
    JobSequence seq(std::move(sizes), m);
    if (classify_plain(seq, c) == SequenceClass::proper) return seq;
  }
  throw NotProperAfterRetries("random_proper: no proper sequence for m=" + std::to_string(m) + ", n=" +
                              std::to_string(n) + ", " + to_string(dist) + " after " + std::to_string(max_retries) +
                              " attempts");
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::uniform_r: return "uniform";
    case Family::lb_four_thirds: return "lb43";
    case Family::lb_three_halves: return "lb32";
    case Family::greedy_adversarial: return "greedy-adv";
    case Family::random_proper: return "random-proper";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::uniform_r, Family::lb_four_thirds, Family::lb_three_halves, Family::greedy_adversarial,
                   Family::random_proper}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidInput("unknown family '" + std::string(name) + "'");
}

namespace {

void check_units_then_big(const JobSequence& seq, std::size_t units, double big) {
  const auto sizes = seq.sizes_by_id();
  const bool ok = sizes.size() == units + 1 && sizes.back() == big &&
                  std::all_of(sizes.begin(), sizes.end() - 1, [](double p) { return p == 1.0; });
  if (!ok) throw InvariantViolation("generated sequence does not have the family's shape");
}

}  // namespace

Generated generate(const GenSpec& spec) {
  std::vector<std::string> warnings;
  const auto m = static_cast<std::size_t>(spec.m);
  switch (spec.family) {
    case Family::uniform_r: {
      auto seq = uniform_jobs(spec.r, spec.m);
      if (seq.size() != static_cast<std::size_t>(spec.r) * m) throw InvariantViolation("uniform_jobs size");
      return {std::move(seq), {}};
    }
    case Family::lb_four_thirds: {
      if (spec.m < 8) warnings.push_back("lb43 with m < 8: the 4/3 lower-bound argument needs m >= 8");
      auto seq = lb_four_thirds(spec.m);
      check_units_then_big(seq, 4 * m - 4, 4.0);
      return {std::move(seq), std::move(warnings)};
    }
    case Family::lb_three_halves: {
      auto seq = lb_three_halves(spec.m);
      check_units_then_big(seq, 2 * m - 2, 2.0);
      return {std::move(seq), {}};
    }
    case Family::greedy_adversarial: {
      auto seq = greedy_adversarial(spec.m);
      check_units_then_big(seq, m * (m - 1), static_cast<double>(m));
      return {std::move(seq), {}};
    }
    case Family::random_proper: {
      auto seq = random_proper(spec.m, spec.n, spec.dist, spec.seed);
      if (classify_plain(seq, competitive_constant()) != SequenceClass::proper) {
        throw InvariantViolation("random_proper returned a plain sequence");
      }
      return {std::move(seq), {}};
    }
  }
  throw InvalidInput("unknown family");
}

ProbeResult probe_r(const Scheduler& scheduler, int m, int r_max) {
  require(r_max >= 1, "probe_r: r_max must be >= 1");
  require(m >= 1, "probe_r: m must be >= 1");
  ScheduleState state(m);
  PrefixStats stats(m);
  const std::size_t total = static_cast<std::size_t>(r_max) * m;
  for (std::size_t t = 0; t < total; ++t) {
    const Job job{t, 1.0};
    stats.observe(job);
    const int rank = scheduler.place(state, stats, job).rank;
    // least-loaded is judged by load equality, not machine identity
    if (state.load_at_rank(rank) != state.least_load()) {
      return {static_cast<int>(t / m), false};
    }
    state.assign(rank, job);
  }
  return {r_max, true};
}

}  // namespace romsched
