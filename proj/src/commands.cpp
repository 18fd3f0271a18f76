#include "romsched/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "romsched/error.hpp"
#include "romsched/format.hpp"
#include "romsched/rng.hpp"
#include "romsched/sequence_io.hpp"

namespace romsched {

using nlohmann::json;

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const BudgetExceeded*>(&error)) return kExitBudgetExceeded;
  if (dynamic_cast<const InvariantViolation*>(&error)) return kExitInternal;
  if (dynamic_cast<const Error*>(&error)) return kExitInvalidManifest;
  return kExitInternal;
}

Generated load_input(const ExperimentManifest& mf) {
  if (mf.input) return {load_sequence(*mf.input, mf.input_m), {}};
  if (mf.gen) return generate(*mf.gen);
  throw InvalidInput("no input: give a family (--family) or a sequence file (--input)");
}

std::vector<ExperimentRow> run_experiment(const ExperimentManifest& mf, const JobSequence& seq) {
  const EvalMode mode = eval_mode(mf);
  ReportOptions options;
  options.limits = mf.limits;
  options.tail_threshold = mf.tail_threshold;
  SchedulerOptions sched_options{mf.h_choice};

  std::vector<ExperimentRow> rows;
  for (const auto& name : mf.schedulers) {
    const auto scheduler = SchedulerRegistry::global().make(name, seq.machines(), sched_options);
    ExperimentRow row;
    row.experiment = mf.experiment;
    row.scheduler = name;
    row.m = seq.machines();
    row.n = seq.size();
    row.seed = mf.seed;
    row.stats = ratio_report(*scheduler, seq, mode, options);
    if (mf.traces) row.traces = run_online(*scheduler, seq, true).traces;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_row(const ExperimentRow& row) {
  const auto& s = row.stats;
  std::ostringstream os;
  os << row.experiment << ',' << row.scheduler << ',' << row.m << ',' << row.n << ',' << row.seed << ',' << s.mode
     << ',' << format_double(s.mean) << ',' << format_double(s.std_error) << ',' << format_double(s.opt->best.value)
     << ',' << to_string(s.opt->best.kind) << ',' << format_double(s.ratio_lo) << ',' << format_double(s.ratio_hi)
     << ',' << format_double(s.tail.hi);
  return os.str();
}

namespace {

json trace_json(const StepTrace& tr) { return json::parse(trace_to_json_line(tr)); }

json row_json(const ExperimentRow& row) {
  const auto& s = row.stats;
  json j = {
      {"experiment", row.experiment},
      {"scheduler", row.scheduler},
      {"m", row.m},
      {"n", row.n},
      {"seed", row.seed},
      {"mode", s.mode},
      {"runs", s.runs},
      {"exact", s.exact},
      {"rom_mean", s.mean},
      {"rom_stderr", s.std_error},
      {"rom_min", s.min},
      {"rom_max", s.max},
      {"opt",
       {{"value", s.opt->best.value},
        {"kind", std::string(to_string(s.opt->best.kind))},
        {"lower", s.opt->lower},
        {"upper", s.opt->upper},
        {"nodes", s.opt->best.node_count}}},
      {"ratio_lo", s.ratio_lo},
      {"ratio_hi", s.ratio_hi},
      {"tail",
       {{"threshold", s.tail_threshold},
        {"lo", s.tail.lo},
        {"hi", s.tail.hi},
        {"ci_lo", s.tail.ci.lo},
        {"ci_hi", s.tail.ci.hi}}},
  };
  if (!row.traces.empty()) {
    json traces = json::array();
    for (const auto& tr : row.traces) traces.push_back(trace_json(tr));
    j["traces"] = std::move(traces);
  }
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << content;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string results_json(const ExperimentManifest& mf, const std::vector<ExperimentRow>& rows) {
  json results = json::array();
  for (const auto& row : rows) results.push_back(row_json(row));
  json doc = {
      {"schema_version", kResultsSchemaVersion},
      {"experiment", mf.experiment},
      {"manifest", json::parse(manifest_to_json(mf))},
      {"confidence_intervals", "tail: Wilson 95%; mean: normal approximation (rom_stderr)"},
      {"results", results},
  };
  return doc.dump(2) + "\n";
}

std::filesystem::path output_dir(const ExperimentManifest& mf) {
  if (!mf.out_dir.empty()) return mf.out_dir;
  if (const char* env = std::getenv("ROMSCHED_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

std::string constants_summary(const ConstantsReport& r, const AlgConfig& cfg) {
  auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  std::ostringstream os;
  os << std::setprecision(12);
  os << "c                  = " << r.c << "   (Q(c) = " << r.Q_residual << ")\n";
  os << "alpha              = " << r.alpha << "   (|1/alpha - (1 - 1/(2(c-1)))| = " << r.alpha_identity_error
     << ")\n";
  os << "m, h               = " << cfg.m << ", " << cfg.h << "\n";
  os << "i/m                = " << r.i_over_m << "   (i = " << cfg.i << ")\n";
  os << "k/m                = " << r.k_over_m << "   (k = " << cfg.k << ")\n";
  os << "lambda_start       = " << r.lambda_start << "\n";
  os << "lambda_end(0+)     = " << r.lambda_end_limit << "\n";
  os << "F(lambda)          = " << r.F_slope << " * lambda + " << r.F_intercept << "\n";
  os << "F(lambda_start)    = " << r.F_at_start << "   " << verdict(r.F_at_start > 0.0) << "\n";
  os << "g(w)               = " << r.g_slope << " * w + " << r.g_intercept << "\n";
  os << "F linear form      : max error " << r.F_linear_max_error << "   " << verdict(r.F_linear_max_error <= 1e-12)
     << "\n";
  os << "g(f(lambda)) > lambda          on " << r.gf_points << " points: " << verdict(r.gf_failures == 0) << "\n";
  os << "g(1-eps) > lambda_end(eps)     on " << r.geps_points << " points: " << verdict(r.geps_failures == 0)
     << "\n";
  os << "lambda_start < lambda_end(eps) holds for eps < " << r.order_crossover << " ("
     << r.geps_points - r.order_failures << " of " << r.geps_points << " points)\n";
  os << "overall: " << verdict(r.passed()) << "\n";
  return os.str();
}

int cmd_run(const ExperimentManifest& mf, std::ostream& out, std::ostream& err) {
  validate(mf);
  int code = kExitOk;

  if (mf.verify_constants) {
    int m = mf.gen ? mf.gen->m : 100;
    AlgConfig cfg;
    try {
      cfg = derive_constants(m, mf.h_choice);
    } catch (const ConfigInvalid&) {
      m = 100;
      cfg = derive_constants(m, mf.h_choice);
    }
    const AnalysisConstants k{cfg.c};
    const auto report = verify_analysis_constants(cfg, half_open_grid(0.0, 1.0, 1000),
                                                  half_open_grid(k.lambda_start(), 2.0, 10000));
    out << constants_summary(report, cfg);
    if (!report.passed()) code = kExitInternal;
    if (!mf.gen && !mf.input) return code;
  }

  const auto input = load_input(mf);
  for (const auto& warning : input.warnings) err << "warning: " << warning << "\n";
  const auto rows = run_experiment(mf, input.seq);

  const auto dir = output_dir(mf);
  std::filesystem::create_directories(dir);
  if (mf.write_csv) {
    std::string csv = std::string(kResultsCsvHeader) + "\n";
    for (const auto& row : rows) csv += csv_row(row) + "\n";
    write_file(dir / (mf.experiment + ".csv"), csv);
  }
  if (mf.write_json) write_file(dir / (mf.experiment + ".json"), results_json(mf, rows));
  if (mf.traces) {
    std::string lines;
    for (const auto& row : rows) {
      for (const auto& tr : row.traces) {
        json j = trace_json(tr);
        j["scheduler"] = row.scheduler;
        lines += j.dump() + "\n";
      }
    }
    write_file(dir / (mf.experiment + ".traces.jsonl"), lines);
  }

  out << std::left << std::setw(10) << "scheduler" << std::setw(7) << "m" << std::setw(8) << "n" << std::setw(7)
      << "mode" << std::setw(14) << "rom" << std::setw(12) << "stderr" << std::setw(22) << "opt" << std::setw(26)
      << "ratio" << "tail(>=" << fixed(mf.tail_threshold, 3) << "*OPT)\n";
  for (const auto& row : rows) {
    const auto& s = row.stats;
    const std::string opt = fixed(s.opt->best.value, 4) + " (" + std::string(to_string(s.opt->best.kind)) + ")";
    const std::string ratio = s.ratio_lo == s.ratio_hi ? fixed(s.ratio_lo)
                                                       : "[" + fixed(s.ratio_lo) + ", " + fixed(s.ratio_hi) + "]";
    const std::string tail = s.tail.lo == s.tail.hi ? fixed(s.tail.lo)
                                                    : "[" + fixed(s.tail.lo) + ", " + fixed(s.tail.hi) + "]";
    out << std::left << std::setw(10) << row.scheduler << std::setw(7) << row.m << std::setw(8) << row.n
        << std::setw(7) << s.mode << std::setw(14) << fixed(s.mean) << std::setw(12) << fixed(s.std_error)
        << std::setw(22) << opt << std::setw(26) << ratio << tail << "\n";
  }
  return code;
}

namespace {

inline constexpr const char* kStabilityCsvHeader =
    "experiment,m,n,h,epsilon,seed,trials,status,stable_estimate,ci_lo,ci_hi,phi,dev_mean,dev_max,dev_frac_above_0.05";

struct DeviationSummary {
  double mean = 0.0;
  double max = 0.0;
  double frac_above = 0.0;
};

DeviationSummary deviation_sweep(const JobSequence& seq, double phi, const ExperimentManifest& mf) {
  std::vector<double> devs(mf.trials);
  parallel_for(mf.trials, mf.threads, [&](std::size_t trial) {
    Rng rng(derive_seed(mf.seed, "load-lemma", trial));
    devs[trial] = load_lemma_deviation(seq.reordered(random_order(seq.size(), rng)), phi);
  });
  DeviationSummary s;
  s.mean = pairwise_sum(devs) / static_cast<double>(devs.size());
  std::size_t above = 0;
  for (double d : devs) {
    s.max = std::max(s.max, d);
    if (d > 0.05) ++above;
  }
  s.frac_above = static_cast<double>(above) / static_cast<double>(devs.size());
  return s;
}

std::string join_conditions(const std::vector<int>& violated) {
  std::string out;
  for (int c : violated) {
    if (!out.empty()) out += ' ';
    out += "condition " + std::to_string(c);
  }
  return out;
}

}  // namespace

int cmd_stability(const ExperimentManifest& mf, std::ostream& out, std::ostream& err) {
  validate(mf);
  if (!mf.gen && !mf.input) throw InvalidInput("stability needs a family or an input file");

  std::vector<int> ms = mf.m_values;
  if (mf.input || ms.empty()) ms = {0};  // 0: use the input as given

  std::string csv = std::string(kStabilityCsvHeader) + "\n";
  json items = json::array();

  for (int requested_m : ms) {
    const Generated input = [&] {
      if (requested_m == 0) return load_input(mf);
      GenSpec spec = *mf.gen;
      spec.m = requested_m;
      if (spec.family == Family::random_proper) {
        spec.n = static_cast<std::size_t>(std::llround(mf.n_per_m * requested_m));
      }
      return generate(spec);
    }();
    for (const auto& warning : input.warnings) err << "warning: " << warning << "\n";
    const JobSequence& seq = input.seq;
    const int m = seq.machines();
    const AlgConfig cfg = derive_constants(m, mf.h_choice);
    const StabilityParams params{mf.epsilon, cfg};
    validate(params);

    json item = {{"m", m}, {"n", seq.size()}, {"h", cfg.h}, {"epsilon", mf.epsilon}};
    std::string status;
    std::string estimate_cols = ",,";
    if (seq.size() <= static_cast<std::size_t>(m)) {
      // condition 1 fails for every order
      status = "unstable: condition 1";
      item["given_order"] = json::parse(to_json(check_stable(seq, params)));
      out << "m=" << m << " n=" << seq.size() << ": n <= m, every order is unstable: condition 1\n";
    } else if (classify_plain(seq, cfg.c) == SequenceClass::plain) {
      const auto report = check_stable(seq, params);
      status = report.stable ? "plain: stable" : "plain: unstable: " + join_conditions(report.violated());
      item["given_order"] = json::parse(to_json(report));
      out << "m=" << m << " n=" << seq.size() << ": sequence is plain, stability probability undefined; given order "
          << (report.stable ? "stable" : "unstable: " + join_conditions(report.violated())) << "\n";
    } else {
      EstimateOptions options;
      options.trials = mf.trials;
      options.seed = mf.seed;
      options.threads = mf.threads;
      const auto est = estimate_stability_probability(seq, params, options);
      status = est.exact ? "exact" : "estimated";
      estimate_cols = format_double(est.estimate) + "," + format_double(est.ci.lo) + "," + format_double(est.ci.hi);
      item["stable_estimate"] = est.estimate;
      item["ci"] = {est.ci.lo, est.ci.hi};
      item["exact"] = est.exact;
      out << "m=" << m << " n=" << seq.size() << " h=" << cfg.h << ": P[stable] ~ " << fixed(est.estimate, 4)
          << "  95% CI [" << fixed(est.ci.lo, 4) << ", " << fixed(est.ci.hi, 4) << "]\n";
    }
    item["status"] = status;

    json deviations = json::array();
    for (double phi : mf.phis) {
      const auto dev = deviation_sweep(seq, phi, mf);
      deviations.push_back({{"phi", phi}, {"mean", dev.mean}, {"max", dev.max}, {"frac_above_0.05", dev.frac_above}});
      out << "    phi=" << phi << ": load-lemma deviation mean " << fixed(dev.mean) << ", max " << fixed(dev.max)
          << ", fraction > 0.05: " << fixed(dev.frac_above, 4) << "\n";
      csv += mf.experiment + "," + std::to_string(m) + "," + std::to_string(seq.size()) + "," + std::to_string(cfg.h) +
             "," + format_double(mf.epsilon) + "," + std::to_string(mf.seed) + "," + std::to_string(mf.trials) + "," +
             status + "," + estimate_cols + "," + format_double(phi) + "," + format_double(dev.mean) + "," +
             format_double(dev.max) + "," + format_double(dev.frac_above) + "\n";
    }
    item["load_lemma"] = std::move(deviations);
    items.push_back(std::move(item));
  }

  const auto dir = output_dir(mf);
  std::filesystem::create_directories(dir);
  if (mf.write_csv) write_file(dir / (mf.experiment + ".stability.csv"), csv);
  if (mf.write_json) {
    json doc = {{"schema_version", kResultsSchemaVersion},
                {"experiment", mf.experiment},
                {"manifest", json::parse(manifest_to_json(mf))},
                {"confidence_intervals", "Wilson 95%"},
                {"results", items}};
    write_file(dir / (mf.experiment + ".stability.json"), doc.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace romsched
