// romsched: random-order makespan experiments from the command line.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "romsched/commands.hpp"
#include "romsched/error.hpp"

using namespace romsched;

namespace {

struct Flags {
  std::string manifest_path;
  std::string dump_manifest;
  std::vector<std::string> schedulers;
  std::string family;
  int m = 0;
  int r = 0;
  std::size_t n = 0;
  std::string dist;
  std::string input;
  int input_m = 0;
  std::string mode;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t gen_seed = 0;
  unsigned threads = 0;
  std::size_t max_n = 0;
  std::uint64_t node_budget = 0;
  std::uint64_t max_arrangements = 0;
  double tail_threshold = 0.0;
  std::string h;
  double epsilon = 0.0;
  std::vector<int> m_values;
  double n_per_m = 0.0;
  std::vector<double> phis;
  std::string out_dir;
  std::string experiment;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.set_help_flag("--help", "print this help");  // -h would clash with --h
  cmd.add_option("--manifest", f.manifest_path, "JSON experiment manifest; other flags override its fields");
  cmd.add_option("--dump-manifest", f.dump_manifest, "write the effective manifest to this file");
  cmd.add_option("--experiment", f.experiment, "experiment name, used for output file names");
  cmd.add_option("--family", f.family, "generator: uniform, lb43, lb32, greedy-adv, random-proper");
  cmd.add_option("--m", f.m, "machine count");
  cmd.add_option("--r", f.r, "uniform family: r*m jobs of size 1");
  cmd.add_option("--n", f.n, "random-proper: number of jobs");
  cmd.add_option("--dist", f.dist, "random-proper: uniform(a,b), two-point(a,b,q) or pareto(scale,cap,shape)");
  cmd.add_option("--gen-seed", f.gen_seed, "generator seed (default: --seed)");
  cmd.add_option("--input", f.input, "job sequence file (.json or .csv)");
  cmd.add_option("--input-m", f.input_m, "machine count for CSV or bare-array input");
  cmd.add_option("--trials", f.trials, "Monte Carlo trials");
  cmd.add_option("--seed", f.seed, "base seed for all randomness");
  cmd.add_option("--threads", f.threads, "worker threads (0 = logical cores)");
  cmd.add_option("--h", f.h, "reluctance: cbrt, log or an integer");
  cmd.add_option("--out-dir", f.out_dir, "output directory (default $ROMSCHED_OUTPUT_DIR or .)");
}

ExperimentManifest build_manifest(const CLI::App& cmd, const Flags& f) {
  ExperimentManifest mf;
  if (!f.manifest_path.empty()) {
    std::ifstream in(f.manifest_path);
    if (!in) throw InvalidInput("cannot read manifest " + f.manifest_path);
    std::stringstream text;
    text << in.rdbuf();
    mf = manifest_from_json(text.str());
  }
  auto has = [&](const char* name) {
    const auto* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };

  if (has("--experiment")) mf.experiment = f.experiment;
  if (has("--scheduler")) mf.schedulers = f.schedulers;
  const bool gen_flag = has("--family") || has("--m") || has("--r") || has("--n") || has("--dist") ||
                        has("--gen-seed");
  if (gen_flag && !has("--input")) {
    GenSpec spec = mf.gen.value_or(GenSpec{});
    if (!mf.gen) spec.seed = mf.seed;
    if (has("--family")) spec.family = parse_family(f.family);
    if (has("--m")) spec.m = f.m;
    if (has("--r")) spec.r = f.r;
    if (has("--n")) spec.n = f.n;
    if (has("--dist")) spec.dist = parse_distribution(f.dist);
    if (has("--seed")) spec.seed = f.seed;
    if (has("--gen-seed")) spec.seed = f.gen_seed;
    mf.gen = spec;
    mf.input.reset();
  } else if (mf.gen && has("--seed")) {
    mf.gen->seed = f.seed;
  }
  if (has("--input")) {
    mf.input = f.input;
    if (gen_flag && has("--m") && !has("--input-m")) mf.input_m = f.m;
    mf.gen.reset();
  }
  if (has("--input-m")) mf.input_m = f.input_m;
  if (has("--mode")) {
    mf.mode = f.mode;
  } else if (has("--trials") && f.manifest_path.empty()) {
    mf.mode = "mc";
  }
  if (has("--trials")) mf.trials = f.trials;
  if (has("--seed")) mf.seed = f.seed;
  if (has("--threads")) mf.threads = f.threads;
  if (has("--max-n")) mf.limits.max_n = f.max_n;
  if (has("--node-budget")) mf.limits.node_budget = f.node_budget;
  if (has("--max-arrangements")) mf.max_arrangements = f.max_arrangements;
  if (has("--tail-threshold")) mf.tail_threshold = f.tail_threshold;
  if (has("--h")) mf.h_choice = parse_h_choice(f.h);
  if (has("--epsilon")) mf.epsilon = f.epsilon;
  if (has("--m-values")) mf.m_values = f.m_values;
  if (has("--n-per-m")) mf.n_per_m = f.n_per_m;
  if (has("--phi")) mf.phis = f.phis;
  if (has("--out-dir")) mf.out_dir = f.out_dir;
  if (has("--no-csv")) mf.write_csv = false;
  if (has("--no-json")) mf.write_json = false;
  if (has("--traces")) mf.traces = true;
  if (has("--verify-constants")) mf.verify_constants = true;

  if (!f.dump_manifest.empty()) {
    std::ofstream out(f.dump_manifest);
    if (!out) throw InvalidInput("cannot write " + f.dump_manifest);
    out << manifest_to_json(mf) << "\n";
  }
  return mf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-order online makespan minimization: Greedy vs ALG"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");
  Flags f;

  auto* run = app.add_subcommand("run", "measure rom, OPT ratio and tail probability");
  add_common(*run, f);
  run->add_option("--scheduler", f.schedulers, "scheduler(s): greedy, alg")->expected(1, -1)->delimiter(',');
  run->add_option("--mode", f.mode, "fixed, exact or mc (default exact; mc when --trials is given)");
  run->add_option("--max-n", f.max_n, "largest n solved exactly by the OPT oracle");
  run->add_option("--node-budget", f.node_budget, "branch-and-bound node budget");
  run->add_option("--max-arrangements", f.max_arrangements, "exact mode: arrangement limit");
  run->add_option("--tail-threshold", f.tail_threshold, "tail event: makespan >= threshold * OPT");
  run->add_flag("--traces", "record per-step traces of the given order");
  run->add_flag("--verify-constants", "check the analysis constants and inequalities");
  run->add_flag("--no-csv", "skip the CSV output");
  run->add_flag("--no-json", "skip the JSON output");

  auto* stab = app.add_subcommand("stability", "stability probability and load-lemma sweeps");
  add_common(*stab, f);
  stab->add_option("--epsilon", f.epsilon, "stability epsilon in (0, 1]");
  stab->add_option("--m-values", f.m_values, "machine counts to sweep")->expected(1, -1)->delimiter(',');
  stab->add_option("--n-per-m", f.n_per_m, "random-proper sweeps: n = round(n_per_m * m)");
  stab->add_option("--phi", f.phis, "load-lemma fractions")->expected(1, -1)->delimiter(',');
  stab->add_flag("--no-csv", "skip the CSV output");
  stab->add_flag("--no-json", "skip the JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidManifest;
  }

  try {
    if (run->parsed()) return cmd_run(build_manifest(*run, f), std::cout, std::cerr);
    return cmd_stability(build_manifest(*stab, f), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
