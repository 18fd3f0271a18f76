#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "romsched/commands.hpp"
#include "romsched/error.hpp"
#include "romsched/sequence_io.hpp"

using namespace romsched;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("romsched-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROMSCHED_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentManifest lb43_manifest(const fs::path& dir) {
  ExperimentManifest mf;
  mf.experiment = "lb43";
  mf.schedulers = {"greedy"};
  GenSpec spec;
  spec.family = Family::lb_four_thirds;
  spec.m = 8;
  mf.gen = spec;
  mf.out_dir = dir.string();
  return mf;
}

}  // namespace

TEST_CASE("manifest round trip") {
  ExperimentManifest mf;
  mf.experiment = "roundtrip";
  mf.schedulers = {"alg"};
  GenSpec spec;
  spec.family = Family::random_proper;
  spec.m = 30;
  spec.n = 40;
  spec.dist = parse_distribution("two-point(1,5,0.25)");
  spec.seed = 99;
  mf.gen = spec;
  mf.mode = "mc";
  mf.trials = 123;
  mf.seed = 42;
  mf.threads = 3;
  mf.limits = {20, 1000};
  mf.tail_threshold = 1.25;
  mf.h_choice = HChoice::explicit_value(3);
  mf.epsilon = 0.05;
  mf.m_values = {100, 400};
  mf.phis = {0.25, 0.5};
  mf.traces = true;
  CHECK(manifest_from_json(manifest_to_json(mf)) == mf);

  ExperimentManifest file_input;
  file_input.input = "jobs.csv";
  file_input.input_m = 4;
  file_input.h_choice = {HRule::log, 0};
  CHECK(manifest_from_json(manifest_to_json(file_input)) == file_input);
  CHECK(manifest_from_json("{}") == ExperimentManifest{});
}

TEST_CASE("malformed manifests") {
  CHECK_THROWS_AS(manifest_from_json("not json"), InvalidInput);
  CHECK_THROWS_AS(manifest_from_json("[1, 2]"), InvalidInput);
  CHECK_THROWS_AS(manifest_from_json(R"({"trials": "many"})"), InvalidInput);
  CHECK_THROWS_AS(manifest_from_json(R"({"gen": {"family": "nope"}})"), InvalidInput);
  CHECK_THROWS_AS(manifest_from_json(R"({"h": "sqrt"})"), InvalidInput);

  ExperimentManifest mf;
  mf.mode = "fast";
  CHECK_THROWS_AS(validate(mf), InvalidInput);
  mf = {};
  mf.gen = GenSpec{};
  mf.input = "x.json";
  CHECK_THROWS_AS(validate(mf), InvalidInput);
  mf = {};
  mf.experiment = "../escape";
  CHECK_THROWS_AS(validate(mf), InvalidInput);
}

TEST_CASE("exit codes follow the error kind") {
  CHECK(exit_code_for(InvalidInput("x")) == 2);
  CHECK(exit_code_for(ConfigInvalid("x", 17)) == 2);
  CHECK(exit_code_for(NotProperAfterRetries("x")) == 2);
  CHECK(exit_code_for(BudgetExceeded("x")) == 3);
  CHECK(exit_code_for(InvariantViolation("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 4);
}

TEST_CASE("sequence files") {
  const auto dir = scratch("io");
  const JobSequence seq({3, 1.5, 0, 2}, 3);
  CHECK(parse_sequence_json(to_sequence_json(seq)) == seq);
  CHECK(parse_sequence_csv(to_sequence_csv(seq), 3) == seq);
  CHECK(parse_sequence_json("[1, 2, 3]", 2) == JobSequence({1, 2, 3}, 2));
  CHECK_THROWS_AS(parse_sequence_json("[1, 2, 3]"), InvalidInput);
  CHECK_THROWS_AS(parse_sequence_json(R"({"m": 2, "jobs": [1, -2]})"), InvalidInput);
  CHECK_THROWS_AS(parse_sequence_csv("id,p\n0,1\n0,2\n", 2), InvalidInput);
  CHECK_THROWS_AS(parse_sequence_csv("id,p\n0,nan\n", 2), InvalidInput);

  std::ofstream(dir / "jobs.json") << to_sequence_json(seq);
  CHECK(load_sequence(dir / "jobs.json", std::nullopt) == seq);
  std::ofstream(dir / "jobs.csv") << to_sequence_csv(seq);
  CHECK(load_sequence(dir / "jobs.csv", 3) == seq);
  CHECK_THROWS_AS(load_sequence(dir / "missing.json", std::nullopt), InvalidInput);
}

TEST_CASE("run writes the CSV and JSON artifacts") {
  const auto dir = scratch("run");
  auto mf = lb43_manifest(dir);
  mf.traces = true;
  std::ostringstream out, err;
  CHECK(cmd_run(mf, out, err) == 0);
  CHECK(out.str().find("1.336207") != std::string::npos);

  const auto csv = slurp(dir / "lb43.csv");
  const auto header = csv.substr(0, csv.find('\n'));
  CHECK(header == kResultsCsvHeader);
  CHECK(csv.find("lb43,greedy,8,29,0,exact,") != std::string::npos);
  CHECK(csv.find(",4,exact,") != std::string::npos);

  const auto doc = nlohmann::json::parse(slurp(dir / "lb43.json"));
  CHECK(doc["schema_version"] == kResultsSchemaVersion);
  CHECK(doc["results"][0]["rom_mean"].get<double>() == doctest::Approx(39.0 / 29.0 + 4.0));
  CHECK(doc["results"][0]["traces"].size() == 29);
  CHECK(manifest_from_json(doc["manifest"].dump()) == mf);

  std::ifstream traces(dir / "lb43.traces.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(traces, line)) {
    CHECK(nlohmann::json::parse(line).contains("chosen_rank"));
    ++lines;
  }
  CHECK(lines == 29);
}

TEST_CASE("re-running a manifest reproduces the outputs bit for bit") {
  const auto a = scratch("repro-a");
  const auto b = scratch("repro-b");
  ExperimentManifest mf;
  mf.experiment = "rp";
  mf.schedulers = {"alg", "greedy"};
  GenSpec spec;
  spec.family = Family::random_proper;
  spec.m = 40;
  spec.n = 800;
  spec.dist = parse_distribution("two-point(1,40,0.025)");
  spec.seed = 7;
  mf.gen = spec;
  mf.mode = "mc";
  mf.trials = 200;
  mf.seed = 7;
  mf.threads = 1;
  mf.out_dir = a.string();
  std::ostringstream sink;
  REQUIRE(cmd_run(mf, sink, sink) == 0);
  mf.out_dir = b.string();
  REQUIRE(cmd_run(mf, sink, sink) == 0);
  CHECK(slurp(a / "rp.csv") == slurp(b / "rp.csv"));
  // thread count must not change the numbers
  mf.threads = 4;
  mf.out_dir = (b / "threads").string();
  REQUIRE(cmd_run(mf, sink, sink) == 0);
  CHECK(slurp(a / "rp.csv") == slurp(b / "threads" / "rp.csv"));
}

TEST_CASE("output directory falls back to the environment") {
  const auto dir = scratch("env");
  ExperimentManifest mf;
  CHECK(output_dir(mf) == fs::path(std::getenv("ROMSCHED_OUTPUT_DIR") ? std::getenv("ROMSCHED_OUTPUT_DIR") : "."));
  ::setenv("ROMSCHED_OUTPUT_DIR", dir.c_str(), 1);
  CHECK(output_dir(mf) == dir);
  mf.out_dir = "elsewhere";
  CHECK(output_dir(mf) == fs::path("elsewhere"));
  ::unsetenv("ROMSCHED_OUTPUT_DIR");
}

TEST_CASE("stability sweep") {
  const auto dir = scratch("stability");
  ExperimentManifest mf;
  mf.experiment = "sweep";
  GenSpec spec;
  spec.family = Family::random_proper;
  spec.seed = 4;
  mf.gen = spec;
  mf.m_values = {50, 200};
  mf.trials = 100;
  mf.seed = 4;
  mf.out_dir = dir.string();
  std::ostringstream out, err;
  CHECK(cmd_stability(mf, out, err) == 0);
  const auto csv = slurp(dir / "sweep.stability.csv");
  CHECK(csv.rfind("experiment,m,n,h,epsilon,seed,trials,status,", 0) == 0);
  CHECK(csv.find("sweep,50,65,3,") != std::string::npos);
  CHECK(csv.find("sweep,200,260,5,") != std::string::npos);

  ExperimentManifest few = mf;
  few.experiment = "few";
  few.gen->family = Family::uniform_r;
  few.gen->m = 20;
  few.gen->r = 1;
  few.m_values.clear();
  std::ostringstream out2;
  CHECK(cmd_stability(few, out2, err) == 0);
  CHECK(out2.str().find("unstable: condition 1") != std::string::npos);
  CHECK(slurp(dir / "few.stability.csv").find(",unstable: condition 1,") != std::string::npos);
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("exit");
  const std::string out = " --out-dir " + dir.string();
  CHECK(run_cli("run --scheduler greedy --family lb43 --m 8 --mode exact" + out) == 0);
  CHECK(fs::exists(dir / "experiment.csv"));
  CHECK(run_cli("run --verify-constants") == 0);
  CHECK(run_cli("run --bogus-flag") == 2);
  CHECK(run_cli("run --scheduler alg --family lb43 --m 8" + out) == 2);
  CHECK(run_cli("run --scheduler greedy --family lb43 --m 8 --mode exact --max-arrangements 5" + out) == 3);
  CHECK(run_cli("run --scheduler greedy --family random-proper --m 100 --n 2000 --trials 10" + out) == 2);
  CHECK(run_cli("stability --family uniform --r 1 --m 20 --trials 10" + out) == 0);

  // a manifest file, with a flag override
  {
    auto mf = lb43_manifest(dir);
    mf.experiment = "from-file";
    std::ofstream(dir / "m.json") << manifest_to_json(mf);
  }
  CHECK(run_cli("run --manifest " + (dir / "m.json").string() + " --experiment overridden") == 0);
  CHECK(fs::exists(dir / "overridden.csv"));
  CHECK(run_cli("run --manifest " + (dir / "missing.json").string()) == 2);
}
