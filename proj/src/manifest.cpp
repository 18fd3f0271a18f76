#include "romsched/manifest.hpp"

#include <charconv>

#include "json.hpp"
#include "romsched/error.hpp"

namespace romsched {

using nlohmann::json;

std::string to_string(HChoice choice) {
  switch (choice.rule) {
    case HRule::cbrt: return "cbrt";
    case HRule::log: return "log";
    case HRule::explicit_h: return std::to_string(choice.h);
  }
  return "?";
}

HChoice parse_h_choice(const std::string& text) {
  if (text == "cbrt") return {HRule::cbrt, 0};
  if (text == "log") return {HRule::log, 0};
  int h = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h);
  if (ec != std::errc() || ptr != text.data() + text.size() || h < 1) {
    throw InvalidInput("h must be 'cbrt', 'log' or a positive integer, got '" + text + "'");
  }
  return HChoice::explicit_value(h);
}

std::string manifest_to_json(const ExperimentManifest& mf) {
  json j;
  j["experiment"] = mf.experiment;
  j["schedulers"] = mf.schedulers;
  if (mf.gen) {
    j["gen"] = {{"family", std::string(to_string(mf.gen->family))},
                {"m", mf.gen->m},
                {"r", mf.gen->r},
                {"n", mf.gen->n},
                {"dist", to_string(mf.gen->dist)},
                {"seed", mf.gen->seed}};
  }
  if (mf.input) j["input"] = *mf.input;
  if (mf.input_m) j["input_m"] = *mf.input_m;
  j["mode"] = mf.mode;
  j["trials"] = mf.trials;
  j["seed"] = mf.seed;
  j["threads"] = mf.threads;
  j["max_arrangements"] = mf.max_arrangements;
  j["max_n"] = mf.limits.max_n;
  j["node_budget"] = mf.limits.node_budget;
  j["tail_threshold"] = mf.tail_threshold;
  j["h"] = to_string(mf.h_choice);
  j["epsilon"] = mf.epsilon;
  j["m_values"] = mf.m_values;
  j["n_per_m"] = mf.n_per_m;
  j["phis"] = mf.phis;
  j["verify_constants"] = mf.verify_constants;
  j["out_dir"] = mf.out_dir;
  j["write_csv"] = mf.write_csv;
  j["write_json"] = mf.write_json;
  j["traces"] = mf.traces;
  return j.dump(2);
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("manifest field '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("manifest must be a JSON object");

  ExperimentManifest mf;
  read(j, "experiment", mf.experiment);
  read(j, "schedulers", mf.schedulers);
  if (j.contains("gen")) {
    const json& g = j["gen"];
    if (!g.is_object()) throw InvalidInput("manifest field 'gen' must be an object");
    GenSpec spec;
    std::string family = std::string(to_string(spec.family));
    std::string dist = to_string(spec.dist);
    read(g, "family", family);
    read(g, "m", spec.m);
    read(g, "r", spec.r);
    read(g, "n", spec.n);
    read(g, "dist", dist);
    read(g, "seed", spec.seed);
    spec.family = parse_family(family);
    spec.dist = parse_distribution(dist);
    mf.gen = spec;
  }
  if (j.contains("input")) {
    std::string input;
    read(j, "input", input);
    mf.input = input;
  }
  if (j.contains("input_m")) {
    int m = 0;
    read(j, "input_m", m);
    mf.input_m = m;
  }
  read(j, "mode", mf.mode);
  read(j, "trials", mf.trials);
  read(j, "seed", mf.seed);
  read(j, "threads", mf.threads);
  read(j, "max_arrangements", mf.max_arrangements);
  read(j, "max_n", mf.limits.max_n);
  read(j, "node_budget", mf.limits.node_budget);
  read(j, "tail_threshold", mf.tail_threshold);
  if (j.contains("h")) {
    std::string h;
    if (j["h"].is_number_integer()) {
      h = std::to_string(j["h"].get<int>());
    } else {
      read(j, "h", h);
    }
    mf.h_choice = parse_h_choice(h);
  }
  read(j, "epsilon", mf.epsilon);
  read(j, "m_values", mf.m_values);
  read(j, "n_per_m", mf.n_per_m);
  read(j, "phis", mf.phis);
  read(j, "verify_constants", mf.verify_constants);
  read(j, "out_dir", mf.out_dir);
  read(j, "write_csv", mf.write_csv);
  read(j, "write_json", mf.write_json);
  read(j, "traces", mf.traces);
  return mf;
}

void validate(const ExperimentManifest& mf) {
  if (mf.experiment.empty()) throw InvalidInput("experiment name must not be empty");
  if (mf.experiment.find_first_of("/\\") != std::string::npos) {
    throw InvalidInput("experiment name must not contain path separators");
  }
  if (mf.mode != "fixed" && mf.mode != "exact" && mf.mode != "mc") {
    throw InvalidInput("mode must be fixed, exact or mc, got '" + mf.mode + "'");
  }
  if (mf.mode == "mc" && mf.trials == 0) throw InvalidInput("mc mode needs trials >= 1");
  if (mf.gen && mf.input) throw InvalidInput("give either a generated family or an input file, not both");
  if (mf.schedulers.empty() && !mf.verify_constants) throw InvalidInput("no scheduler selected");
  if (!(mf.tail_threshold > 0.0)) throw InvalidInput("tail threshold must be positive");
  if (!(mf.n_per_m > 1.0)) throw InvalidInput("n_per_m must exceed 1 so that n > m");
  for (double phi : mf.phis) {
    if (!(phi > 0.0 && phi <= 1.0)) throw InvalidInput("phi values must lie in (0, 1]");
  }
}

EvalMode eval_mode(const ExperimentManifest& mf) {
  if (mf.mode == "fixed") return FixedOrder{};
  if (mf.mode == "exact") {
    ExactMode exact;
    exact.max_arrangements = mf.max_arrangements;
    return exact;
  }
  return MonteCarloMode{mf.trials, mf.seed, mf.threads};
}

}  // namespace romsched
