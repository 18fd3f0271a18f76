#include "romsched/sequence_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "romsched/error.hpp"
#include "romsched/format.hpp"

namespace romsched {

using nlohmann::json;

namespace {

std::vector<double> parse_size_array(const json& arr) {
  if (!arr.is_array()) throw InvalidInput("expected a JSON array of processing times");
  std::vector<double> sizes;
  sizes.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw InvalidInput("processing times must be numbers");
    sizes.push_back(v.get<double>());
  }
  return sizes;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double_field(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InvalidInput("line " + std::to_string(line_no) + ": cannot parse processing time '" +
                       std::string(field) + "'");
  }
  return value;
}

}  // namespace

JobSequence parse_sequence_json(std::string_view text, std::optional<int> machines) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("invalid sequence JSON: ") + e.what());
  }
  if (doc.is_array()) {
    if (!machines) throw InvalidInput("bare JSON array needs an explicit machine count");
    return JobSequence(parse_size_array(doc), *machines);
  }
  if (!doc.is_object() || !doc.contains("jobs")) {
    throw InvalidInput("sequence JSON must be an object with \"m\" and \"jobs\"");
  }
  int m = 0;
  if (doc.contains("m")) {
    if (!doc["m"].is_number_integer()) throw InvalidInput("\"m\" must be an integer");
    m = doc["m"].get<int>();
  } else if (machines) {
    m = *machines;
  } else {
    throw InvalidInput("sequence JSON lacks \"m\"");
  }
  return JobSequence(parse_size_array(doc["jobs"]), m);
}

std::string to_sequence_json(const JobSequence& seq) {
  json arr = json::array();
  for (const Job& job : seq.jobs()) arr.push_back(job.p);
  json doc = {{"m", seq.machines()}, {"jobs", arr}};
  return doc.dump();
}

JobSequence parse_sequence_csv(std::string_view text, int machines) {
  std::vector<Job> jobs;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "id,p") throw InvalidInput("CSV header must be 'id,p'");
      header_seen = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 'id,p'");
    }
    auto id_field = trim(line.substr(0, comma));
    std::size_t id = 0;
    auto [ptr, ec] = std::from_chars(id_field.data(), id_field.data() + id_field.size(), id);
    if (ec != std::errc() || ptr != id_field.data() + id_field.size()) {
      throw InvalidInput("line " + std::to_string(line_no) + ": bad job id");
    }
    double p = parse_double_field(line.substr(comma + 1), line_no);
    validate_processing_time(p);
    jobs.push_back({id, p});
  }
  if (!header_seen) throw InvalidInput("CSV input is empty");
  return JobSequence::from_jobs(std::move(jobs), machines);
}

std::string to_sequence_csv(const JobSequence& seq) {
  std::string out = "id,p\n";
  for (const Job& job : seq.jobs()) {
    out += std::to_string(job.id);
    out += ',';
    out += format_double(job.p);
    out += '\n';
  }
  return out;
}

JobSequence load_sequence(const std::filesystem::path& path, std::optional<int> machines) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto ext = path.extension().string();
  if (ext == ".json") return parse_sequence_json(buffer.str(), machines);
  if (ext == ".csv") {
    if (!machines) throw InvalidInput("CSV input needs an explicit machine count");
    return parse_sequence_csv(buffer.str(), *machines);
  }
  throw InvalidInput("unsupported sequence file extension '" + ext + "'");
}

}  // namespace romsched
