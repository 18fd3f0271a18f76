#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "romsched/model.hpp"

namespace romsched {

// JSON form: {"m": <int>, "jobs": [p_0, p_1, ...]} in arrival order.
// A bare array is also accepted when the machine count is supplied
// separately. CSV form: header "id,p" followed by one row per job in arrival
// order; ids must be exactly 0..n-1.

JobSequence parse_sequence_json(std::string_view text, std::optional<int> machines = std::nullopt);
std::string to_sequence_json(const JobSequence& seq);

JobSequence parse_sequence_csv(std::string_view text, int machines);
std::string to_sequence_csv(const JobSequence& seq);

/// Dispatches on the file extension (.json or .csv).
JobSequence load_sequence(const std::filesystem::path& path, std::optional<int> machines);

}  // namespace romsched
