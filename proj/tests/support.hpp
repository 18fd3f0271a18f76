#pragma once

#include <random>
#include <vector>

#include "oracles.hpp"
#include "romsched/algorithms.hpp"
#include "romsched/model.hpp"

namespace testing_support {

inline std::vector<double> arrival_sizes(const romsched::JobSequence& seq) {
  std::vector<double> out;
  for (const auto& job : seq.jobs()) out.push_back(job.p);
  return out;
}

inline std::vector<oracle::Job> arrival_jobs(const romsched::JobSequence& seq) {
  std::vector<oracle::Job> out;
  for (const auto& job : seq.jobs()) out.push_back({job.id, job.p});
  return out;
}

inline oracle::AlgParams params_of(const romsched::AlgConfig& cfg) {
  return {cfg.m, cfg.h, cfg.i, cfg.k, cfg.c, cfg.alpha};
}

// integer-valued sizes keep exact-OPT comparisons free of rounding
inline std::vector<double> random_integer_sizes(std::mt19937_64& gen, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<double> out(n);
  for (double& p : out) p = d(gen);
  return out;
}

}  // namespace testing_support
