#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace romsched {

// All experiment randomness comes from std::mt19937_64, whose output
// sequence is fixed by the C++ standard. Seeds for independent streams are
// derived with the SplitMix64 finalizer from (base seed, purpose tag, index).
// Bounded integers and unit reals are drawn with the helpers below rather
// than the <random> distributions, whose algorithms differ between standard
// libraries.

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash of a purpose tag.
std::uint64_t tag_hash(std::string_view tag);

/// Seed for stream `index` of purpose `tag` under `base`.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  double uniform(double a, double b) { return a + (b - a) * unit(); }

 private:
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle of an index vector.
void shuffle(std::span<std::size_t> items, Rng& rng);

/// A uniformly random permutation of 0..n-1.
std::vector<std::size_t> random_order(std::size_t n, Rng& rng);

}  // namespace romsched
