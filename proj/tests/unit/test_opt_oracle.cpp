#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "romsched/error.hpp"
#include "romsched/generators.hpp"
#include "romsched/opt_oracle.hpp"
#include "romsched/rng.hpp"
#include "support.hpp"

using namespace romsched;

TEST_CASE("lower bound examples") {
  CHECK(opt_lower_bound(JobSequence({3, 3, 3}, 2)) == 6.0);
  CHECK(opt_lower_bound(JobSequence({5}, 3)) == 5.0);
  CHECK(opt_lower_bound(JobSequence(std::vector<double>(5, 2.5), 4)) == 5.0);
}

TEST_CASE("LPT examples") {
  CHECK(lpt_upper_bound(JobSequence({3, 3, 2, 2, 2}, 2)) == 7.0);
  CHECK(lpt_upper_bound(JobSequence({4.5}, 3)) == 4.5);
  CHECK(lpt_upper_bound(JobSequence({1, 5, 2}, 4)) == 5.0);
}

TEST_CASE("exact OPT examples") {
  CHECK(exact_opt(JobSequence({4, 1, 1, 1, 1}, 2)).value == 4.0);
  CHECK(exact_opt(JobSequence({3, 3, 3}, 2)).value == 6.0);
  CHECK(exact_opt(JobSequence({3, 3, 2, 2, 2}, 2)).value == 6.0);
  const auto lb = exact_opt(lb_four_thirds(8), {32, 50'000'000});
  CHECK(lb.value == 4.0);
  CHECK(lb.kind == OptKind::exact);
  CHECK(exact_opt(JobSequence({0, 0, 0}, 2)).value == 0.0);
  CHECK_THROWS_AS(exact_opt(JobSequence(std::vector<double>(25, 1.0), 3)), InvalidInput);
}

TEST_CASE("exact OPT equals brute force over all m^n assignments") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 3);
    const std::size_t n = 1 + gen() % 8;
    std::vector<double> sizes;
    if (trial % 3 == 0) {
      sizes = testing_support::random_integer_sizes(gen, n, 1, 6);
    } else {
      std::uniform_real_distribution<double> d(0.1, 10.0);
      for (std::size_t j = 0; j < n; ++j) sizes.push_back(d(gen));
    }
    const JobSequence seq(sizes, m);
    const auto exact = exact_opt(seq);
    REQUIRE(exact.kind == OptKind::exact);
    CHECK(exact.value == doctest::Approx(oracle::brute_force_opt(sizes, m)).epsilon(1e-12));
  }
}

TEST_CASE("bounds sandwich the optimum and exact OPT ignores order") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 5);
    const std::size_t n = 5 + gen() % 14;
    const JobSequence seq(testing_support::random_integer_sizes(gen, n, 1, 30), m);
    const auto exact = exact_opt(seq);
    REQUIRE(exact.kind == OptKind::exact);
    CHECK(opt_lower_bound(seq) <= exact.value);
    CHECK(exact.value <= lpt_upper_bound(seq));
    CHECK(lpt_upper_bound(seq) <= (4.0 / 3.0 - 1.0 / (3.0 * m)) * exact.value + 1e-9);
    Rng rng(static_cast<std::uint64_t>(trial));
    CHECK(exact_opt(seq.reordered(random_order(n, rng))).value == exact.value);
  }
}

TEST_CASE("an exhausted node budget degrades to an upper bound") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> d(1.0, 100.0);
  std::vector<double> sizes(22);
  for (double& p : sizes) p = d(gen);
  const JobSequence seq(sizes, 5);
  const auto capped = exact_opt(seq, {24, 10});
  CHECK(capped.kind == OptKind::upper_bound);
  CHECK(capped.value <= lpt_upper_bound(seq));
  CHECK(capped.value >= opt_lower_bound(seq));

  const auto bounds = resolve_opt(seq, {24, 10});
  CHECK_FALSE(bounds.is_exact());
  CHECK(bounds.lower <= bounds.upper);
}

TEST_CASE("instances beyond max_n report bounds") {
  const auto lb = lb_four_thirds(100);
  const auto b = resolve_opt(lb);
  CHECK(b.lower == 4.0);
  CHECK(b.upper == 4.0);
  CHECK(b.is_exact());

  const JobSequence seq({5, 4, 3, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 3);
  const auto wide = resolve_opt(seq);
  CHECK(wide.lower <= wide.upper);
  if (!wide.is_exact()) CHECK(wide.best.kind == OptKind::lower_bound);
}
