#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "romsched/algorithms.hpp"
#include "romsched/error.hpp"
#include "romsched/model.hpp"
#include "romsched/rng.hpp"

using namespace romsched;

TEST_CASE("job sequences reject bad input") {
  CHECK_THROWS_AS(JobSequence({}, 2), InvalidInput);
  CHECK_THROWS_AS(JobSequence({1.0}, 0), InvalidInput);
  CHECK_THROWS_AS(JobSequence({1.0, -0.5}, 2), InvalidInput);
  CHECK_THROWS_AS(JobSequence({std::numeric_limits<double>::quiet_NaN()}, 2), InvalidInput);
  CHECK_THROWS_AS(JobSequence({std::numeric_limits<double>::infinity()}, 2), InvalidInput);
  CHECK_THROWS_AS(JobSequence::from_jobs({{0, 1.0}, {0, 2.0}}, 2), InvalidInput);
  CHECK_THROWS_AS(JobSequence::from_jobs({{0, 1.0}, {2, 2.0}}, 2), InvalidInput);
  CHECK_NOTHROW(JobSequence({0.0, 0.0}, 1));
}

TEST_CASE("reordering keeps ids and the base order") {
  const JobSequence seq({4.0, 1.0, 3.0}, 2);
  const std::vector<std::size_t> order{2, 0, 1};
  const auto perm = seq.reordered(order);
  CHECK(perm[0].id == 2);
  CHECK(perm[0].p == 3.0);
  CHECK(perm[2].id == 1);
  CHECK(perm.sizes_by_id() == seq.sizes_by_id());
  CHECK(perm.base() == seq);
}

TEST_CASE("sequence statistics") {
  const JobSequence seq({8, 1, 1, 1, 1}, 4);
  const auto s = SequenceStats::of(seq);
  CHECK(s.average_load == 3.0);
  CHECK(s.p_max == 8.0);
  CHECK(s.P(1) == 8.0);
  CHECK(s.P(5) == 1.0);
  CHECK(s.P(6) == 0.0);
  CHECK(ratio_R(seq) == doctest::Approx(3.0 / 8.0));

  CHECK(ratio_R(JobSequence({2, 2}, 2)) == 1.0);
  CHECK(ratio_R(JobSequence({1, 3}, 1)) == 0.75);
  CHECK_THROWS_AS(ratio_R(JobSequence({0, 0}, 3)), DegenerateSequence);
}

TEST_CASE("plain and proper") {
  const double c = competitive_constant();
  CHECK(classify_plain(JobSequence({5, 5, 5}, 5), c) == SequenceClass::plain);
  CHECK(classify_plain(JobSequence({1, 3}, 1), c) == SequenceClass::plain);
  CHECK(classify_plain(JobSequence(std::vector<double>(5, 1.0), 4), c) == SequenceClass::plain);
  CHECK(classify_plain(JobSequence(std::vector<double>(6, 1.0), 4), c) == SequenceClass::plain);
  CHECK(classify_plain(JobSequence(std::vector<double>(11, 1.0), 10), c) == SequenceClass::proper);
  CHECK(classify_plain(JobSequence({0, 0, 0}, 2), c) == SequenceClass::plain);

  // permutation invariant
  const JobSequence seq({2, 1, 1, 1.5, 1, 1.2, 1, 1, 1, 1.1, 1.3, 1}, 10);
  const auto base = classify_plain(seq, c);
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(classify_plain(seq.reordered(random_order(seq.size(), rng)), c) == base);
  }
}

TEST_CASE("schedule state keeps the sorted view") {
  ScheduleState st(3);
  CHECK(st.sorted_loads() == std::vector<double>{0, 0, 0});
  st.assign(1, {0, 2.0});
  st.assign(3, {1, 5.0});
  st.assign(3, {2, 1.0});
  CHECK(st.sorted_loads() == std::vector<double>{5, 2, 1});
  CHECK(st.suffix_average(1) == doctest::Approx(8.0 / 3.0));
  CHECK(st.suffix_average(2) == 1.5);
  CHECK(st.suffix_average(3) == 1.0);
  CHECK_THROWS_AS(st.suffix_average(0), InvalidInput);
  CHECK_THROWS_AS(st.assign(4, {3, 1.0}), InvalidInput);

  st.assign(3, {3, 4.0});
  CHECK(st.sorted_loads() == std::vector<double>{5, 5, 2});
  CHECK(st.machine_of(3).has_value());
  CHECK(st.total_load() == 12.0);
}

TEST_CASE("equal loads are ranked by ascending machine id") {
  ScheduleState st(2);
  CHECK(st.machine_at_rank(1) == 0);
  CHECK(st.machine_at_rank(2) == 1);
  CHECK(st.assign(2, {0, 2.0}) == 1);
  CHECK(st.sorted_loads() == std::vector<double>{2, 0});
  CHECK(st.machine_at_rank(1) == 1);

  ScheduleState tied(2);
  tied.assign(1, {0, 3.0});
  tied.assign(2, {1, 3.0});
  CHECK(tied.machine_at_rank(1) == 0);
  CHECK(tied.assign(2, {2, 1.0}) == 1);
  CHECK(tied.sorted_loads() == std::vector<double>{4, 3});
  CHECK(tied.machine_at_rank(1) == 1);
}

TEST_CASE("schedule state against a naive model under random assignments") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 7);
    ScheduleState st(m);
    std::vector<double> loads(m, 0.0);
    double total = 0.0;
    for (std::size_t job = 0; job < 40; ++job) {
      const int rank = 1 + static_cast<int>(gen() % m);
      const double p = static_cast<double>(gen() % 5);
      // naive ranking: load desc, id asc
      std::vector<int> ids(m);
      std::iota(ids.begin(), ids.end(), 0);
      std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return loads[a] > loads[b]; });
      const int expected = ids[rank - 1];
      REQUIRE(st.assign(rank, {job, p}) == expected);
      loads[expected] += p;
      total += p;
    }
    const auto by_machine = st.loads_by_machine();
    CHECK(std::vector<double>(by_machine.begin(), by_machine.end()) == loads);
    CHECK(st.total_load() == total);
    const auto sorted = st.sorted_loads();
    CHECK(std::is_sorted(sorted.begin(), sorted.end(), std::greater<>()));
    for (int j = 1; j < m; ++j) CHECK(st.suffix_average(j) >= st.suffix_average(j + 1));
  }
}

TEST_CASE("prefix statistics") {
  PrefixStats s(2);
  s.observe({0, 3.0});
  CHECK(s.average_load() == 1.5);
  CHECK(s.p_max() == 3.0);
  CHECK(s.p_m_plus_1() == 0.0);
  CHECK(s.lower_bound() == 3.0);
  s.observe({1, 3.0});
  s.observe({2, 3.0});
  CHECK(s.lower_bound() == 6.0);
  CHECK(s.top_jobs().size() == 3);

  PrefixStats ones(2);
  ones.observe({0, 1.0});
  ones.observe({1, 1.0});
  CHECK(ones.lower_bound() == 1.0);
  CHECK_THROWS_AS(ones.observe({2, -1.0}), InvalidInput);
}

TEST_CASE("O^t matches a from-scratch recomputation and never decreases") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> size(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 6);
    PrefixStats s(m);
    std::vector<double> arrived;
    double prev = 0.0;
    for (std::size_t t = 0; t < 30; ++t) {
      const double p = size(gen);
      s.observe({t, p});
      arrived.push_back(p);
      CHECK(s.lower_bound() == doctest::Approx(oracle::bound_from_prefix(arrived, m)).epsilon(1e-12));
      CHECK(s.lower_bound() >= prev);
      prev = s.lower_bound();
      CHECK(s.top_jobs().size() == std::min<std::size_t>(t + 1, m + 1));
    }
  }
}
