#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ige/harness/stats.hpp"

using namespace ige::harness;

TEST_CASE("bootstrap_ci degenerate samples collapse to a point") {
  std::vector<bool> all_true(25, true);
  std::vector<bool> all_false(25, false);
  CHECK(bootstrap_ci(all_true) == std::pair{100.0, 100.0});
  CHECK(bootstrap_ci(all_false) == std::pair{0.0, 0.0});
}

TEST_CASE("bootstrap_ci is seeded and deterministic") {
  std::vector<bool> flags;
  for (int i = 0; i < 25; ++i) flags.push_back(i < 19);
  const auto a = bootstrap_ci(flags, 10000, 95.0, 7);
  const auto b = bootstrap_ci(flags, 10000, 95.0, 7);
  CHECK(a == b);
  // With few resamples the discrete bootstrap distribution is coarse enough
  // that seeds disagree.
  const auto c = bootstrap_ci(flags, 11, 95.0, 7);
  const auto d = bootstrap_ci(flags, 11, 95.0, 8);
  CHECK(c != d);
}

TEST_CASE("bootstrap_ci brackets the point estimate within [0, 100]") {
  std::vector<bool> flags;
  for (int i = 0; i < 40; ++i) flags.push_back(i % 3 == 0);
  const auto [lo, hi] = bootstrap_ci(flags, 5000, 95.0, 3);
  const double rate = 100.0 * 14 / 40;
  CHECK(lo >= 0.0);
  CHECK(hi <= 100.0);
  CHECK(lo <= rate);
  CHECK(hi >= rate);
  CHECK(lo < hi);
}

TEST_CASE("bootstrap_ci narrows at a lower level") {
  std::vector<bool> flags;
  for (int i = 0; i < 30; ++i) flags.push_back(i < 15);
  const auto wide = bootstrap_ci(flags, 10000, 99.0, 5);
  const auto narrow = bootstrap_ci(flags, 10000, 80.0, 5);
  CHECK(narrow.first >= wide.first);
  CHECK(narrow.second <= wide.second);
}

TEST_CASE("bootstrap_ci validates its inputs") {
  CHECK_THROWS_AS(bootstrap_ci({}), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci({true}, 0), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci({true}, 100, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci({true}, 100, 100.0), std::invalid_argument);
}

TEST_CASE("chi2_2x2 matches the closed form on a total split") {
  const auto r = chi2_2x2(25, 25, 0, 25);
  CHECK(r.statistic == doctest::Approx(50.0));
  CHECK(r.p_value < 1e-11);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("chi2_2x2 flags a significant 84% versus 48% contrast") {
  // 84% vs 48% at n=25.
  const auto r = chi2_2x2(21, 25, 12, 25);
  CHECK(r.statistic == doctest::Approx(7.219251).epsilon(1e-6));
  CHECK(r.p_value < 0.05);
}

TEST_CASE("chi2_2x2 identical groups carry no signal") {
  const auto r = chi2_2x2(5, 10, 5, 10);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("chi2_2x2 degenerate margins pin p at 1") {
  const auto none = chi2_2x2(0, 10, 0, 12);
  CHECK(none.degenerate);
  CHECK(none.p_value == 1.0);
  const auto all = chi2_2x2(10, 10, 12, 12);
  CHECK(all.degenerate);
  CHECK(all.p_value == 1.0);
}

TEST_CASE("chi2_2x2 is symmetric in its groups") {
  const auto ab = chi2_2x2(17, 30, 9, 28);
  const auto ba = chi2_2x2(9, 28, 17, 30);
  CHECK(ab.statistic == doctest::Approx(ba.statistic));
  CHECK(ab.p_value == doctest::Approx(ba.p_value));
}

TEST_CASE("chi2_2x2 validates its inputs") {
  CHECK_THROWS_AS(chi2_2x2(0, 0, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(chi2_2x2(3, 2, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(chi2_2x2(-1, 2, 1, 2), std::invalid_argument);
}

TEST_CASE("build_curve is a cumulative step function") {
  std::vector<std::optional<int>> ops{3, 3, 3, 3};
  const auto curve = build_curve(ops, 5);
  REQUIRE(curve.size() == 6);
  CHECK(curve[0].success_rate == 0.0);
  CHECK(curve[2].success_rate == 0.0);
  CHECK(curve[3].success_rate == 1.0);
  CHECK(curve[5].success_rate == 1.0);
  for (std::size_t k = 0; k < curve.size(); ++k)
    CHECK(curve[k].operations == static_cast<int>(k));
}

TEST_CASE("build_curve is monotone with mixed outcomes") {
  std::vector<std::optional<int>> ops{1, 5, std::nullopt, 9, 5, std::nullopt};
  const auto curve = build_curve(ops, 12);
  for (std::size_t k = 1; k < curve.size(); ++k)
    CHECK(curve[k].success_rate >= curve[k - 1].success_rate);
  CHECK(curve.back().success_rate == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("build_curve validates its inputs") {
  CHECK_THROWS_AS(build_curve({}, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_curve({std::optional<int>{1}}, -1), std::invalid_argument);
}

TEST_CASE("solve_operation reads the first success event") {
  ige::EventLog log;
  CHECK_FALSE(solve_operation(log).has_value());
  log.push_back({2, "state_select", "0", "", false});
  log.push_back({7, "success", "4", "", false});
  log.push_back({9, "success", "5", "", false});
  CHECK(solve_operation(log) == 7);
}
