#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "tfa/holder.hpp"
#include "tfa/reshape.hpp"
#include "tfa/rng.hpp"

using namespace tfa;

TEST_CASE("column-major reshape example") {
  ReshapePlan plan(2, 2);
  Mat m = reshape(plan, std::vector<double>{1, 2, 3, 4});
  CHECK(m(0, 0) == 1);
  CHECK(m(1, 0) == 2);
  CHECK(m(0, 1) == 3);
  CHECK(m(1, 1) == 4);
  // slot k=3 (1-based) lands at row 1, column 2 (1-based)
  CHECK(plan.row_of(2) == 0);
  CHECK(plan.col_of(2) == 1);
}

TEST_CASE("reshape identity at d0=1") {
  ReshapePlan plan(1, 1);
  Mat m = reshape(plan, std::vector<double>{7.0});
  CHECK(m(0, 0) == 7.0);
  CHECK(flatten(plan, m)[0] == 7.0);
}

TEST_CASE("flatten inverts reshape, bitwise") {
  ReshapePlan plan(3, 4);
  CHECK(flatten(plan, reshape(plan, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})) ==
        std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(12);
    for (double& v : x) v = rng.uniform(-10.0, 10.0);
    CHECK(flatten(plan, reshape(plan, x)) == x);
  }
}

TEST_CASE("index maps cover every cell exactly once") {
  for (auto [d, L] : {std::pair{2, 3}, std::pair{4, 1}, std::pair{1, 5}, std::pair{3, 3}}) {
    ReshapePlan plan(d, L);
    std::set<std::pair<int, int>> cells;
    for (int k = 0; k < plan.d0(); ++k) cells.emplace(plan.row_of(k), plan.col_of(k));
    CHECK(static_cast<int>(cells.size()) == d * L);
  }
}

TEST_CASE("shape errors") {
  ReshapePlan plan(2, 2);
  CHECK_THROWS_AS(reshape(plan, std::vector<double>{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(flatten(plan, Mat(3, 2)), std::invalid_argument);
}

TEST_CASE("holder catalog members pass their own smoothness check") {
  for (const HolderTarget& t : holder_catalog(0.5, 1.0, 2)) {
    HolderCheck chk = check_holder_smoothness(t, 20000, 2024);
    INFO(t.id, " worst ratio ", chk.worst_ratio);
    CHECK(chk.ok());
    CHECK(chk.sup_abs <= t.K * (1.0 + 1e-12));
  }
}

TEST_CASE("constant target is trivially smooth") {
  HolderTarget t = holder_by_id("const-zero", 0.7, 2.0, 3, 3);
  HolderCheck chk = check_holder_smoothness(t, 5000, 5);
  CHECK(chk.ok());
  CHECK(chk.worst_ratio == 0.0);
}

TEST_CASE("bump with alpha=1 is 1-Lipschitz") {
  HolderTarget t = holder_by_id("bump", 1.0, 1.0, 1, 1);
  Rng rng(17);
  for (int i = 0; i < 10000; ++i) {
    double x = rng.uniform(), y = rng.uniform();
    double fx = t({x})[0], fy = t({y})[0];
    CHECK(std::fabs(fx - fy) <= std::fabs(x - y) * (1.0 + 1e-12));
  }
}

TEST_CASE("sqrt bump sampled ratio stays below one") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 1, 1);
  HolderCheck chk = check_holder_smoothness(t, 100000, 99);
  CHECK(chk.violations == 0);
  CHECK(chk.worst_ratio <= 1.0 + 1e-12);
}

TEST_CASE("unknown catalog id raises") {
  CHECK_THROWS_AS(holder_by_id("nope", 0.5, 1.0, 2, 2), std::invalid_argument);
}
