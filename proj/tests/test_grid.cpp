#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tfa/grid.hpp"

using namespace tfa;

TEST_CASE("parameter selection worked example") {
  // alpha=0.5, eps=0.7, K=1, d0=2
  ParamSelection s = select_parameters(0.7, 0.5, 1.0, 1, 2);
  CHECK(s.delta_max == doctest::Approx(0.0433103).epsilon(1e-4));
  CHECK(s.c2 == doctest::Approx(0.2474874).epsilon(1e-6));
  CHECK(s.delta_star_max == doctest::Approx(0.0044215).epsilon(1e-3));
  // The end-to-end cap binds well below the quantization cap here.
  CHECK(s.c3 < s.delta_max);
  CHECK(s.delta_star_binding == s.delta_star_max_c3);
  CHECK(s.delta > 0.0);
  CHECK(s.delta_star > 0.0);
  CHECK(s.delta < s.c3);
  CHECK(s.M == static_cast<int>(std::floor(1.0 / (s.delta + s.delta_star))));
}

TEST_CASE("d0 > 2 alpha is required") {
  CHECK_THROWS_WITH_AS(select_parameters(0.5, 1.0, 1.0, 1, 2), doctest::Contains("d0 > 2*alpha"),
                       std::invalid_argument);
  CHECK_NOTHROW(select_parameters(0.5, 0.99, 1.0, 1, 2));
}

TEST_CASE("chosen pair stays feasible across epsilons") {
  for (double eps : {0.05, 0.1, 0.2, 0.5, 0.7}) {
    ParamSelection s = select_parameters(eps, 0.5, 1.0, 1, 2);
    CHECK(s.delta > 0.0);
    CHECK(s.delta_star > 0.0);
    CHECK(s.delta + s.delta_star < 1.0);
    CHECK(s.delta < std::min(s.c2, s.c3));
    CHECK(s.delta_star < (s.c2 - s.delta) * s.delta / 2.0);
    CHECK(s.delta_star < (s.c3 - s.delta) * s.delta / 2.0);
    CHECK(s.M >= 1);
  }
}

TEST_CASE("grid example: delta=0.2, delta_star=0.1") {
  GridSpec g = build_grid(0.2, 0.1, 1, 2);
  CHECK(g.M == 3);
  CHECK(g.point0(0) == doctest::Approx(0.0));
  CHECK(g.point0(1) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(g.point0(2) == doctest::Approx(0.6).epsilon(1e-14));

  // membership: [[0.05, 0.35]] sits in the cube of [[0, 0.3]]
  Mat x = Mat::from_rows({{0.05, 0.35}});
  std::int64_t flat = -1;
  REQUIRE(g.cube_index_of(x, &flat));
  Mat corner = g.grid_matrix(flat);
  CHECK(corner(0, 0) == doctest::Approx(0.0));
  CHECK(corner(0, 1) == doctest::Approx(0.3).epsilon(1e-14));

  // complement measure (1 - M delta)^{d0} = 0.16
  CHECK(g.complement_measure() == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("M^{d0} enumeration and positional encoding") {
  GridSpec g = build_grid(0.4, 0.1, 1, 2);
  CHECK(g.M == 2);
  CHECK(g.total_points() == 4);
  Mat gp = g.grid_matrix_pos(3);  // levels (1, 1)
  CHECK(gp(0, 0) == doctest::Approx(1.5));
  CHECK(gp(0, 1) == doctest::Approx(2.5));
  Mat e = g.positional_encoding();
  CHECK(e(0, 0) == 1.0);
  CHECK(e(0, 1) == 2.0);
}

TEST_CASE("grid input validation") {
  CHECK_THROWS_AS(build_grid(0.0, 0.1, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.6, 0.5, 1, 2), std::invalid_argument);
}

TEST_CASE("cube membership honours closed boundaries") {
  GridSpec g = build_grid(0.4, 0.1, 1, 1);
  CHECK(g.locate_level(0.0) == 0);
  CHECK(g.locate_level(0.4) == 0);      // right edge belongs to the cube
  CHECK(g.locate_level(0.45) == -1);    // separation gap
  CHECK(g.locate_level(0.5) == 1);
  CHECK(g.locate_level(0.9) == 1);
  CHECK(g.locate_level(0.95) == -1);
}

TEST_CASE("stratified samplers land in their strata") {
  GridSpec g = build_grid(0.4, 0.1, 2, 2);
  Rng rng(321);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t flat = -1;
    Mat xc = g.sample_in_cubes(rng, &flat);
    std::int64_t check = -1;
    REQUIRE(g.cube_index_of(xc, &check));
    CHECK(check == flat);
  }
  for (int i = 0; i < 2000; ++i) {
    Mat xg = g.sample_in_gap(rng);
    std::int64_t check = -1;
    CHECK_FALSE(g.cube_index_of(xg, &check));
    for (double v : xg.data) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("quantize a constant target") {
  GridSpec g = build_grid(0.2, 0.1, 1, 2);
  ReshapePlan plan(1, 2);
  HolderTarget t = holder_by_id("const-half-k", 0.5, 1.0, 2, 2);
  PiecewiseConstantFn f = quantize_target(t, g, plan);
  CHECK(f.table.size() == 9);
  for (const Mat& y : f.table)
    for (double v : y.data) CHECK(v == 0.5);
  // inside a cube the value is the table entry; outside it is zero
  Mat inside = Mat::from_rows({{0.05, 0.35}});
  CHECK(f.eval(inside)(0, 0) == 0.5);
  Mat outside = Mat::from_rows({{0.25, 0.35}});
  CHECK(f.eval(outside)(0, 0) == 0.0);
}

TEST_CASE("within-cube quantization error obeys the smoothness bound") {
  // sup over one cube of ||f(X) - f(G)||_F <= sqrt(d0) K (sqrt(d0) delta)^alpha
  const double alpha = 0.5, K = 1.0;
  GridSpec g = build_grid(0.2, 0.05, 1, 2);
  ReshapePlan plan(1, 2);
  HolderTarget t = holder_by_id("bump", alpha, K, 2, 2);
  PiecewiseConstantFn f = quantize_target(t, g, plan);
  const double d0 = 2.0;
  const double bound = std::sqrt(d0) * K * std::pow(std::sqrt(d0) * g.delta, alpha);
  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    std::int64_t flat = -1;
    Mat x = g.sample_in_cubes(rng, &flat);
    std::vector<double> fx = t(flatten(plan, x));
    const Mat& y = f.table[static_cast<std::size_t>(flat)];
    double err = 0.0;
    for (int k = 0; k < 2; ++k) {
      double dd = fx[static_cast<std::size_t>(k)] - y.data[static_cast<std::size_t>(k)];
      err += dd * dd;
    }
    worst = std::max(worst, std::sqrt(err));
  }
  CHECK(worst <= bound * (1.0 + 1e-12));
}

TEST_CASE("monte carlo piecewise error stays under the split bound") {
  // ||f - f_delta||_2 <= c1 (sqrt(d0) delta)^alpha + (1 - M delta)^{d0/2} sqrt(d0) K
  const double alpha = 0.5, K = 1.0;
  GridSpec g = build_grid(0.2, 0.05, 1, 2);
  ReshapePlan plan(1, 2);
  HolderTarget t = holder_by_id("bump", alpha, K, 2, 2);
  PiecewiseConstantFn f = quantize_target(t, g, plan);
  const double d0 = 2.0;
  const double bound = std::sqrt(d0) * K * std::pow(std::sqrt(d0) * g.delta, alpha) +
                       std::pow(1.0 - g.M * g.delta, d0 / 2.0) * std::sqrt(d0) * K;
  Rng rng(123);
  double acc = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    Mat x(1, 2);
    for (double& v : x.data) v = rng.uniform();
    std::vector<double> fx = t(flatten(plan, x));
    Mat fd = f.eval(x);
    for (int k = 0; k < 2; ++k) {
      double dd = fx[static_cast<std::size_t>(k)] - fd.data[static_cast<std::size_t>(k)];
      acc += dd * dd;
    }
  }
  double mc = std::sqrt(acc / n);
  CHECK(mc <= bound);
}

TEST_CASE("cube projections keep the separation margin") {
  GridSpec g = build_grid(0.2, 0.1, 1, 2);
  for (int a = 0; a < g.M; ++a)
    for (int b = a + 1; b < g.M; ++b) {
      double gap = g.point0(b) - (g.point0(a) + g.delta);
      CHECK(gap >= g.delta_star * (1.0 - 1e-12));
    }
}
