#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tfa/error_mc.hpp"
#include "tfa/network.hpp"
#include "tfa/rng.hpp"

using namespace tfa;

TEST_CASE("manual build hits the block-count formula") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.2, 0.05, 1, 2);
  CHECK(net.grid.M == 4);
  CHECK(net.block_count() == 74);  // 2*4 + 2*2*16 + 2
  CHECK(block_count_formula(1, 2, 4) == 74);
}

TEST_CASE("stage-labelled failures") {
  HolderTarget t = holder_by_id("bump", 1.0, 1.0, 2, 2);  // alpha = 1, d0 = 2
  CHECK_THROWS_WITH_AS(build_approximator(t, 0.5, 1, 2), doctest::Contains("select-parameters"),
                       std::runtime_error);
  HolderTarget ok = holder_by_id("bump", 0.5, 1.0, 2, 2);
  CHECK_THROWS_AS(build_approximator(ok, 0.5, 2, 1), std::invalid_argument);  // L < 2
}

TEST_CASE("constant target is reproduced on every cube sample") {
  HolderTarget t = holder_by_id("const-half-k", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.4, 0.1, 1, 2);
  Rng rng = derive_rng(3, "net-const");
  for (int s = 0; s < 500; ++s) {
    Mat x = net.grid.sample_in_cubes(rng);
    std::vector<double> y = net.apply(flatten(net.plan, x));
    CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("end-to-end grid exactness through reshape") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.4, 0.1, 1, 2);
  PiecewiseConstantFn fd = quantize_target(t, net.grid, net.plan);
  for (std::int64_t f = 0; f < net.grid.total_points(); ++f) {
    Mat g = net.grid.grid_matrix(f);
    std::vector<double> got = net.apply(flatten(net.plan, g));
    std::vector<double> want = flatten(net.plan, fd.table[static_cast<std::size_t>(f)]);
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::fabs(got[k] - want[k]) <= 1e-10);
  }
}

TEST_CASE("full layer stack in extended precision matches the structural forward") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.4, 0.1, 1, 2);
  set_working_precision(bits_for_separation(-net.cert.log_gamma_emp));
  std::vector<Block<BigFloat>> blocks = net.blocks<BigFloat>();
  // d0*M ramp blocks, one attention block, 2LM^{d0}+1 value blocks.
  CHECK(static_cast<std::int64_t>(blocks.size()) == net.block_count());

  Rng rng = derive_rng(5, "net-layerwise");
  Mat e = net.grid.positional_encoding();
  for (int s = 0; s < 20; ++s) {
    Mat x = net.grid.sample_in_cubes(rng);
    Mat fast = net.forward(x);
    SeqMat<BigFloat> xb(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < x.cols; ++j) xb(i, j) = BigFloat(x(i, j)) + BigFloat(e(i, j));
    SeqMat<BigFloat> slow = forward_blocks(blocks, xb);
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < x.cols; ++j)
        CHECK(std::fabs(to_double(slow(i, j)) - fast(i, j)) <= 1e-9);
  }
}

TEST_CASE("epsilon-driven build meets its error target") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator(t, 0.7, 1, 2);
  REQUIRE(net.selection.has_value());
  CHECK(net.grid.M >= 2);
  L2ErrorEstimate est = estimate_l2_error(net, t, 40000, 11);
  CHECK(est.err_total_upper95 < 0.7);
  // restricted-to-cubes error stays under the smoothness bound
  const double d0 = 2.0;
  const double bound = std::sqrt(d0) * 1.0 * std::pow(std::sqrt(d0) * net.grid.delta, 0.5);
  CHECK(est.err_on_cubes <= bound + 3.0 * est.ci95_cubes);
}

TEST_CASE("on cubes the network equals the piecewise target exactly") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.2, 0.05, 1, 2);
  PiecewiseConstantFn fd = quantize_target(t, net.grid, net.plan);
  ReshapePlan plan = net.plan;
  VectorFn ref = [&](const std::vector<double>& x) { return flatten(plan, fd.eval(reshape(plan, x))); };
  L2ErrorEstimate est = estimate_l2_error(net, ref, 20000, 17);
  CHECK(est.err_on_cubes <= 1e-12);
}

TEST_CASE("total error of a constant target is controlled by the gap measure") {
  HolderTarget t = holder_by_id("const-half-k", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.4, 0.05, 1, 2);
  L2ErrorEstimate est = estimate_l2_error(net, t, 40000, 23);
  CHECK(est.err_on_cubes <= 1e-12);
  const double d0 = 2.0;
  const double gap_bound = std::pow(1.0 - net.grid.M * net.grid.delta, d0 / 2.0) * 2.0 *
                           std::sqrt(d0) * (4.0 * d0 + 1.0);
  CHECK(est.err_total <= gap_bound);
  CHECK(est.err_total > 0.0);
}

TEST_CASE("shrinking delta does not increase the cube-restricted error") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.32, 0.16, 0.08}) {
    TransformerNetwork net = build_approximator_manual(t, delta, delta / 4.0, 1, 2);
    L2ErrorEstimate est = estimate_l2_error(net, t, 30000, 31);
    CHECK(est.err_on_cubes <= prev + 3.0 * est.ci95_cubes);
    prev = est.err_on_cubes;
  }
}

TEST_CASE("build report fields are consistent") {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  TransformerNetwork net = build_approximator_manual(t, 0.4, 0.1, 1, 2);
  CHECK(net.cert.all_distinct);
  CHECK(net.value.params.n_anchors == 8);
  CHECK(net.block_count() == 2 * 2 + 2 * 2 * 4 + 2);
}
