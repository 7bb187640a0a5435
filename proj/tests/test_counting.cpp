#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tfa/counting.hpp"
#include "tfa/rng.hpp"

using namespace tfa;

namespace {

TransformerNetwork net_for(int d, int L, int M, std::uint64_t seed) {
  // Canonical widths realizing a given per-dimension count M.
  double step = 1.0 / (static_cast<double>(M) + 0.5);
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, d * L, d * L);
  return build_approximator_manual(t, 0.75 * step, 0.25 * step, d, L, BuildOptions{seed});
}

}  // namespace

TEST_CASE("closed-form totals reproduce the printed formulas") {
  CountReport r = count_closed_form(2, 2, 2);
  CHECK(r.omega == 156);  // 2*2*2*16 + 16 + 2 + 10
  // t = (25dL+6d+5L) L M^{dL} + 13 d^2L^2 M + 8d^2L + 4dL^2 + 2L^2 + 5LM - 2dL - L + 17
  const std::int64_t expect_t =
      (25 * 4 + 6 * 2 + 5 * 2) * 2 * 16 + 13 * 4 * 4 * 2 + 8 * 4 * 2 + 4 * 2 * 4 + 2 * 4 +
      5 * 2 * 2 - 2 * 4 - 2 + 17;
  CHECK(r.t == expect_t);

  // per-part spot values
  for (const PartCount& p : r.per_part) {
    if (p.part == "contextual-attention") {
      CHECK(p.ops == 86);  // dL(8d+4L-4) + 2L^2 - L = 4*20 + 8 - 2
      CHECK(p.params == 16);  // 4 d^2
    }
    if (p.part == "quantizer-ff") CHECK(p.params == 2 + 4);
    if (p.part == "value-extra") CHECK(p.params == 2 * 4 * 16 + 6);
  }
}

TEST_CASE("small config decomposes as a hand sum") {
  CountReport r = count_closed_form(1, 2, 2);
  // positional 2; quantizer 13*4*2+5*4+3; contextual 2*(8+8-4)+8-2;
  // value rows (26+4)*2*4+7 and (24+10+2)*2*4+7; extra 2
  CHECK(r.t == 2 + 127 + 30 + 247 + 295 + 2);
  CHECK(r.omega == (2 + 4) + 4 + (2 * 2 * 4 + 6));
  CHECK(r.taxonomy.exps == 4);
  CHECK(r.taxonomy.total() == r.t);
}

TEST_CASE("instrumented tallies equal the closed form on desk configs") {
  struct Cfg {
    int d, L, M;
  };
  for (Cfg c : {Cfg{1, 2, 2}, Cfg{1, 2, 3}, Cfg{2, 2, 2}, Cfg{1, 3, 2}, Cfg{1, 2, 4}}) {
    TransformerNetwork net = net_for(c.d, c.L, c.M, 1234);
    REQUIRE(net.grid.M == c.M);
    Rng rng = derive_rng(55, "count-input");
    Mat x(c.d, c.L);
    for (double& v : x.data) v = rng.uniform();
    CountReport inst = count_instrumented(net, x);
    CountReport closed = count_closed_form(c.d, c.L, c.M);
    INFO("config d=", c.d, " L=", c.L, " M=", c.M);
    CHECK(inst.t == closed.t);
    CHECK(inst.omega == closed.omega);
    CHECK(inst.taxonomy.exps == closed.taxonomy.exps);
    CHECK(inst.taxonomy.arithmetic == closed.taxonomy.arithmetic);
    CHECK(inst.taxonomy.jumps == closed.taxonomy.jumps);
    CHECK(inst.taxonomy.outputs == closed.taxonomy.outputs);
    REQUIRE(inst.per_part.size() == closed.per_part.size());
    for (std::size_t p = 0; p < inst.per_part.size(); ++p) {
      CHECK(inst.per_part[p].ops == closed.per_part[p].ops);
      CHECK(inst.per_part[p].params == closed.per_part[p].params);
    }

    // the tally is input independent
    Mat x2(c.d, c.L);
    for (double& v : x2.data) v = rng.uniform();
    CountReport inst2 = count_instrumented(net, x2);
    CHECK(inst2.t == inst.t);
  }
}

TEST_CASE("softmax schedule: L exponentials and 2L-1 arithmetic per column") {
  // visible through the contextual row at d=1: subtract the known matmul,
  // scores, mixing and residual costs
  CountReport r = count_closed_form(1, 4, 2);
  const std::int64_t L = 4, d = 1;
  std::int64_t ctx = 0;
  for (const PartCount& p : r.per_part)
    if (p.part == "contextual-attention") ctx = p.ops;
  const std::int64_t matmuls = 4 * (d * d * L) + 4 * (d * d * L - d * L);
  const std::int64_t scores = d * L * L + (d - 1) * L * L;
  const std::int64_t mixing = d * L * L + d * (L - 1) * L;
  const std::int64_t residual = d * L;
  const std::int64_t softmax = ctx - matmuls - scores - mixing - residual;
  CHECK(softmax == L * (3 * L - 1));  // L columns, each L exps + (2L-1) arithmetic
}

TEST_CASE("vc bound evaluation and monotonicity") {
  CHECK(vc_upper_bound(100.0, 10.0) ==
        doctest::Approx(1e5 * (10.0 + 19.0 * std::log2(90.0))).epsilon(1e-12));
  CHECK(vc_upper_bound(100.0, 10.0) == doctest::Approx(1.334e7).epsilon(1e-3));
  CHECK(vc_upper_bound(5.0, 1.0) == doctest::Approx(25.0 * (1.0 + 19.0 * std::log2(9.0))).epsilon(1e-12));
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    double t = rng.uniform(1.0, 1e6);
    double om = rng.uniform(1.0, 1e6);
    CHECK(vc_upper_bound(t * 1.5, om) > vc_upper_bound(t, om));
    CHECK(vc_upper_bound(t, om * 1.5) > vc_upper_bound(t, om));
  }
}

TEST_CASE("vc bound scales like the fourth power of depth") {
  std::vector<double> eps = {0.2, 0.1, 0.05, 0.02};
  std::vector<SweepPoint> sweep = complexity_sweep(0.5, 1.0, 1, 2, eps);
  std::vector<double> logd, logvc;
  for (const SweepPoint& p : sweep) {
    logd.push_back(std::log(static_cast<double>(p.D)));
    logvc.push_back(std::log(p.vc_bound));
  }
  double slope = fit_slope(logd, logvc);
  INFO("slope = ", slope);
  CHECK(slope == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("block count follows the d0/alpha rate") {
  std::vector<double> eps = {0.2, 0.15, 0.11, 0.08};
  std::vector<double> loginv, logd;
  for (double e : eps) {
    ParamSelection sel = select_parameters(e, 0.5, 1.0, 1, 2);
    loginv.push_back(std::log(1.0 / e));
    logd.push_back(std::log(static_cast<double>(block_count_formula(1, 2, sel.M))));
  }
  double slope = fit_slope(loginv, logd);
  INFO("slope = ", slope);
  CHECK(std::fabs(slope - 4.0) <= 0.15 * 4.0);  // d0/alpha = 4
}
