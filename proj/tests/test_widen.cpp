#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tfa/rng.hpp"
#include "tfa/widen.hpp"

using namespace tfa;

namespace {

TransformerNetwork desk_net() {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  return build_approximator_manual(t, 0.2, 0.05, 1, 2);  // M = 4, 32 subunits
}

}  // namespace

TEST_CASE("factor one is the identity transform") {
  TransformerNetwork net = desk_net();
  WideNetwork w = widen_by_factor(net, 1);
  CHECK(w.d_prime == net.block_count() + 1);  // +3 overhead vs the +2 sequential tail
  CHECK(w.w_prime == 4 * net.grid.d);
  Rng rng = derive_rng(41, "widen-id");
  for (int s = 0; s < 100; ++s) {
    Mat x = net.grid.sample_in_cubes(rng);
    Mat a = net.forward(x);
    Mat b = w.forward(x);
    CHECK(a.data == b.data);  // same arithmetic, bit for bit
  }
}

TEST_CASE("widened networks agree with the sequential original") {
  TransformerNetwork net = desk_net();
  Rng rng = derive_rng(43, "widen-agree");
  for (int n : {2, 4, 8}) {
    WideNetwork w = widen_by_factor(net, n);
    for (int s = 0; s < 100; ++s) {
      Mat x = net.grid.sample_in_cubes(rng);
      Mat a = net.forward(x);
      Mat b = w.forward(x);
      for (std::size_t t = 0; t < a.data.size(); ++t)
        CHECK(std::fabs(a.data[t] - b.data[t]) <= 1e-9);
    }
    // gap inputs ride along too
    for (int s = 0; s < 50; ++s) {
      Mat x = net.grid.sample_in_gap(rng);
      Mat a = net.forward(x);
      Mat b = w.forward(x);
      for (std::size_t t = 0; t < a.data.size(); ++t)
        CHECK(std::fabs(a.data[t] - b.data[t]) <= 1e-9);
    }
  }
}

TEST_CASE("depth-width product stays within a constant factor") {
  TransformerNetwork net = desk_net();
  const double base = static_cast<double>(net.block_count()) * 4.0 * net.grid.d;
  for (int n : {1, 2, 4, 8}) {
    WideNetwork w = widen_by_factor(net, n);
    double ratio = static_cast<double>(w.d_prime * w.w_prime) / base;
    INFO("n = ", n, " ratio = ", ratio);
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 2.0);
    CHECK(w.d_prime >= 6);
    CHECK(w.w_prime >= 4 * net.grid.d);
  }
}

TEST_CASE("widen to a target depth picks the smallest feasible factor") {
  TransformerNetwork net = desk_net();
  WideNetwork w = widen(net, 40);
  CHECK(w.d_prime <= 40);
  CHECK(widen_by_factor(net, w.n - 1).d_prime > 40);
  CHECK_THROWS_AS(widen(net, 5), std::invalid_argument);
}
