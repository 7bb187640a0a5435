#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tfa/network.hpp"
#include "tfa/quantizer.hpp"
#include "tfa/rng.hpp"

using namespace tfa;

namespace {

GridSpec desk_grid_1x2() { return build_grid(0.2, 0.1, 1, 2); }  // M = 3

const RampLayer& layer_of(const QuantizeModule& q, int i, int j, int k) {
  return q.layers[(static_cast<std::size_t>(i) * q.grid.L + j) * q.grid.M + k];
}

}  // namespace

TEST_CASE("layer count and row locality of weights") {
  GridSpec g = build_grid(0.4, 0.1, 2, 3);
  QuantizeModule q = build_quantizer(g);
  CHECK(q.layer_count() == 2 * 3 * 2);
  for (const RampLayer& rl : q.layers) {
    CHECK(rl.b == doctest::Approx(g.point_pos(rl.j, rl.k)));
    CHECK(rl.d2 == doctest::Approx(g.delta).epsilon(1e-12));
    CHECK(rl.d3 == doctest::Approx(g.step()).epsilon(1e-12));
  }
}

TEST_CASE("single ramp layer hand evaluation") {
  QuantizeModule q = build_quantizer(desk_grid_1x2());
  // layer with shift 1 + 0.3 = 1.3 (row 0, column 0, level 1)
  const RampLayer& rl = layer_of(q, 0, 0, 1);
  REQUIRE(rl.b == doctest::Approx(1.3));
  // t = 0.05 inside the cell: snap down to the corner
  CHECK(1.35 + rl.displacement(1.35 - rl.b) == doctest::Approx(1.3).epsilon(1e-15));
  // exactly at the corner: untouched
  CHECK(rl.displacement(1.3 - rl.b) == 0.0);
  // far beyond the cell (t >= step): all three terms cancel
  const RampLayer& rl0 = layer_of(q, 0, 0, 0);
  CHECK(rl0.displacement(1.55 - rl0.b) == 0.0);
  // in the separation gap: the closing ramp moves the point down
  double t_gap = 1.55 - rl.b;  // 0.25 in [delta, delta+delta_star]
  CHECK(1.55 + rl.displacement(t_gap) == doctest::Approx(1.45).epsilon(1e-12));
}

TEST_CASE("grid points are fixed points, snapped bit-exactly") {
  GridSpec g = build_grid(0.4, 0.1, 1, 2);  // M = 2
  QuantizeModule q = build_quantizer(g);
  for (std::int64_t f = 0; f < g.total_points(); ++f) {
    Mat gp = g.grid_matrix(f);
    Mat out = quantize_forward(q, gp);
    Mat want = g.grid_matrix_pos(f);
    CHECK(out.data == want.data);
  }
}

TEST_CASE("cube samples map exactly to G + E") {
  for (auto [d, L] : {std::pair{1, 2}, std::pair{2, 2}}) {
    GridSpec g = build_grid(0.4, 0.1, d, L);
    QuantizeModule q = build_quantizer(g);
    Rng rng = derive_rng(11, "quant-cube");
    for (int s = 0; s < 1000; ++s) {
      std::int64_t flat = -1;
      Mat x = g.sample_in_cubes(rng, &flat);
      Mat out = quantize_forward(q, x);
      Mat want = g.grid_matrix_pos(flat);
      CHECK(out.data == want.data);  // bit-exact, comfortably within 1e-10
    }
  }
}

TEST_CASE("gap samples stay inside [1, L+1]") {
  GridSpec g = build_grid(0.4, 0.1, 1, 2);
  QuantizeModule q = build_quantizer(g);
  Rng rng = derive_rng(13, "quant-gap");
  for (int s = 0; s < 1000; ++s) {
    Mat x = g.sample_in_gap(rng);
    Mat out = quantize_forward(q, x);
    for (int j = 0; j < g.L; ++j) {
      CHECK(out(0, j) >= 1.0);
      CHECK(out(0, j) <= static_cast<double>(g.L) + 1.0);
    }
  }
}

TEST_CASE("out-of-domain input raises") {
  QuantizeModule q = build_quantizer(desk_grid_1x2());
  Mat x = Mat::from_rows({{1.2, 0.3}});
  CHECK_THROWS_AS(quantize_forward(q, x), std::invalid_argument);
}

TEST_CASE("layer-by-layer blocks agree with the branch forward") {
  GridSpec g = build_grid(0.3, 0.08, 2, 2);
  QuantizeModule q = build_quantizer(g);
  std::vector<Block<double>> blocks = quantizer_blocks<double>(q);
  CHECK(blocks.size() == q.layers.size());
  Rng rng = derive_rng(17, "quant-diff");
  for (int s = 0; s < 200; ++s) {
    Mat x(g.d, g.L);
    for (double& v : x.data) v = rng.uniform();
    Mat fast = quantize_forward(q, x);
    Mat xp(g.d, g.L);
    for (int i = 0; i < g.d; ++i)
      for (int j = 0; j < g.L; ++j) xp(i, j) = x(i, j) + static_cast<double>(j + 1);
    Mat slow = forward_blocks(blocks, xp);
    for (std::size_t t = 0; t < fast.data.size(); ++t)
      CHECK(std::fabs(fast.data[t] - slow.data[t]) <= 1e-9);
  }
}

TEST_CASE("merged wide layer equals the deep stack") {
  GridSpec g = build_grid(0.3, 0.08, 1, 2);
  QuantizeModule deep = build_quantizer(g, false);
  QuantizeModule wide = build_quantizer(g, true);
  std::vector<Block<double>> deep_blocks = quantizer_blocks<double>(deep);
  std::vector<Block<double>> wide_blocks = quantizer_blocks<double>(wide);
  CHECK(wide_blocks.size() == 1);
  Rng rng = derive_rng(23, "quant-merge");
  for (int s = 0; s < 200; ++s) {
    Mat xp(g.d, g.L);
    for (int i = 0; i < g.d; ++i)
      for (int j = 0; j < g.L; ++j) xp(i, j) = rng.uniform() + static_cast<double>(j + 1);
    Mat a = forward_blocks(deep_blocks, xp);
    Mat b = forward_blocks(wide_blocks, xp);
    for (std::size_t t = 0; t < a.data.size(); ++t) CHECK(std::fabs(a.data[t] - b.data[t]) <= 1e-9);
  }
}

TEST_CASE("zeroing one layer only affects its cell range") {
  GridSpec g = build_grid(0.4, 0.1, 2, 2);
  QuantizeModule q = build_quantizer(g);
  QuantizeModule crippled = q;
  // disable the layer for (row 1, column 0, level 1) in place
  std::size_t removed = (static_cast<std::size_t>(1) * g.L + 0) * g.M + 1;
  crippled.layers[removed].d2 = 0.0;
  crippled.layers[removed].d3 = 0.0;

  Rng rng = derive_rng(29, "quant-local");
  for (int s = 0; s < 500; ++s) {
    std::int64_t flat = -1;
    Mat x = g.sample_in_cubes(rng, &flat);
    Mat full = quantize_forward(q, x);
    Mat part = quantize_forward(crippled, x);
    for (int i = 0; i < g.d; ++i)
      for (int j = 0; j < g.L; ++j) {
        bool owned = (i == 1 && j == 0 && g.locate_level(x(i, j)) == 1);
        if (owned)
          CHECK(part(i, j) == x(i, j) + 1.0);  // left unquantized
        else
          CHECK(part(i, j) == full(i, j));
      }
  }
}

TEST_CASE("row order does not matter on cube inputs") {
  GridSpec g = build_grid(0.4, 0.1, 2, 2);
  QuantizeModule q = build_quantizer(g);
  QuantizeModule permuted = q;
  // swap the row-0 and row-1 layer groups
  std::size_t half = q.layers.size() / 2;
  std::rotate(permuted.layers.begin(), permuted.layers.begin() + static_cast<std::ptrdiff_t>(half),
              permuted.layers.end());
  std::vector<Block<double>> a = quantizer_blocks<double>(q);
  std::vector<Block<double>> b = quantizer_blocks<double>(permuted);
  Rng rng = derive_rng(31, "quant-commute");
  for (int s = 0; s < 200; ++s) {
    Mat x = g.sample_in_cubes(rng);
    Mat xp(g.d, g.L);
    for (int i = 0; i < g.d; ++i)
      for (int j = 0; j < g.L; ++j) xp(i, j) = x(i, j) + static_cast<double>(j + 1);
    Mat ya = forward_blocks(a, xp);
    Mat yb = forward_blocks(b, xp);
    for (std::size_t t = 0; t < ya.data.size(); ++t)
      CHECK(std::fabs(ya.data[t] - yb.data[t]) <= 1e-12);
  }
}
