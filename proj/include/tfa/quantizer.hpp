#pragma once

#include <stdexcept>
#include <vector>

#include "tfa/grid.hpp"
#include "tfa/seq.hpp"

namespace tfa {

// One ramp layer (i, j, k): on row i, entries of column block j sitting in
// [b, b+d2] snap to the cell corner b, entries in the gap [b+d2, b+d3] slide
// down the closing ramp, everything else passes through.
//
//   -relu(t) + m1*relu(t - d2) - m2*relu(t - d3),   t = x - b,
//
// with m1 = d3/(d3-d2), m2 = d2/(d3-d2); d2 ~ delta and d3 ~ delta+delta_star
// are taken from the same double expressions the grid uses for cube corners,
// so cube inputs land on grid values bit-for-bit.
struct RampLayer {
  int i = 0;  // row
  int j = 0;  // column (0-based)
  int k = 0;  // quantization level
  double b = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;

  // Piecewise-branch evaluation of the ramp displacement at t.
  double displacement(double t) const {
    if (t <= 0.0 || t >= d3) return 0.0;
    if (t <= d2) return -t;
    return m2 * (t - d3);
  }
};

struct QuantizeModule {
  GridSpec grid;
  std::vector<RampLayer> layers;  // d*L*M layers, k ascending within each (i,j)
  bool merge_width = false;       // single wide layer instead of a deep stack

  int layer_count() const { return static_cast<int>(layers.size()); }
};

QuantizeModule build_quantizer(const GridSpec& grid, bool merge_width = false);

// Forward through the quantization module including the positional encoding:
// X in [0,1]^{d x L} -> roughly G + E. Exact (same doubles as
// GridSpec::point_pos) for inputs inside cubes; gap entries stay in [1, L+1].
Mat quantize_forward(const QuantizeModule& q, const Mat& X);

// The same map on an already position-encoded matrix.
Mat quantize_forward_pos(const QuantizeModule& q, const Mat& Xpos);

// Materializes the module as Transformer feed-forward blocks (3 ReLU neurons
// per ramp, or one wide layer when merge_width is set). Zero-head attention
// keeps the residual identity in front of every layer. The slopes are derived
// from (d2, d3) at the target precision: beyond the cell the three terms
// cancel to one ulp of S, which extended-precision evaluation needs to keep
// grid points pinned for the anchor plateaus downstream.
template <class S>
std::vector<Block<S>> quantizer_blocks(const QuantizeModule& q) {
  const int d = q.grid.d;
  auto make_group = [&](const RampLayer& rl) {
    FFGroup<S> g;
    g.w1 = Dense<S>(3, d);
    g.w2 = Dense<S>(d, 3);
    g.b1.assign(3, S(0));
    for (int n = 0; n < 3; ++n) g.w1(n, rl.i) = S(1);
    g.b1[0] = S(-rl.b);
    g.b1[1] = S(-(rl.b + rl.d2));
    g.b1[2] = S(-(rl.b + rl.d3));
    const S gap = S(rl.d3) - S(rl.d2);
    g.w2(rl.i, 0) = S(-1);
    g.w2(rl.i, 1) = S(rl.d3) / gap;
    g.w2(rl.i, 2) = -(S(rl.d2) / gap);
    return g;
  };

  std::vector<Block<S>> blocks;
  if (q.merge_width) {
    Block<S> blk(d);
    for (const RampLayer& rl : q.layers) blk.ff.push_back(make_group(rl));
    blocks.push_back(std::move(blk));
  } else {
    blocks.reserve(q.layers.size());
    for (const RampLayer& rl : q.layers) {
      Block<S> blk(d);
      blk.ff.push_back(make_group(rl));
      blocks.push_back(std::move(blk));
    }
  }
  return blocks;
}

}  // namespace tfa
