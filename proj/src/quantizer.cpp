#include "tfa/quantizer.hpp"

#include <cmath>

namespace tfa {

QuantizeModule build_quantizer(const GridSpec& grid, bool merge_width) {
  QuantizeModule q;
  q.grid = grid;
  q.merge_width = merge_width;
  q.layers.reserve(static_cast<std::size_t>(grid.d) * grid.L * grid.M);
  for (int i = 0; i < grid.d; ++i)
    for (int j = 0; j < grid.L; ++j)
      for (int k = 0; k < grid.M; ++k) {
        RampLayer rl;
        rl.i = i;
        rl.j = j;
        rl.k = k;
        rl.b = grid.point_pos(j, k);
        // Cube top in positional coordinates, from the grid's own corner
        // expression so the snap target matches cube membership exactly.
        double hi0 = grid.point0(k) + grid.delta;
        double hp = hi0 + static_cast<double>(j + 1);
        rl.d2 = hp - rl.b;
        double next = (k + 1 < grid.M) ? grid.point_pos(j, k + 1)
                                       : static_cast<double>(j + 1) + static_cast<double>(grid.M) * grid.step();
        rl.d3 = next - rl.b;
        rl.m1 = rl.d3 / (rl.d3 - rl.d2);
        rl.m2 = rl.d2 / (rl.d3 - rl.d2);
        q.layers.push_back(rl);
      }
  return q;
}

Mat quantize_forward_pos(const QuantizeModule& q, const Mat& Xpos) {
  const GridSpec& g = q.grid;
  if (Xpos.rows != g.d || Xpos.cols != g.L) throw std::invalid_argument("quantize_forward: shape mismatch");
  Mat y = Xpos;
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.L; ++j) {
      double x = y(i, j);
      if (x < static_cast<double>(j + 1) - 1e-12 || x > static_cast<double>(j + 2) + 1e-12)
        throw std::invalid_argument("quantize_forward: entry outside [0,1] + positional encoding");
      // Layers for this (i, j) run k ascending; at most one ramp is active,
      // and once an entry moves it is a fixed point of the remaining layers.
      int k0 = static_cast<int>(std::floor((x - static_cast<double>(j + 1)) / g.step()));
      for (int k = std::max(0, k0 - 1); k <= std::min(g.M - 1, k0 + 1); ++k) {
        const RampLayer& rl = q.layers[(static_cast<std::size_t>(i) * g.L + j) * g.M + k];
        double t = x - rl.b;
        if (t > 0.0 && t <= rl.d2) {
          x = rl.b;  // snap to the cell corner
          break;
        }
        if (t > rl.d2 && t < rl.d3) {
          x = x + rl.m2 * (t - rl.d3);  // gap ramp
          break;
        }
      }
      y(i, j) = x;
    }
  return y;
}

Mat quantize_forward(const QuantizeModule& q, const Mat& X) {
  const GridSpec& g = q.grid;
  if (X.rows != g.d || X.cols != g.L) throw std::invalid_argument("quantize_forward: shape mismatch");
  Mat xp(g.d, g.L);
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.L; ++j) {
      double v = X(i, j);
      if (v < -1e-12 || v > 1.0 + 1e-12)
        throw std::invalid_argument("quantize_forward: input entry outside [0,1]");
      xp(i, j) = v + static_cast<double>(j + 1);
    }
  return quantize_forward_pos(q, xp);
}

}  // namespace tfa
