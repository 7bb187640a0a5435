#pragma once

#include <cstdint>
#include <vector>

#include "tfa/holder.hpp"
#include "tfa/reshape.hpp"
#include "tfa/rng.hpp"
#include "tfa/seq.hpp"

namespace tfa {

// epsilon -> (delta, delta_star) selection. Two caps exist for delta_star:
// one from the target-vs-piecewise error split (via c2) and a tighter one
// from the end-to-end verification (via c3). Both are reported; choices take
// the binding minimum with configurable headroom below the strict bounds.
struct ParamSelection {
  double epsilon = 0.0;
  double alpha = 1.0;
  double K = 1.0;
  int d = 1;
  int L = 1;

  double delta_max = 0.0;        // cap on delta from the quantization error split
  double c2 = 0.0;               // (eps / (2 sqrt(d0) K))^(2/d0)
  double c3 = 0.0;               // (eps / (4 sqrt(d0) (4 d0 + K)))^(2/d0)
  double delta_star_max = 0.0;   // (c2 - delta_max) * delta_max / 2, may be <= 0
  double delta_star_max_c3 = 0.0;// (c3 - delta_max) * delta_max / 2, may be <= 0
  double delta_star_binding = 0.0;  // min of the two caps above

  // Feasible choice with headroom (strict inequalities need slack).
  double delta = 0.0;
  double delta_star = 0.0;
  int M = 0;

  int d0() const { return d * L; }
};

ParamSelection select_parameters(double epsilon, double alpha, double K, int d, int L,
                                 double headroom = 0.9);

// Uniform quantization grid over [0,1]^{d x L}: per-dimension points
// k*(delta+delta_star), k = 0..M-1, cube side delta, gap at least delta_star.
// Grid point doubles come from one shared expression so every module agrees
// bit-for-bit on cube corners.
struct GridSpec {
  double delta = 0.0;
  double delta_star = 0.0;
  int M = 0;
  int d = 0;
  int L = 0;

  int d0() const { return d * L; }
  double step() const { return delta + delta_star; }

  // Per-dimension grid value k*(delta+delta_star), 0 <= k < M.
  double point0(int k) const { return static_cast<double>(k) * step(); }
  // Positional counterpart for (0-based) column j: (j+1) + point0(k).
  double point_pos(int j, int k) const { return static_cast<double>(j + 1) + point0(k); }

  std::int64_t total_points() const;  // M^{d0}

  // Lexicographic enumeration: entries ordered column-major (t = j*d + i),
  // entry t quantization level is digit t of the flat index, base M, least
  // significant first.
  Mat grid_matrix(std::int64_t flat) const;      // G in [0,1]^{d x L}
  Mat grid_matrix_pos(std::int64_t flat) const;  // G + E

  Mat positional_encoding() const;  // E = 1_d [1..L]^T

  // Cube membership per entry (pre-positional value in [0,1]); closed
  // interval [g, g+delta]. Returns level k or -1.
  int locate_level(double x) const;
  // Whole-matrix membership; fills the flat cube index when X is in some cube.
  bool cube_index_of(const Mat& X, std::int64_t* flat_out) const;

  double complement_measure() const;  // (1 - M*delta)^{d0}

  // Uniform sample inside the union of cubes; returns the flat cube index.
  Mat sample_in_cubes(Rng& rng, std::int64_t* flat_out = nullptr) const;
  // Uniform sample in [0,1]^{d x L} minus the cubes.
  Mat sample_in_gap(Rng& rng) const;
};

GridSpec build_grid(double delta, double delta_star, int d, int L);
GridSpec grid_from_selection(const ParamSelection& sel, int d, int L);

// Tabulated piece-wise constant function: value Y_G on the cube of G, zero
// outside the union of cubes.
struct PiecewiseConstantFn {
  GridSpec grid;
  ReshapePlan plan;
  std::vector<Mat> table;  // flat grid index -> Y_G

  Mat eval(const Mat& X) const;
  double complement_measure() const { return grid.complement_measure(); }
};

// Builds f_delta for a target: table[G] = reshaped target value at the cube
// corner. Scalar targets (dy == 1) are embedded on the first coordinate.
PiecewiseConstantFn quantize_target(const HolderTarget& target, const GridSpec& grid,
                                    const ReshapePlan& plan);

}  // namespace tfa
