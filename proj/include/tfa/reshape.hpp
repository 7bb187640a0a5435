#pragma once

#include <stdexcept>
#include <vector>

#include "tfa/seq.hpp"

namespace tfa {

// Column-major reshape between R^{d0} and R^{d x L}, d0 = d*L.
// Entry k of the vector goes to (i(k), j(k)) with
//   i(k) = ((k-1) mod d) + 1,   j(k) = floor((k-1)/d) + 1   (1-based),
// and the flatten layer is the exact inverse.
struct ReshapePlan {
  int d = 1;
  int L = 1;

  ReshapePlan() = default;
  ReshapePlan(int d_, int L_) : d(d_), L(L_) {
    if (d < 1 || L < 1) throw std::invalid_argument("ReshapePlan: d, L must be >= 1");
  }

  int d0() const { return d * L; }

  // 0-based index maps: vector slot k -> (row, col).
  int row_of(int k) const { return k % d; }
  int col_of(int k) const { return k / d; }
};

template <class S>
SeqMat<S> reshape(const ReshapePlan& plan, const std::vector<S>& x) {
  if (static_cast<int>(x.size()) != plan.d0())
    throw std::invalid_argument("reshape: vector length != d*L");
  SeqMat<S> m(plan.d, plan.L);
  for (int k = 0; k < plan.d0(); ++k) m(plan.row_of(k), plan.col_of(k)) = x[static_cast<std::size_t>(k)];
  return m;
}

template <class S>
std::vector<S> flatten(const ReshapePlan& plan, const SeqMat<S>& m) {
  if (m.rows != plan.d || m.cols != plan.L) throw std::invalid_argument("flatten: shape mismatch");
  std::vector<S> x(static_cast<std::size_t>(plan.d0()));
  for (int k = 0; k < plan.d0(); ++k) x[static_cast<std::size_t>(k)] = m(plan.row_of(k), plan.col_of(k));
  return x;
}

}  // namespace tfa
