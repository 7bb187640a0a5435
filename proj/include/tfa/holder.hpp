#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tfa {

// A concrete member of the Holder class H^alpha_{dx,dy}([0,1]^dx, K), with its
// exact smoothness constants attached so tests can check them.
struct HolderTarget {
  std::string id;
  double alpha = 1.0;
  double K = 1.0;
  int dx = 1;
  int dy = 1;
  std::function<std::vector<double>(const std::vector<double>&)> eval;

  std::vector<double> operator()(const std::vector<double>& x) const { return eval(x); }
};

// Result of the sampled smoothness net over random pairs:
//   ||f(x) - f(y)||_2 <= sqrt(dy) * K * ||x - y||_2^alpha  and sup |f_k| <= K.
struct HolderCheck {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  double worst_ratio = 0.0;  // max of lhs / rhs over sampled pairs
  double sup_abs = 0.0;

  bool ok() const { return violations == 0; }
};

// Catalog members addressable by string id:
//   "const-zero"     f == 0
//   "const-half-k"   f == K/2 per component
//   "bump"           f_k(x) = K * |x_1 - 1/2|^alpha for every k
//   "prod-bump"      scaled separable product of per-coordinate bumps
std::vector<HolderTarget> holder_catalog(double alpha, double K, int dx, int dy);

// Same catalog with dy = dx.
std::vector<HolderTarget> holder_catalog(double alpha, double K, int d0);

HolderTarget holder_by_id(const std::string& id, double alpha, double K, int dx, int dy);

// Scalar-output bump used by the regression demo: f(x) = K * |x_1 - 1/2|^alpha.
HolderTarget holder_scalar_bump(double alpha, double K, int dx);
HolderTarget holder_scalar_constant(double c, double alpha, double K, int dx);

HolderCheck check_holder_smoothness(const HolderTarget& f, std::uint64_t n_pairs, std::uint64_t seed);

}  // namespace tfa
