#include "tfa/holder.hpp"

#include <cmath>
#include <stdexcept>

#include "tfa/rng.hpp"

namespace tfa {

namespace {

std::vector<double> fill(int dy, double v) { return std::vector<double>(static_cast<std::size_t>(dy), v); }

}  // namespace

std::vector<HolderTarget> holder_catalog(double alpha, double K, int dx, int dy) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("holder_catalog: alpha must be in (0,1]");
  if (K <= 0.0) throw std::invalid_argument("holder_catalog: K must be positive");
  std::vector<HolderTarget> out;

  out.push_back({"const-zero", alpha, K, dx, dy,
                 [dy](const std::vector<double>&) { return fill(dy, 0.0); }});

  out.push_back({"const-half-k", alpha, K, dx, dy,
                 [dy, K](const std::vector<double>&) { return fill(dy, 0.5 * K); }});

  // Every component K*|x_1 - 1/2|^alpha. Component seminorm is exactly K
  // since | |a|^alpha - |b|^alpha | <= |a - b|^alpha for alpha in (0,1].
  out.push_back({"bump", alpha, K, dx, dy,
                 [dy, K, alpha](const std::vector<double>& x) {
                   return fill(dy, K * std::pow(std::fabs(x[0] - 0.5), alpha));
                 }});

  // Separable product of per-coordinate bumps, scaled so the component
  // seminorm stays <= K: each factor is bounded by 2^-alpha and is
  // alpha-Holder(1), so the product is alpha-Holder(dx * 2^{-alpha(dx-1)}).
  {
    double c_prod = dx * std::pow(2.0, -alpha * (dx - 1));
    double scale = K / c_prod;
    out.push_back({"prod-bump", alpha, K, dx, dy,
                   [dy, scale, alpha, dx](const std::vector<double>& x) {
                     double p = 1.0;
                     for (int j = 0; j < dx; ++j) p *= std::pow(std::fabs(x[static_cast<std::size_t>(j)] - 0.5), alpha);
                     return fill(dy, scale * p);
                   }});
  }
  return out;
}

std::vector<HolderTarget> holder_catalog(double alpha, double K, int d0) {
  return holder_catalog(alpha, K, d0, d0);
}

HolderTarget holder_by_id(const std::string& id, double alpha, double K, int dx, int dy) {
  for (HolderTarget& t : holder_catalog(alpha, K, dx, dy))
    if (t.id == id) return t;
  throw std::invalid_argument("holder_by_id: unknown catalog id '" + id + "'");
}

HolderTarget holder_scalar_bump(double alpha, double K, int dx) {
  return holder_by_id("bump", alpha, K, dx, 1);
}

HolderTarget holder_scalar_constant(double c, double alpha, double K, int dx) {
  if (std::fabs(c) > K) throw std::invalid_argument("holder_scalar_constant: |c| must be <= K");
  return {"const", alpha, K, dx, 1, [c](const std::vector<double>&) { return std::vector<double>{c}; }};
}

HolderCheck check_holder_smoothness(const HolderTarget& f, std::uint64_t n_pairs, std::uint64_t seed) {
  Rng rng = derive_rng(seed, "holder-smoothness");
  HolderCheck chk;
  chk.pairs = n_pairs;
  const double c_bound = std::sqrt(static_cast<double>(f.dy)) * f.K;
  std::vector<double> x(static_cast<std::size_t>(f.dx)), y(static_cast<std::size_t>(f.dx));
  for (std::uint64_t p = 0; p < n_pairs; ++p) {
    for (double& v : x) v = rng.uniform();
    for (double& v : y) v = rng.uniform();
    std::vector<double> fx = f(x);
    std::vector<double> fy = f(y);
    double dxy = 0.0, dfx = 0.0;
    for (int j = 0; j < f.dx; ++j) {
      double t = x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)];
      dxy += t * t;
    }
    for (int k = 0; k < f.dy; ++k) {
      double t = fx[static_cast<std::size_t>(k)] - fy[static_cast<std::size_t>(k)];
      dfx += t * t;
      chk.sup_abs = std::max(chk.sup_abs, std::fabs(fx[static_cast<std::size_t>(k)]));
    }
    dxy = std::sqrt(dxy);
    dfx = std::sqrt(dfx);
    if (dxy == 0.0) continue;
    double rhs = c_bound * std::pow(dxy, f.alpha);
    double ratio = dfx / rhs;
    chk.worst_ratio = std::max(chk.worst_ratio, ratio);
    if (dfx > rhs * (1.0 + 1e-12)) ++chk.violations;
  }
  if (chk.sup_abs > f.K * (1.0 + 1e-12)) ++chk.violations;
  return chk;
}

}  // namespace tfa
