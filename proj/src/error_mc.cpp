#include "tfa/error_mc.hpp"

#include <cmath>
#include <stdexcept>

#include "tfa/rng.hpp"

namespace tfa {

namespace {

struct Moments {
  double mean = 0.0;
  double var_of_mean = 0.0;
};

Moments run_stratum(const TransformerNetwork& net, const VectorFn& reference, bool cubes,
                    std::uint64_t n, Rng& rng) {
  const GridSpec& g = net.grid;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    Mat X = cubes ? g.sample_in_cubes(rng) : g.sample_in_gap(rng);
    std::vector<double> x = flatten(net.plan, X);
    std::vector<double> fx = reference(x);
    std::vector<double> gx = net.apply(x);
    double e2 = 0.0;
    for (std::size_t t = 0; t < fx.size(); ++t) {
      double diff = fx[t] - gx[t];
      e2 += diff * diff;
    }
    sum += e2;
    sum2 += e2 * e2;
  }
  Moments m;
  m.mean = sum / static_cast<double>(n);
  double var = sum2 / static_cast<double>(n) - m.mean * m.mean;
  if (var < 0.0) var = 0.0;
  m.var_of_mean = var / static_cast<double>(n);
  return m;
}

double half_width_on_sqrt(double mean_sq, double ci_mean_sq) {
  // Delta method; falls back to the sqrt of the half-width near zero.
  if (mean_sq <= ci_mean_sq) return std::sqrt(ci_mean_sq);
  return 0.5 * ci_mean_sq / std::sqrt(mean_sq);
}

}  // namespace

L2ErrorEstimate estimate_l2_error(const TransformerNetwork& net, const VectorFn& reference,
                                  std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 16) throw std::invalid_argument("estimate_l2_error: too few samples");
  Rng rng_c = derive_rng(seed, "l2-cubes");
  Rng rng_g = derive_rng(seed, "l2-gap");

  const GridSpec& g = net.grid;
  const double pc = std::pow(static_cast<double>(g.M) * g.delta, static_cast<double>(g.d0()));
  const double pg = 1.0 - pc;

  const std::uint64_t n_cube = n_samples / 2;
  const std::uint64_t n_gap = n_samples - n_cube;

  Moments mc = run_stratum(net, reference, true, n_cube, rng_c);
  Moments mg{0.0, 0.0};
  if (pg > 0.0) mg = run_stratum(net, reference, false, n_gap, rng_g);

  L2ErrorEstimate est;
  est.n_samples = n_samples;
  est.cube_measure = pc;

  double total_ms = pc * mc.mean + pg * mg.mean;
  double total_var = pc * pc * mc.var_of_mean + pg * pg * mg.var_of_mean;
  double ci_ms_total = 1.96 * std::sqrt(total_var);
  double ci_ms_cubes = 1.96 * std::sqrt(mc.var_of_mean);

  est.err_on_cubes = std::sqrt(mc.mean);
  est.err_total = std::sqrt(total_ms);
  est.ci95_cubes = half_width_on_sqrt(mc.mean, ci_ms_cubes);
  est.ci95_total = half_width_on_sqrt(total_ms, ci_ms_total);
  est.err_total_upper95 = std::sqrt(total_ms + ci_ms_total);
  return est;
}

L2ErrorEstimate estimate_l2_error(const TransformerNetwork& net, const HolderTarget& target,
                                  std::uint64_t n_samples, std::uint64_t seed) {
  const int d0 = net.plan.d0();
  VectorFn ref;
  if (target.dy == d0) {
    ref = target.eval;
  } else if (target.dy == 1) {
    // Scalar targets compare on the first output coordinate; the network
    // carries zeros elsewhere by construction.
    ref = [target, d0](const std::vector<double>& x) {
      std::vector<double> y(static_cast<std::size_t>(d0), 0.0);
      y[0] = target(x)[0];
      return y;
    };
  } else {
    throw std::invalid_argument("estimate_l2_error: target output dimension must be d0 or 1");
  }
  return estimate_l2_error(net, ref, n_samples, seed);
}

}  // namespace tfa
