#include "tfa/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "tfa/error_mc.hpp"
#include "tfa/rng.hpp"

namespace tfa {

StatBoundResult statistical_bound(double D, double K, double N, double mu) {
  if (!(D > 0.0 && K > 0.0 && N > 0.0 && mu > 0.0))
    throw std::invalid_argument("statistical_bound: all inputs must be positive");
  StatBoundResult r;
  const double d4 = D * D * D * D;
  r.small_sample_regime = N < d4;
  r.log_cover = d4 * std::log(std::exp(1.0) * K * N / (d4 * mu));
  r.value = (16.0 * K + 8.0) * (r.log_cover + 1.0) / N + 3.0 * mu;
  return r;
}

RateResult excess_risk_rate(double alpha, int d0, double N) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("excess_risk_rate: alpha in (0,1]");
  if (d0 < 1 || N < 2.0) throw std::invalid_argument("excess_risk_rate: d0 >= 1, N >= 2");
  RateResult r;
  const double dd = static_cast<double>(d0);
  r.exponent = alpha / (2.0 * dd + alpha);
  r.D_of_N = std::pow(N, dd / (4.0 * dd + 2.0 * alpha));
  r.mu_of_N = std::pow(r.D_of_N, -2.0 * alpha / dd);
  r.rate_value = std::pow(N, -r.exponent) * std::log(N) + std::pow(N, -r.exponent);
  return r;
}

RegressionRunReport plugin_regression_demo(const RegressionSetup& setup, double epsilon, int d,
                                           int L, std::uint64_t test_n, std::uint64_t mc_samples) {
  const HolderTarget& f = setup.target;
  if (f.dy != 1) throw std::invalid_argument("plugin_regression_demo: target must be scalar");
  if (f.dx != d * L) throw std::invalid_argument("plugin_regression_demo: target dimension != d*L");

  ParamSelection sel = select_parameters(epsilon, f.alpha, f.K, d, L);
  GridSpec grid = grid_from_selection(sel, d, L);
  ReshapePlan plan(d, L);

  BuildOptions opts;
  opts.seed = derive_rng(setup.seed, "plugin-backbone").next_u64();
  NetworkBackbone backbone = build_backbone(grid, sel, opts);

  // Empirical cell means over the training draw.
  const std::int64_t n_cells = grid.total_points();
  std::vector<double> sums(static_cast<std::size_t>(n_cells), 0.0);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_cells), 0);
  Rng train_rng = derive_rng(setup.seed, "plugin-train");
  std::uint64_t gap_points = 0;
  std::vector<double> x(static_cast<std::size_t>(d * L));
  for (std::uint64_t i = 0; i < setup.N; ++i) {
    for (double& v : x) v = train_rng.uniform();
    double y = f(x)[0] + (setup.noise_sd > 0.0 ? setup.noise_sd * train_rng.normal() : 0.0);
    std::int64_t cell = 0;
    if (grid.cube_index_of(reshape(plan, x), &cell)) {
      sums[static_cast<std::size_t>(cell)] += y;
      counts[static_cast<std::size_t>(cell)] += 1;
    } else {
      ++gap_points;
    }
  }

  PiecewiseConstantFn fdelta;
  fdelta.grid = grid;
  fdelta.plan = plan;
  fdelta.table.reserve(static_cast<std::size_t>(n_cells));
  std::uint64_t empty = 0;
  double max_abs = 0.0;
  for (std::int64_t c = 0; c < n_cells; ++c) {
    Mat y = Mat::zeros(d, L);
    if (counts[static_cast<std::size_t>(c)] > 0) {
      double mean = sums[static_cast<std::size_t>(c)] / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      y(0, 0) = mean;
      max_abs = std::max(max_abs, std::fabs(mean));
    } else {
      ++empty;  // empty cell falls back to zero
    }
    fdelta.table.push_back(std::move(y));
  }

  const double k_bound = std::max(f.K, max_abs) * (1.0 + 1e-9);
  TransformerNetwork net = assemble_network(backbone, fdelta, k_bound);

  RegressionRunReport rep;
  rep.N = setup.N;
  rep.epsilon = epsilon;
  rep.D = net.block_count();
  rep.empty_cells = empty;
  rep.total_cells = static_cast<std::uint64_t>(n_cells);
  rep.coverage = 1.0 - static_cast<double>(empty) / static_cast<double>(n_cells);
  rep.gap_train_points = gap_points;

  // Held-out excess risk.
  Rng test_rng = derive_rng(setup.seed, "plugin-test");
  double loss_hat = 0.0, loss_star = 0.0;
  for (std::uint64_t i = 0; i < test_n; ++i) {
    for (double& v : x) v = test_rng.uniform();
    double ystar = f(x)[0];
    double y = ystar + (setup.noise_sd > 0.0 ? setup.noise_sd * test_rng.normal() : 0.0);
    double fhat = net.apply_scalar(x);
    loss_hat += (fhat - y) * (fhat - y);
    loss_star += (ystar - y) * (ystar - y);
  }
  rep.empirical_excess = (loss_hat - loss_star) / static_cast<double>(test_n);

  L2ErrorEstimate app = estimate_l2_error(net, f, mc_samples, derive_rng(setup.seed, "plugin-app").next_u64());
  rep.e_app = app.err_total;

  const double mu = std::pow(static_cast<double>(rep.D), -2.0 * f.alpha / static_cast<double>(d * L));
  rep.e_sta_bound = statistical_bound(static_cast<double>(rep.D), f.K, static_cast<double>(setup.N), mu).value;
  return rep;
}

}  // namespace tfa
