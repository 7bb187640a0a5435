#pragma once

#include <cstdint>
#include <vector>

#include "tfa/holder.hpp"
#include "tfa/network.hpp"

namespace tfa {

// Statistical-error bound shape, evaluated with proportionality constant 1:
//   (16K+8) (D^4 log(e K N D^-4 / mu) + 1) / N + 3 mu.
// These calculators report bound *shapes*; the hidden constants of the
// original inequalities are not certified.
struct StatBoundResult {
  double value = 0.0;
  double log_cover = 0.0;        // D^4 log(e K N D^-4 / mu)
  bool small_sample_regime = false;  // N < D^4
};

StatBoundResult statistical_bound(double D, double K, double N, double mu);

struct RateResult {
  double exponent = 0.0;  // alpha / (2 d0 + alpha)
  double D_of_N = 0.0;    // N^{d0 / (4 d0 + 2 alpha)}
  double mu_of_N = 0.0;   // D^{-2 alpha / d0}
  double rate_value = 0.0;  // N^-exp log N + N^-exp
};

RateResult excess_risk_rate(double alpha, int d0, double N);

struct RegressionSetup {
  HolderTarget target;  // dy must be 1
  std::uint64_t N = 0;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
};

struct RegressionRunReport {
  std::uint64_t N = 0;
  double epsilon = 0.0;
  std::int64_t D = 0;
  double empirical_excess = 0.0;  // test loss of the plug-in minus test loss of f*
  double e_app = 0.0;             // measured approximation error of the plug-in network
  double e_sta_bound = 0.0;       // Eq-shape statistical bound at mu = D^{-2 alpha/d0}
  std::uint64_t empty_cells = 0;
  std::uint64_t total_cells = 0;
  double coverage = 0.0;
  std::uint64_t gap_train_points = 0;
};

// Plug-in estimator: the constructed approximator with Y_G replaced by
// empirical cell means (empty cells fall back to zero and are counted).
// Empirical excess risk is evaluated on a held-out set drawn from the same
// distribution.
RegressionRunReport plugin_regression_demo(const RegressionSetup& setup, double epsilon, int d,
                                           int L, std::uint64_t test_n = 20000,
                                           std::uint64_t mc_samples = 20000);

}  // namespace tfa
