#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfa/network.hpp"

namespace tfa {

// Operation taxonomy: exponentials, arithmetic (+ - * /), comparison jumps,
// and 0/1 outputs.
struct OpCounts {
  std::int64_t exps = 0;
  std::int64_t arithmetic = 0;
  std::int64_t jumps = 0;
  std::int64_t outputs = 0;

  std::int64_t total() const { return exps + arithmetic + jumps + outputs; }

  OpCounts& operator+=(const OpCounts& o) {
    exps += o.exps;
    arithmetic += o.arithmetic;
    jumps += o.jumps;
    outputs += o.outputs;
    return *this;
  }
};

struct PartCount {
  std::string part;
  std::int64_t ops = 0;
  std::int64_t params = 0;
};

struct CountReport {
  int d = 0;
  int L = 0;
  int M = 0;
  std::vector<PartCount> per_part;
  std::int64_t t = 0;      // total operations
  std::int64_t omega = 0;  // total parameters
  OpCounts taxonomy;
};

// Closed-form per-part rows and totals:
//   t     = (25dL+6d+5L) L M^{dL} + 13 d^2 L^2 M + 8 d^2 L + 4 d L^2 + 2 L^2
//           + 5 L M - 2 d L - L + 17
//   omega = 2 d L M^{dL} + 4 d^2 + M + 10
CountReport count_closed_form(int d, int L, int M);

// Executes a forward pass while tallying operations per the documented
// per-layer schedules (ramp layers: 10dL arithmetic + 3dL jumps each; value
// subunits: 13dL+4d and 12dL+5L+2d with their jump counts; attention counted
// from its actual dense loops). The tally is input independent.
CountReport count_instrumented(const TransformerNetwork& net, const Mat& X);

// t^2 * omega * (omega + 19 log2(9 omega)).
double vc_upper_bound(double t, double omega);

// One row of a complexity sweep driven by epsilon.
struct SweepPoint {
  double epsilon = 0.0;
  std::int64_t D = 0;
  std::int64_t t = 0;
  std::int64_t omega = 0;
  double vc_bound = 0.0;
};

std::vector<SweepPoint> complexity_sweep(double alpha, double K, int d, int L,
                                         const std::vector<double>& epsilons, double headroom = 0.9);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tfa
