#include "tfa/widen.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace tfa {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Applies one segment with an n-channel replication: channel c processes the
// strided unit subset {c, c+n, ...} on its own copy, then the channels are
// aggregated: (I_d ... I_d) X_tilde - (n-1) X, evaluated as X + sum of the
// per-channel deltas. Units touch disjoint inputs, so exactly one channel
// moves any given entry and the delta form keeps snapped grid entries
// bit-exact through the aggregation.
Mat run_channels(const Mat& x, int n, std::int64_t n_units,
                 const std::function<void(std::int64_t, Mat*)>& apply_unit) {
  if (n == 1) {
    Mat y = x;
    for (std::int64_t u = 0; u < n_units; ++u) apply_unit(u, &y);
    return y;
  }
  Mat acc = x;
  for (int c = 0; c < n; ++c) {
    Mat chan = x;
    for (std::int64_t u = c; u < n_units; u += n) apply_unit(u, &chan);
    for (std::size_t t = 0; t < acc.data.size(); ++t) {
      double delta = chan.data[t] - x.data[t];
      if (delta != 0.0) acc.data[t] += delta;
    }
  }
  return acc;
}

}  // namespace

Mat WideNetwork::forward(const Mat& X) const {
  const TransformerNetwork& net = *base;
  const GridSpec& g = net.grid;

  Mat xp(g.d, g.L);
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.L; ++j) xp(i, j) = X(i, j) + static_cast<double>(j + 1);

  // Quantizer segment: one ramp layer per unit.
  const std::int64_t n_ramps = static_cast<std::int64_t>(net.quantizer.layers.size());
  Mat q = run_channels(xp, n, n_ramps, [&](std::int64_t u, Mat* m) {
    const RampLayer& rl = net.quantizer.layers[static_cast<std::size_t>(u)];
    double t = (*m)(rl.i, rl.j) - rl.b;
    (*m)(rl.i, rl.j) += rl.displacement(t);
  });

  Mat ids = contextual_forward(net.context, q);

  // Value segment: one subunit (two layers) per unit, then the cleanup layer.
  const std::int64_t owner = value_owner_of(net.value, ids);
  const std::int64_t n_sub = net.value.n_subunits();
  Mat out = run_channels(ids, n, n_sub, [&](std::int64_t u, Mat* m) {
    std::int64_t seq = u / net.grid.L;
    int col = static_cast<int>(u % net.grid.L);
    apply_value_subunit(net.value, seq, col, m, owner);
  });
  apply_value_extra(net.value, &out);
  return out;
}

WideNetwork widen_by_factor(const TransformerNetwork& net, int n) {
  if (n < 1) throw std::invalid_argument("widen_by_factor: n must be >= 1");
  WideNetwork w;
  w.n = n;
  w.base = &net;
  const std::int64_t quant_units = static_cast<std::int64_t>(net.quantizer.layers.size());
  const std::int64_t sub_units = net.value.n_subunits();
  w.depth_quant = ceil_div(quant_units, n);
  w.depth_value = 2 * ceil_div(sub_units, n);
  w.d_prime = w.depth_quant + w.depth_value + 3;
  w.w_prime = static_cast<std::int64_t>(4) * net.grid.d * n;
  return w;
}

std::int64_t wide_min_depth(const TransformerNetwork&) { return 6; }

WideNetwork widen(const TransformerNetwork& net, std::int64_t target_depth) {
  if (target_depth < wide_min_depth(net))
    throw std::invalid_argument("widen: target depth below the structural minimum (6)");
  const std::int64_t quant_units = static_cast<std::int64_t>(net.quantizer.layers.size());
  const std::int64_t sub_units = net.value.n_subunits();
  std::int64_t max_units = std::max(quant_units, sub_units);
  for (int n = 1; n <= max_units; ++n) {
    WideNetwork w = widen_by_factor(net, n);
    if (w.d_prime <= target_depth) return w;
  }
  WideNetwork w = widen_by_factor(net, static_cast<int>(max_units));
  if (w.d_prime > target_depth)
    throw std::invalid_argument("widen: target depth below the structural minimum for this network");
  return w;
}

}  // namespace tfa
