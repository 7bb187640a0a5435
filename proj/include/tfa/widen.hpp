#pragma once

#include <cstdint>

#include "tfa/network.hpp"

namespace tfa {

// Depth-width transform: the feed-forward segments (quantizer ramps, value
// subunit pairs) are regrouped into wide block-diagonal layers acting on a
// replicated input [X; X; ...; X], with an (I_d ... I_d) aggregation and the
// (n-1)X residual subtraction after each segment. The attention layer is
// never parallelized.
struct WideNetwork {
  int n = 1;  // replication factor / units per wide layer
  const TransformerNetwork* base = nullptr;

  std::int64_t depth_quant = 0;  // ceil(d0*M / n)
  std::int64_t depth_value = 0;  // 2 * ceil(L*M^{d0} / n)
  std::int64_t d_prime = 0;      // depth_quant + depth_value + 3
  std::int64_t w_prime = 0;      // 4 d n

  Mat forward(const Mat& X) const;
};

WideNetwork widen_by_factor(const TransformerNetwork& net, int n);

// Chooses the smallest replication factor whose depth is at most
// target_depth. target_depth below the structural minimum is an error.
WideNetwork widen(const TransformerNetwork& net, std::int64_t target_depth);

std::int64_t wide_min_depth(const TransformerNetwork& net);

}  // namespace tfa
