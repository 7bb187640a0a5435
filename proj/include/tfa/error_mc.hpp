#pragma once

#include <cstdint>
#include <functional>

#include "tfa/network.hpp"

namespace tfa {

// Stratified Monte Carlo estimate of ||f - g||_2 with g the network and f a
// reference function on [0,1]^{d0}. Samples split between the cube union and
// its complement; the complement can be tiny, so it is sampled directly
// instead of by rejection.
struct L2ErrorEstimate {
  double err_on_cubes = 0.0;   // sqrt E[ ||f-g||^2 | cubes ]
  double err_total = 0.0;      // sqrt of the stratified mean square
  double ci95_cubes = 0.0;     // half-width on err_on_cubes
  double ci95_total = 0.0;     // half-width on err_total
  double err_total_upper95 = 0.0;
  double cube_measure = 0.0;
  std::uint64_t n_samples = 0;
};

using VectorFn = std::function<std::vector<double>(const std::vector<double>&)>;

L2ErrorEstimate estimate_l2_error(const TransformerNetwork& net, const VectorFn& reference,
                                  std::uint64_t n_samples, std::uint64_t seed);

L2ErrorEstimate estimate_l2_error(const TransformerNetwork& net, const HolderTarget& target,
                                  std::uint64_t n_samples, std::uint64_t seed);

}  // namespace tfa
