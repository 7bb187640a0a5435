#pragma once

#include <cstdint>
#include <optional>
#include <type_traits>
#include <vector>

#include "tfa/context.hpp"
#include "tfa/grid.hpp"
#include "tfa/holder.hpp"
#include "tfa/quantizer.hpp"
#include "tfa/reshape.hpp"
#include "tfa/value_map.hpp"

namespace tfa {

struct BuildOptions {
  std::uint64_t seed = 1;
  double headroom = 0.9;         // fraction of the strict (delta, delta_star) caps
  double margin_nats = 2000.0;   // direction-search softmax collapse margin
  bool merge_quantizer = false;  // one wide quantization layer instead of d0*M
};

// Everything that depends on the grid but not on the output table: the
// quantizer, the contextual layer and its certificate. Several value
// mappings (different Y tables) can be assembled on one backbone.
struct NetworkBackbone {
  ReshapePlan plan;
  GridSpec grid;
  std::optional<ParamSelection> selection;
  QuantizeModule quantizer;
  ContextWeights context;
  SeparationCert cert;
  ContextualIdTable ids;
};

NetworkBackbone build_backbone(const GridSpec& grid, std::optional<ParamSelection> sel,
                               const BuildOptions& opts);

// The assembled approximator f_T = value o context o quantize o (X + E),
// together with the reshape plan and build byproducts.
struct TransformerNetwork {
  ReshapePlan plan;
  GridSpec grid;
  std::optional<ParamSelection> selection;  // present for epsilon-driven builds
  QuantizeModule quantizer;
  ContextWeights context;
  SeparationCert cert;
  ValueModule value;
  double target_K = 0.0;

  // d0*M + 2*L*M^{d0} + 2 for the canonical sequential build.
  std::int64_t block_count() const {
    return static_cast<std::int64_t>(grid.d0()) * grid.M + 2 * value.n_subunits() + 2;
  }

  // f_T on a sequence input in [0,1]^{d x L}.
  Mat forward(const Mat& X) const;
  // Vector-to-vector evaluation: flatten o f_T o reshape.
  std::vector<double> apply(const std::vector<double>& x) const;
  // First-coordinate output embedding for scalar targets.
  double apply_scalar(const std::vector<double>& x) const;

  // Full layer materialization (quantizer ramps, attention, value gadgets).
  // Value anchors are recomputed at the requested precision so the plateau
  // matches are exact under the same forward arithmetic.
  template <class S>
  std::vector<Block<S>> blocks() const {
    std::vector<Block<S>> all = quantizer_blocks<S>(quantizer);
    Block<S> attn(grid.d);
    attn.heads.push_back(context.template head<S>());
    all.push_back(std::move(attn));
    std::vector<SeqMat<S>> anchors_s;
    anchors_s.reserve(value.anchors.size());
    for (std::int64_t f = 0; f < static_cast<std::int64_t>(value.anchors.size()); ++f) {
      Mat g = grid.grid_matrix_pos(f);
      if constexpr (std::is_same_v<S, double>) {
        anchors_s.push_back(contextual_forward(context, g));
      } else {
        SeqMat<S> gs(g.rows, g.cols);
        for (std::size_t t = 0; t < g.data.size(); ++t) gs.data[t] = S(g.data[t]);
        anchors_s.push_back(contextual_forward_big(context, gs));
      }
    }
    for (Block<S>& b : value_blocks<S>(value, anchors_s)) all.push_back(std::move(b));
    return all;
  }
};

// Expected sequential block count for given grid dimensions.
std::int64_t block_count_formula(int d, int L, int M);

TransformerNetwork assemble_network(const NetworkBackbone& backbone,
                                    const PiecewiseConstantFn& fdelta, double K_bound);

// Full pipeline: parameter selection, grid, target quantization, module
// construction and the separation certificate. Throws with the failing stage
// named in the message.
TransformerNetwork build_approximator(const HolderTarget& target, double epsilon, int d, int L,
                                      const BuildOptions& opts = {});

// Same with (delta, delta_star) pinned by hand.
TransformerNetwork build_approximator_manual(const HolderTarget& target, double delta,
                                             double delta_star, int d, int L,
                                             const BuildOptions& opts = {});

// Layer-by-layer forward through materialized blocks (differential oracle
// against the structural forward()).
template <class S>
SeqMat<S> forward_blocks(const std::vector<Block<S>>& blocks, const SeqMat<S>& x_with_e) {
  SeqMat<S> y = x_with_e;
  for (const Block<S>& b : blocks) y = block_forward(b, y);
  return y;
}

}  // namespace tfa
