#include "tfa/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfa {

namespace {

[[noreturn]] void fail_stage(const char* stage, const std::exception& e) {
  throw std::runtime_error(std::string("build_approximator[") + stage + "]: " + e.what());
}

}  // namespace

std::int64_t block_count_formula(int d, int L, int M) {
  std::int64_t mpow = 1;
  for (int t = 0; t < d * L; ++t) mpow *= M;
  return static_cast<std::int64_t>(d) * L * M + 2 * L * mpow + 2;
}

NetworkBackbone build_backbone(const GridSpec& grid, std::optional<ParamSelection> sel,
                               const BuildOptions& opts) {
  NetworkBackbone b;
  b.plan = ReshapePlan(grid.d, grid.L);
  b.grid = grid;
  b.selection = sel;
  try {
    b.quantizer = build_quantizer(grid, opts.merge_quantizer);
  } catch (const std::exception& e) {
    fail_stage("quantizer", e);
  }
  try {
    b.context = build_context_layer(grid, opts.seed, opts.margin_nats);
    b.cert = verify_contextual_ids(b.context, grid, &b.ids);
  } catch (const std::exception& e) {
    fail_stage("context", e);
  }
  return b;
}

TransformerNetwork assemble_network(const NetworkBackbone& backbone,
                                    const PiecewiseConstantFn& fdelta, double K_bound) {
  TransformerNetwork net;
  net.plan = backbone.plan;
  net.grid = backbone.grid;
  net.selection = backbone.selection;
  net.quantizer = backbone.quantizer;
  net.context = backbone.context;
  net.cert = backbone.cert;
  net.target_K = K_bound;
  try {
    net.value = build_value_mapper(backbone.ids, fdelta, backbone.cert, K_bound);
  } catch (const std::exception& e) {
    fail_stage("value", e);
  }
  return net;
}

Mat TransformerNetwork::forward(const Mat& X) const {
  Mat q = quantize_forward(quantizer, X);
  Mat ids = contextual_forward(context, q);
  return value_forward(value, ids);
}

std::vector<double> TransformerNetwork::apply(const std::vector<double>& x) const {
  return flatten(plan, forward(reshape(plan, x)));
}

double TransformerNetwork::apply_scalar(const std::vector<double>& x) const { return apply(x)[0]; }

TransformerNetwork build_approximator(const HolderTarget& target, double epsilon, int d, int L,
                                      const BuildOptions& opts) {
  if (L < 2) throw std::invalid_argument("build_approximator: needs L >= 2");
  ParamSelection sel;
  try {
    sel = select_parameters(epsilon, target.alpha, target.K, d, L, opts.headroom);
  } catch (const std::exception& e) {
    fail_stage("select-parameters", e);
  }
  GridSpec grid;
  try {
    grid = grid_from_selection(sel, d, L);
  } catch (const std::exception& e) {
    fail_stage("grid", e);
  }
  NetworkBackbone backbone = build_backbone(grid, sel, opts);
  PiecewiseConstantFn fdelta;
  try {
    fdelta = quantize_target(target, grid, backbone.plan);
  } catch (const std::exception& e) {
    fail_stage("quantize-target", e);
  }
  return assemble_network(backbone, fdelta, target.K);
}

TransformerNetwork build_approximator_manual(const HolderTarget& target, double delta,
                                             double delta_star, int d, int L,
                                             const BuildOptions& opts) {
  if (L < 2) throw std::invalid_argument("build_approximator: needs L >= 2");
  GridSpec grid;
  try {
    grid = build_grid(delta, delta_star, d, L);
  } catch (const std::exception& e) {
    fail_stage("grid", e);
  }
  NetworkBackbone backbone = build_backbone(grid, std::nullopt, opts);
  PiecewiseConstantFn fdelta;
  try {
    fdelta = quantize_target(target, grid, backbone.plan);
  } catch (const std::exception& e) {
    fail_stage("quantize-target", e);
  }
  return assemble_network(backbone, fdelta, target.K);
}

}  // namespace tfa
