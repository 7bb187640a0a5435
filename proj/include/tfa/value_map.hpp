#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tfa/context.hpp"
#include "tfa/grid.hpp"
#include "tfa/scalar.hpp"
#include "tfa/seq.hpp"

namespace tfa {

// Piecewise gadgets used by the value mapping, parameterized by the plateau
// half-width gamma1/(2 sqrt(d)), ramp width gamma2/(2 sqrt(d)) and the label
// magnitude. The printed construction uses label = sqrt(d) r.
double sigma_zeta1(double t, double gamma1, double gamma2, double label, int d);
double sigma_zeta2(double t, double gamma2);
double sigma_zeta3(double t, double gamma2, double label);

struct ValueMapParams {
  // gamma budget, log domain (the doubles may underflow to zero).
  double log_gamma1 = 0.0;
  double log_gamma2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  double r = 0.0;      // contextual id norm bound
  double K = 0.0;      // target sup bound
  double shift = 0.0;  // r + K, the anchored-column offset
  // Label endowed by sigma_zeta1. The printed sqrt(d) r label lets anchored
  // columns re-trigger later subunits when (sqrt(d)-1) r < 2K (always at
  // d = 1); raising it to sqrt(d) (r + 2K + 1) restores one-shot anchoring
  // for every d while keeping the gadget shapes unchanged.
  double label = 0.0;
  double label_printed = 0.0;  // sqrt(d) r, kept for reference

  int d = 0;
  int L = 0;
  std::int64_t n_anchors = 0;  // L * M^{d0}
};

struct ValueModule {
  ValueMapParams params;
  GridSpec grid;
  std::vector<Mat> anchors;  // flat sequence index -> contextual id matrix
  std::vector<Mat> targets;  // flat sequence index -> Y_G

  // Exact-match lookups built from the anchor doubles.
  std::unordered_map<std::string, std::int64_t> matrix_lookup;
  // column key -> (flat sequence, column); ambiguous keys are dropped since
  // a real input column equals such an anchor only on a null set.
  std::unordered_map<std::string, std::pair<std::int64_t, int>> column_lookup;

  std::int64_t layer_count() const { return 2 * n_subunits() + 1; }
  std::int64_t n_subunits() const { return params.n_anchors; }
};

// Builds the value mapping from the contextual ids, the quantized targets and
// the separation certificate. gamma1, gamma2 default to gamma_emp/2 and
// gamma_emp/4; explicit log-domain overrides must satisfy
// gamma1 + gamma2 < gamma_emp.
ValueModule build_value_mapper(const ContextualIdTable& ids, const PiecewiseConstantFn& targets,
                               const SeparationCert& cert, double K,
                               double log_gamma1_override = std::numeric_limits<double>::quiet_NaN(),
                               double log_gamma2_override = std::numeric_limits<double>::quiet_NaN());

// Forward through the 2 L M^{d0} subunit layers plus the cleanup layer.
// Columns exactly at an anchor map to the target column; all other columns
// pass through (the gamma widths are below any other gap in the input).
Mat value_forward(const ValueModule& m, const Mat& xbar);

// The cleanup gate: anchored columns carry the + (r+K) shift, so their column
// sum clears d*r while pristine columns stay at least d*step below it.
bool extra_gate_fires(double column_sum, const ValueMapParams& p);

// Single-subunit structural application (used by the depth-width transform
// and the instrumented interpreter): applies subunit (seq, col) in place.
// owner_seq resolves bit-level anchor collisions: when the input is the
// contextual image of grid sequence `owner_seq`, only that sequence's own
// subunits fire (their true ids differ from colliding anchors by a certified
// positive gap below double resolution). Pass -1 for non-grid inputs.
void apply_value_subunit(const ValueModule& m, std::int64_t seq, int col, Mat* x,
                         std::int64_t owner_seq);

// Whole-matrix owner lookup (flat sequence index, or -1).
std::int64_t value_owner_of(const ValueModule& m, const Mat& xbar);
// The cleanup layer alone.
void apply_value_extra(const ValueModule& m, Mat* x);

std::string matrix_key(const Mat& m);
std::string column_key(const Mat& m, int col);

// Layer-by-layer materialization as Transformer blocks. Requires a scalar
// type whose exponent range covers gamma2 (BigFloat at desk scale; double
// only for synthetic gamma budgets). The anchor constants must be computed
// at the same precision as the forward pass that will consume the blocks,
// otherwise the plateau never sees an exact match; pass them explicitly.
template <class S>
std::vector<Block<S>> value_blocks(const ValueModule& m, const std::vector<SeqMat<S>>& anchors) {
  using std::exp;
  if (anchors.size() != m.anchors.size())
    throw std::invalid_argument("value_blocks: anchor table size mismatch");
  const int d = m.params.d;
  const double sd = std::sqrt(static_cast<double>(d));
  const S g1 = exp(S(m.params.log_gamma1));
  const S g2 = exp(S(m.params.log_gamma2));
  if (g2 == S(0))
    throw std::runtime_error("value_blocks: gamma2 underflows this scalar type; use extended precision");
  const S label = S(m.params.label);
  const S scale = S(2.0) * S(sd) * label / g2;   // sigma_zeta1 slope
  const S half1 = g1 / (S(2.0) * S(sd));         // plateau half-width
  const S half12 = (g1 + g2) / (S(2.0) * S(sd)); // plateau + ramp half-width

  std::vector<Block<S>> blocks;
  blocks.reserve(static_cast<std::size_t>(m.layer_count()));
  for (std::int64_t seq = 0; seq < static_cast<std::int64_t>(m.anchors.size()); ++seq)
    for (int col = 0; col < m.params.L; ++col) {
      const SeqMat<S>& anchor = anchors[static_cast<std::size_t>(seq)];
      const Mat& target = m.targets[static_cast<std::size_t>(seq)];

      // FF(seq, col, 1): 4-ReLU plateau per row, anchored at this id column.
      Block<S> b1(d);
      {
        FFGroup<S> g;
        g.w1 = Dense<S>(4 * d, d);
        g.w2 = Dense<S>(d, 4 * d);
        g.b1.assign(static_cast<std::size_t>(4 * d), S(0));
        for (int rho = 0; rho < d; ++rho) {
          const S a = anchor(rho, col);
          const S off[4] = {half12, half1, -half1, -half12};
          const S sgn[4] = {S(1), S(-1), S(-1), S(1)};
          for (int t = 0; t < 4; ++t) {
            g.w1(4 * rho + t, rho) = S(1);
            g.b1[static_cast<std::size_t>(4 * rho + t)] = off[t] - a;
            g.w2(rho, 4 * rho + t) = sgn[t] * scale;
          }
        }
        b1.ff.push_back(std::move(g));
      }
      blocks.push_back(std::move(b1));

      // FF(seq, col, 2): the trigger adds the payload to the fully labeled
      // column; sigma_zeta3 strips every label.
      Block<S> b2(d);
      {
        FFGroup<S> trig;
        trig.w1 = Dense<S>(2, d);
        trig.w2 = Dense<S>(d, 2);
        trig.b1.assign(2, S(0));
        const S thr = S(static_cast<double>(d)) * label;
        for (int c0 = 0; c0 < d; ++c0) {
          trig.w1(0, c0) = S(1);
          trig.w1(1, c0) = S(1);
        }
        trig.b1[0] = -thr;
        trig.b1[1] = -thr - g2;
        for (int rho = 0; rho < d; ++rho) {
          S payload = S(target(rho, col)) + S(m.params.shift) - anchor(rho, col);
          trig.w2(rho, 0) = payload / g2;
          trig.w2(rho, 1) = -payload / g2;
        }
        b2.ff.push_back(std::move(trig));

        FFGroup<S> strip;
        strip.w1 = Dense<S>(2 * d, d);
        strip.w2 = Dense<S>(d, 2 * d);
        strip.b1.assign(static_cast<std::size_t>(2 * d), S(0));
        for (int rho = 0; rho < d; ++rho) {
          strip.w1(2 * rho, rho) = S(1);
          strip.w1(2 * rho + 1, rho) = S(1);
          strip.b1[static_cast<std::size_t>(2 * rho)] = -label + g2;
          strip.b1[static_cast<std::size_t>(2 * rho + 1)] = -label;
          strip.w2(rho, 2 * rho) = -label / g2;
          strip.w2(rho, 2 * rho + 1) = label / g2;
        }
        b2.ff.push_back(std::move(strip));
      }
      blocks.push_back(std::move(b2));
    }

  // Cleanup layer: subtract the (r+K) shift from anchored columns.
  Block<S> extra(d);
  {
    FFGroup<S> gate;
    gate.w1 = Dense<S>(2, d);
    gate.w2 = Dense<S>(d, 2);
    gate.b1.assign(2, S(0));
    const S thr = S(static_cast<double>(d) * m.params.r);
    for (int c0 = 0; c0 < d; ++c0) {
      gate.w1(0, c0) = S(1);
      gate.w1(1, c0) = S(1);
    }
    gate.b1[0] = -thr + g2;
    gate.b1[1] = -thr;
    for (int rho = 0; rho < d; ++rho) {
      gate.w2(rho, 0) = -S(m.params.shift) / g2;
      gate.w2(rho, 1) = S(m.params.shift) / g2;
    }
    extra.ff.push_back(std::move(gate));
  }
  blocks.push_back(std::move(extra));
  return blocks;
}

}  // namespace tfa
