#pragma once

#include <cstdint>
#include <vector>

#include "tfa/grid.hpp"
#include "tfa/scalar.hpp"
#include "tfa/seq.hpp"

namespace tfa {

// Rank-one single-head attention weights realizing the contextual mapping:
//   W_K = c e_1 v^T, W_Q = e_1 v^T, W_V = e_1 v^T, W_O = w_o_scale e_1 e_1^T,
// with v a unit direction separating the token vocabulary and
// c = (Nv+1)^4 d delta0 / (beta r_min).
struct ContextWeights {
  int d = 0;
  int L = 0;
  std::vector<double> v;
  double uu = 0.0;       // c = |u^T u'|
  double w_o_scale = 0.0;  // beta / (4 r_max) = ||W_O u''||_2
  double r_min = 0.0;
  double r_max = 0.0;
  double beta = 0.0;
  std::int64_t vocab_formula = 0;  // Nv = L * M^{d0}

  template <class S>
  AttnHead<S> head() const {
    AttnHead<S> h;
    h.w_k = Dense<S>(d, d);
    h.w_q = Dense<S>(d, d);
    h.w_v = Dense<S>(d, d);
    h.w_o = Dense<S>(d, d);
    for (int c0 = 0; c0 < d; ++c0) {
      h.w_k(0, c0) = S(uu) * S(v[static_cast<std::size_t>(c0)]);
      h.w_q(0, c0) = S(v[static_cast<std::size_t>(c0)]);
      h.w_v(0, c0) = S(v[static_cast<std::size_t>(c0)]);
    }
    h.w_o(0, 0) = S(w_o_scale);
    return h;
  }
};

// Certificate for the (r, gamma) contextual mapping over the positional grid.
// gamma values live in the log domain; the plain double gamma_emp may
// underflow to zero and is reported alongside its log.
struct SeparationCert {
  double r_min = 0.0;
  double r_max = 0.0;
  double beta = 0.0;
  double r = 0.0;        // r_max + beta/4
  double delta0 = 0.0;   // 2 ln L + 3
  double kappa = 0.0;    // (Nv+1)^4 d delta0 r_max^2 / (beta r_min)
  double log_gamma_theory = 0.0;         // component-formula route
  double log_gamma_theory_closed = 0.0;  // closed-form route (must agree)
  double log_gamma_emp = 0.0;
  double gamma_emp = 0.0;
  std::int64_t vocab_size = 0;      // formula count Nv = L * M^{d0}
  std::int64_t vocab_distinct = 0;  // actual distinct tokens in the grid
  bool all_distinct = false;
  double max_id_norm = 0.0;
  double min_distinct_token_dist = 0.0;  // min ID distance over distinct-token pairs
  double max_head_shift = 0.0;           // max ||H_{:,k}||_2 over grid inputs
  double separation_margin_nats = 0.0;   // min exponent gap driving softmax collapse
};

// All L * M^{d0} contextual ids of the positional grid plus the projections
// needed by the pairwise separation kernel.
struct ContextualIdTable {
  GridSpec grid;
  std::vector<Mat> ids;                    // flat sequence index -> id matrix
  std::vector<std::vector<double>> projs;  // v^T (G + E) per sequence
};

// Signed log-domain result of one pairwise comparison.
struct PairSep {
  int sign = 0;
  double log_abs = 0.0;
};

// Exact-exponent evaluation of the attention-mix difference between two
// sequences sharing the query token: the cross-multiplied numerator
// sum_{a,b} (s_a - s'_b) exp(c s_k (s_a + s'_b)) over its positive
// denominator, evaluated without ever forming the underflowing values.
PairSep attention_mix_gap(const std::vector<double>& s, const std::vector<double>& sp,
                          double s_query, double c_scale);

// boltz(a) = a^T softmax(a).
double boltz(const std::vector<double>& a);

// Single-head attention with residual. Standard double mode with log_space
// unset refuses scores beyond the double exp range; log-space mode uses max
// subtraction; extended mode evaluates every exponential in BigFloat at the
// requested mantissa.
Mat contextual_forward(const ContextWeights& w, const Mat& X, const Precision& prec = Precision{});
SeqMat<BigFloat> contextual_forward_big(const ContextWeights& w, const SeqMat<BigFloat>& X);

ContextWeights build_context_layer(const GridSpec& grid, std::uint64_t seed,
                                   double margin_nats = 2000.0, std::uint64_t max_draws = 1000000);

// Enumerates the positional grid, checks the Lemma-style sandwich for v,
// computes all contextual ids, certifies pairwise distinctness, and fills the
// certificate (boundedness, token separation, gamma values).
SeparationCert verify_contextual_ids(const ContextWeights& w, const GridSpec& grid,
                                     ContextualIdTable* table_out = nullptr);

// Independent oracle: recompute the ids in BigFloat with enough mantissa to
// resolve the smallest pairwise gap and return the measured log min distance.
double bruteforce_log_min_distance(const ContextWeights& w, const GridSpec& grid,
                                   double log_gamma_emp_hint);

// Sandwich bounds for a candidate direction over the actual vocabulary plus
// the origin: lower (Nv+1)^{-2} d^{-1/2} ||t - t'|| <= |v^T (t - t')| <= ||t - t'||.
bool check_projection_sandwich(const std::vector<double>& v, const std::vector<std::vector<double>>& vocab,
                               std::int64_t n_formula, int d);

std::vector<std::vector<double>> grid_vocabulary(const GridSpec& grid);

}  // namespace tfa
