#include "tfa/context.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "tfa/rng.hpp"

namespace tfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> project(const std::vector<double>& v, const Mat& X) {
  std::vector<double> s(static_cast<std::size_t>(X.cols), 0.0);
  for (int j = 0; j < X.cols; ++j) {
    double acc = 0.0;
    for (int i = 0; i < X.rows; ++i) acc += v[static_cast<std::size_t>(i)] * X(i, j);
    s[static_cast<std::size_t>(j)] = acc;
  }
  return s;
}

// Integer token key inside one grid: column index plus the per-row levels.
std::int64_t token_key(const GridSpec& g, std::int64_t flat, int col) {
  std::int64_t key = col;
  for (int t = 0; t < g.d0(); ++t) {
    int k = static_cast<int>(flat % g.M);
    flat /= g.M;
    if (t / g.d == col) key = key * g.M + k;
  }
  return key;
}

}  // namespace

std::vector<std::vector<double>> grid_vocabulary(const GridSpec& grid) {
  std::int64_t per_col = 1;
  for (int i = 0; i < grid.d; ++i) {
    if (per_col > (1 << 22) / grid.M) throw std::runtime_error("grid_vocabulary: M^d too large");
    per_col *= grid.M;
  }
  std::vector<std::vector<double>> vocab;
  vocab.reserve(static_cast<std::size_t>(per_col) * grid.L);
  for (int j = 0; j < grid.L; ++j)
    for (std::int64_t c = 0; c < per_col; ++c) {
      std::vector<double> tok(static_cast<std::size_t>(grid.d));
      std::int64_t rem = c;
      for (int i = 0; i < grid.d; ++i) {
        tok[static_cast<std::size_t>(i)] = grid.point_pos(j, static_cast<int>(rem % grid.M));
        rem /= grid.M;
      }
      vocab.push_back(std::move(tok));
    }
  return vocab;
}

bool check_projection_sandwich(const std::vector<double>& v, const std::vector<std::vector<double>>& vocab,
                               std::int64_t n_formula, int d) {
  // Pairs over vocab plus the origin; the origin pair reduces to |v^T t|.
  const double lower_c = 1.0 / (std::pow(static_cast<double>(n_formula) + 1.0, 2.0) * std::sqrt(static_cast<double>(d)));
  const std::size_t n = vocab.size();
  if (d == 1) return true;  // |v| = 1, so |v^T (a-b)| = ||a-b|| exactly
  if (n * n > (std::size_t{1} << 25))
    throw std::runtime_error("check_projection_sandwich: vocabulary too large for exhaustive check");
  auto pair_ok = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, nrm = 0.0;
    for (int i = 0; i < d; ++i) {
      double diff = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
      dot += v[static_cast<std::size_t>(i)] * diff;
      nrm += diff * diff;
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return true;
    double ad = std::fabs(dot);
    return ad >= lower_c * nrm && ad <= nrm * (1.0 + 1e-12);
  };
  const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    if (!pair_ok(vocab[a], origin)) return false;
    for (std::size_t b = a + 1; b < n; ++b)
      if (!pair_ok(vocab[a], vocab[b])) return false;
  }
  return true;
}

ContextWeights build_context_layer(const GridSpec& grid, std::uint64_t seed, double margin_nats,
                                   std::uint64_t max_draws) {
  if (grid.L < 2) throw std::invalid_argument("build_context_layer: needs L >= 2");
  ContextWeights w;
  w.d = grid.d;
  w.L = grid.L;
  w.r_min = std::sqrt(static_cast<double>(grid.d));
  w.r_max = std::sqrt(static_cast<double>(grid.d)) * (grid.L + 1);
  w.beta = std::sqrt(static_cast<double>(grid.d)) * grid.step();
  w.vocab_formula = static_cast<std::int64_t>(grid.L) * grid.total_points();
  const double delta0 = 2.0 * std::log(static_cast<double>(grid.L)) + 3.0;
  w.uu = std::pow(static_cast<double>(w.vocab_formula) + 1.0, 4.0) * grid.d * delta0 /
         (w.beta * w.r_min);
  w.w_o_scale = w.beta / (4.0 * w.r_max);

  const std::vector<std::vector<double>> vocab = grid_vocabulary(grid);
  Rng rng = derive_rng(seed, "context-direction");

  auto margins = [&](const std::vector<double>& v, double* min_abs, double* min_gap) {
    std::vector<double> proj(vocab.size());
    *min_abs = kInf;
    for (std::size_t a = 0; a < vocab.size(); ++a) {
      double p = 0.0;
      for (int i = 0; i < grid.d; ++i) p += v[static_cast<std::size_t>(i)] * vocab[a][static_cast<std::size_t>(i)];
      proj[a] = p;
      *min_abs = std::min(*min_abs, std::fabs(p));
    }
    std::sort(proj.begin(), proj.end());
    *min_gap = kInf;
    for (std::size_t a = 1; a < proj.size(); ++a) {
      double g = proj[a] - proj[a - 1];
      if (g > 0.0) *min_gap = std::min(*min_gap, g);
    }
  };

  for (std::uint64_t draw = 0; draw < max_draws; ++draw) {
    std::vector<double> v(static_cast<std::size_t>(grid.d));
    double norm = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    for (double& x : v) x /= norm;

    if (!check_projection_sandwich(v, vocab, w.vocab_formula, grid.d)) continue;
    double min_abs = 0.0, min_gap = 0.0;
    margins(v, &min_abs, &min_gap);
    // Margin keeps every softmax correction term below exp(-margin_nats),
    // which pins the double-precision ids to their lattice + argmax form.
    if (w.uu * min_abs * min_gap < margin_nats) continue;
    w.v = std::move(v);
    return w;
  }
  throw std::runtime_error("build_context_layer: separation direction not found (retry with new seed)");
}

double boltz(const std::vector<double>& a) {
  double mx = -kInf;
  for (double x : a) mx = std::max(mx, x);
  double denom = 0.0, num = 0.0;
  for (double x : a) denom += std::exp(x - mx);
  for (double x : a) num += x * std::exp(x - mx);
  return num / denom;
}

Mat contextual_forward(const ContextWeights& w, const Mat& X, const Precision& prec) {
  if (X.rows != w.d) throw std::invalid_argument("contextual_forward: shape mismatch");
  if (!all_finite(X)) throw std::invalid_argument("contextual_forward: non-finite input");

  if (prec.is_extended()) {
    set_working_precision(prec.mantissa_bits);
    SeqMat<BigFloat> xb(X.rows, X.cols);
    for (std::size_t t = 0; t < X.data.size(); ++t) xb.data[t] = BigFloat(X.data[t]);
    SeqMat<BigFloat> yb = contextual_forward_big(w, xb);
    Mat y(X.rows, X.cols);
    for (std::size_t t = 0; t < y.data.size(); ++t) y.data[t] = to_double(yb.data[t]);
    return y;
  }

  const int L = X.cols;
  std::vector<double> s = project(w.v, X);
  double max_abs_score = 0.0;
  for (int a = 0; a < L; ++a)
    for (int j = 0; j < L; ++j) max_abs_score = std::max(max_abs_score, std::fabs(w.uu * s[a] * s[j]));
  if (!prec.log_space && max_abs_score > 700.0)
    throw std::runtime_error(
        "contextual_forward: attention scores exceed the double exp range; "
        "use extended precision or log-space softmax");

  Mat out = X;
  for (int j = 0; j < L; ++j) {
    // Column j scores: c * s_a * s_j, softmax over a with max subtraction.
    double mx = -kInf;
    for (int a = 0; a < L; ++a) mx = std::max(mx, w.uu * s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(j)]);
    double denom = 0.0, mix = 0.0;
    for (int a = 0; a < L; ++a) {
      double e = std::exp(w.uu * s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(j)] - mx);
      denom += e;
      mix += s[static_cast<std::size_t>(a)] * e;
    }
    out(0, j) += w.w_o_scale * (mix / denom);
  }
  return out;
}

SeqMat<BigFloat> contextual_forward_big(const ContextWeights& w, const SeqMat<BigFloat>& X) {
  const int L = X.cols;
  std::vector<BigFloat> s(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j) {
    BigFloat acc(0);
    for (int i = 0; i < X.rows; ++i) acc += BigFloat(w.v[static_cast<std::size_t>(i)]) * X(i, j);
    s[static_cast<std::size_t>(j)] = acc;
  }
  SeqMat<BigFloat> out = X;
  const BigFloat c(w.uu);
  for (int j = 0; j < L; ++j) {
    BigFloat mx = c * s[0] * s[static_cast<std::size_t>(j)];
    for (int a = 1; a < L; ++a) mx = std::max(mx, c * s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(j)]);
    BigFloat denom(0), mix(0);
    for (int a = 0; a < L; ++a) {
      BigFloat e = exp(c * s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(j)] - mx);
      denom += e;
      mix += s[static_cast<std::size_t>(a)] * e;
    }
    out(0, j) += BigFloat(w.w_o_scale) * (mix / denom);
  }
  return out;
}

PairSep attention_mix_gap(const std::vector<double>& s, const std::vector<double>& sp,
                          double s_query, double c_scale) {
  const double cs = c_scale * s_query;
  // Fold numerator terms by their exact exponent key s_a + s'_b. Shared
  // tokens cancel coefficient-exactly because the keys are IEEE-identical.
  std::map<double, double> num;    // key -> sum of (s_a - s'_b)
  std::map<double, double> den;    // key -> count
  for (double a : s)
    for (double b : sp) {
      num[a + b] += a - b;
      den[a + b] += 1.0;
    }
  double num_key = -kInf;
  for (const auto& [key, coef] : num)
    if (coef != 0.0 && (num_key == -kInf || cs * key > cs * num_key)) num_key = key;
  if (num_key == -kInf) return PairSep{0, -kInf};  // identical mixes

  double r = 0.0, rbound = 0.0;
  for (const auto& [key, coef] : num) {
    if (coef == 0.0) continue;
    double e = std::exp(cs * (key - num_key));
    r += coef * e;
    rbound += std::fabs(coef) * e;
  }
  if (std::fabs(r) < 1e-9 * rbound)
    throw std::runtime_error("attention_mix_gap: sign not certifiable at double precision");

  double den_key = -kInf;
  for (const auto& [key, cnt] : den)
    if (den_key == -kInf || cs * key > cs * den_key) den_key = key;
  double rd = 0.0;
  for (const auto& [key, cnt] : den) rd += cnt * std::exp(cs * (key - den_key));

  PairSep sep;
  sep.sign = r > 0.0 ? +1 : -1;
  sep.log_abs = cs * (num_key - den_key) + std::log(std::fabs(r)) - std::log(rd);
  return sep;
}

SeparationCert verify_contextual_ids(const ContextWeights& w, const GridSpec& grid,
                                     ContextualIdTable* table_out) {
  SeparationCert cert;
  cert.r_min = w.r_min;
  cert.r_max = w.r_max;
  cert.beta = w.beta;
  cert.r = w.r_max + w.beta / 4.0;
  cert.delta0 = 2.0 * std::log(static_cast<double>(grid.L)) + 3.0;
  cert.vocab_size = w.vocab_formula;
  const double nv1 = static_cast<double>(w.vocab_formula) + 1.0;
  cert.kappa = std::pow(nv1, 4.0) * grid.d * cert.delta0 * w.r_max * w.r_max / (w.beta * w.r_min);

  {
    // Two algebraic routes to log gamma; they must agree.
    const double log_delta1 = 2.0 * std::log(std::log(static_cast<double>(grid.L))) - 2.0 * cert.kappa;
    cert.log_gamma_theory = 2.0 * std::log(w.beta) + std::log(w.r_min) + log_delta1 -
                            (std::log(4.0) + 4.0 * std::log(nv1) + std::log(static_cast<double>(grid.d)) +
                             std::log(cert.delta0) + 2.0 * std::log(w.r_max));
    const double kappa2 = std::pow(nv1, 4.0) * 2.0 * grid.d * cert.delta0 *
                          std::pow(static_cast<double>(grid.L) + 1.0, 2.0) / grid.step();
    cert.log_gamma_theory_closed =
        2.0 * std::log(grid.step()) + 2.0 * std::log(std::log(static_cast<double>(grid.L))) -
        (std::log(4.0) + 0.5 * std::log(static_cast<double>(grid.d)) + std::log(cert.delta0) +
         2.0 * std::log(static_cast<double>(grid.L) + 1.0) + 4.0 * std::log(nv1)) -
        kappa2;
  }

  const std::vector<std::vector<double>> vocab = grid_vocabulary(grid);
  cert.vocab_distinct = static_cast<std::int64_t>(vocab.size());
  if (!check_projection_sandwich(w.v, vocab, w.vocab_formula, grid.d))
    throw std::runtime_error("verify_contextual_ids: direction fails the projection sandwich");

  {
    double min_abs = kInf, min_gap = kInf;
    std::vector<double> proj(vocab.size());
    for (std::size_t a = 0; a < vocab.size(); ++a) {
      double p = 0.0;
      for (int i = 0; i < grid.d; ++i) p += w.v[static_cast<std::size_t>(i)] * vocab[a][static_cast<std::size_t>(i)];
      proj[a] = p;
      min_abs = std::min(min_abs, std::fabs(p));
    }
    std::sort(proj.begin(), proj.end());
    for (std::size_t a = 1; a < proj.size(); ++a) {
      double g = proj[a] - proj[a - 1];
      if (g > 0.0) min_gap = std::min(min_gap, g);
    }
    cert.separation_margin_nats = w.uu * min_abs * min_gap;
  }

  const std::int64_t n_seq = grid.total_points();
  const int L = grid.L;
  const int d = grid.d;

  ContextualIdTable table;
  table.grid = grid;
  table.ids.reserve(static_cast<std::size_t>(n_seq));
  table.projs.reserve(static_cast<std::size_t>(n_seq));
  std::vector<std::int64_t> tok_keys(static_cast<std::size_t>(n_seq) * L);
  for (std::int64_t i = 0; i < n_seq; ++i) {
    Mat g = grid.grid_matrix_pos(i);
    Mat id = contextual_forward(w, g);
    for (int j = 0; j < L; ++j) {
      cert.max_id_norm = std::max(cert.max_id_norm, col_norm2_d(id, j));
      double shift = 0.0;
      for (int rr = 0; rr < d; ++rr) {
        double h = id(rr, j) - g(rr, j);
        shift += h * h;
      }
      cert.max_head_shift = std::max(cert.max_head_shift, std::sqrt(shift));
      tok_keys[static_cast<std::size_t>(i) * L + j] = token_key(grid, i, j);
    }
    table.projs.push_back(project(w.v, g));
    table.ids.push_back(std::move(id));
  }

  double log_min = kInf;
  double min_distinct = kInf;
  for (std::int64_t i = 0; i < n_seq; ++i)
    for (int k = 0; k < L; ++k)
      for (std::int64_t j = i; j < n_seq; ++j)
        for (int l = (j == i) ? k + 1 : 0; l < L; ++l) {
          if (tok_keys[static_cast<std::size_t>(i) * L + k] == tok_keys[static_cast<std::size_t>(j) * L + l]) {
            // Same token, different context: only the head contribution
            // differs; resolve it in the log domain.
            PairSep sep = attention_mix_gap(table.projs[static_cast<std::size_t>(i)],
                                            table.projs[static_cast<std::size_t>(j)],
                                            table.projs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                            w.uu);
            if (sep.sign == 0)
              throw std::runtime_error("verify_contextual_ids: contextual collision (shared token)");
            log_min = std::min(log_min, std::log(w.w_o_scale) + sep.log_abs);
          } else {
            double dist2 = 0.0;
            for (int rr = 0; rr < d; ++rr) {
              double t = table.ids[static_cast<std::size_t>(i)](rr, k) - table.ids[static_cast<std::size_t>(j)](rr, l);
              dist2 += t * t;
            }
            double dist = std::sqrt(dist2);
            if (dist == 0.0)
              throw std::runtime_error("verify_contextual_ids: contextual collision (distinct tokens)");
            min_distinct = std::min(min_distinct, dist);
            log_min = std::min(log_min, std::log(dist));
          }
        }

  cert.all_distinct = true;
  cert.log_gamma_emp = log_min;
  cert.gamma_emp = std::exp(log_min);  // may underflow to zero
  cert.min_distinct_token_dist = min_distinct;

  if (table_out) *table_out = std::move(table);
  return cert;
}

double bruteforce_log_min_distance(const ContextWeights& w, const GridSpec& grid,
                                   double log_gamma_emp_hint) {
  // Subtraction-only resolution: one spread plus slack.
  unsigned bits = bits_for_separation(-log_gamma_emp_hint, 1.1);
  set_working_precision(bits);

  const std::int64_t n_seq = grid.total_points();
  const int L = grid.L;
  std::vector<SeqMat<BigFloat>> ids;
  ids.reserve(static_cast<std::size_t>(n_seq));
  for (std::int64_t i = 0; i < n_seq; ++i) {
    Mat g = grid.grid_matrix_pos(i);
    SeqMat<BigFloat> gb(g.rows, g.cols);
    for (std::size_t t = 0; t < g.data.size(); ++t) gb.data[t] = BigFloat(g.data[t]);
    ids.push_back(contextual_forward_big(w, gb));
  }
  BigFloat best(0);
  bool first = true;
  for (std::int64_t i = 0; i < n_seq; ++i)
    for (int k = 0; k < L; ++k)
      for (std::int64_t j = i; j < n_seq; ++j)
        for (int l = (j == i) ? k + 1 : 0; l < L; ++l) {
          BigFloat dist2(0);
          for (int rr = 0; rr < grid.d; ++rr) {
            BigFloat t = ids[static_cast<std::size_t>(i)](rr, k) - ids[static_cast<std::size_t>(j)](rr, l);
            dist2 += t * t;
          }
          if (dist2 == 0) throw std::runtime_error("bruteforce_log_min_distance: duplicate ids");
          if (first || dist2 < best) {
            best = dist2;
            first = false;
          }
        }
  return to_double(BigFloat(log(best) / 2));
}

}  // namespace tfa
