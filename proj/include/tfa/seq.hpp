#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tfa/scalar.hpp"

namespace tfa {

// Dense d x L sequence matrix: L tokens with d-dimensional embeddings.
// Row-major storage. Immutable use after construction is the norm; forward
// passes build fresh matrices.
template <class S>
struct SeqMat {
  int rows = 0;  // d
  int cols = 0;  // L
  std::vector<S> data;

  SeqMat() = default;
  SeqMat(int d, int L) : rows(d), cols(L), data(static_cast<std::size_t>(d) * L, S(0)) {
    if (d < 1 || L < 1) throw std::invalid_argument("SeqMat: dimensions must be >= 1");
  }

  static SeqMat zeros(int d, int L) { return SeqMat(d, L); }

  static SeqMat from_rows(std::initializer_list<std::initializer_list<double>> r) {
    SeqMat m(static_cast<int>(r.size()), static_cast<int>(r.begin()->size()));
    int i = 0;
    for (const auto& row : r) {
      if (static_cast<int>(row.size()) != m.cols) throw std::invalid_argument("ragged rows");
      int j = 0;
      for (double v : row) m(i, j++) = S(v);
      ++i;
    }
    return m;
  }

  S& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  bool same_shape(const SeqMat& o) const { return rows == o.rows && cols == o.cols; }

  SeqMat& operator+=(const SeqMat& o) {
    if (!same_shape(o)) throw std::invalid_argument("shape mismatch");
    for (std::size_t t = 0; t < data.size(); ++t) data[t] += o.data[t];
    return *this;
  }

  SeqMat& operator-=(const SeqMat& o) {
    if (!same_shape(o)) throw std::invalid_argument("shape mismatch");
    for (std::size_t t = 0; t < data.size(); ++t) data[t] -= o.data[t];
    return *this;
  }

  std::vector<S> col(int j) const {
    std::vector<S> c(rows);
    for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
  }
};

using Mat = SeqMat<double>;

template <class S>
bool all_finite(const SeqMat<S>& m) {
  using std::isfinite;
  for (const S& v : m.data)
    if (!isfinite(v)) return false;
  return true;
}

template <class S>
double frobenius_norm_d(const SeqMat<S>& m) {
  double s = 0;
  for (const S& v : m.data) {
    double x = to_double(v);
    s += x * x;
  }
  return std::sqrt(s);
}

template <class S>
double col_norm2_d(const SeqMat<S>& m, int j) {
  double s = 0;
  for (int i = 0; i < m.rows; ++i) {
    double x = to_double(m(i, j));
    s += x * x;
  }
  return std::sqrt(s);
}

// Plain dense weight matrix (shapes are tiny throughout).
template <class S>
struct Dense {
  int rows = 0;
  int cols = 0;
  std::vector<S> data;

  Dense() = default;
  Dense(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, S(0)) {}

  S& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

template <class S>
SeqMat<S> matmul(const Dense<S>& a, const SeqMat<S>& x) {
  if (a.cols != x.rows) throw std::invalid_argument("matmul: inner dimension mismatch");
  SeqMat<S> y(a.rows, x.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const S aik = a(i, k);
      if (aik == S(0)) continue;
      for (int j = 0; j < x.cols; ++j) y(i, j) += aik * x(k, j);
    }
  return y;
}

// Element-wise ReLU.
template <class S>
SeqMat<S> relu(const SeqMat<S>& x) {
  SeqMat<S> y = x;
  for (S& v : y.data)
    if (v < S(0)) v = S(0);
  return y;
}

// Column-wise softmax with per-column max subtraction. Shift invariance makes
// the subtraction exact on the result while keeping exponents representable.
template <class S>
SeqMat<S> softmax_columns(const SeqMat<S>& x) {
  if (!all_finite(x)) throw std::invalid_argument("softmax_columns: non-finite input");
  SeqMat<S> y(x.rows, x.cols);
  for (int j = 0; j < x.cols; ++j) {
    S mx = x(0, j);
    for (int i = 1; i < x.rows; ++i) mx = std::max(mx, x(i, j));
    S denom(0);
    using std::exp;
    for (int i = 0; i < x.rows; ++i) {
      S e = exp(x(i, j) - mx);
      y(i, j) = e;
      denom += e;
    }
    for (int i = 0; i < x.rows; ++i) y(i, j) /= denom;
  }
  return y;
}

// One softmax attention head: out contribution = W_O W_V X softmax[(W_K X)^T W_Q X].
template <class S>
struct AttnHead {
  Dense<S> w_k, w_q, w_v;  // m x d
  Dense<S> w_o;            // d x m
};

// One group of feed-forward neurons: W_2 relu(W_1 X + b_1 1_L^T).
template <class S>
struct FFGroup {
  Dense<S> w1;          // l x d
  Dense<S> w2;          // d x l
  std::vector<S> b1;    // l
};

// A full Transformer block: multi-head attention with residual, then a
// feed-forward layer with residual. Either part can be empty, which leaves
// the corresponding residual as the identity.
template <class S>
struct Block {
  int d = 0;
  std::vector<AttnHead<S>> heads;
  std::vector<FFGroup<S>> ff;
  std::vector<S> b2;  // d (one shared feed-forward output bias)

  explicit Block(int dim = 0) : d(dim), b2(static_cast<std::size_t>(std::max(dim, 0)), S(0)) {}
};

template <class S>
SeqMat<S> attn_forward(const Block<S>& blk, const SeqMat<S>& x) {
  if (blk.d != x.rows) throw std::invalid_argument("attn_forward: embedding dim mismatch");
  SeqMat<S> out = x;
  for (const AttnHead<S>& h : blk.heads) {
    SeqMat<S> kx = matmul(h.w_k, x);
    SeqMat<S> qx = matmul(h.w_q, x);
    // scores(k', j) = (W_K x_{:,k'})^T (W_Q x_{:,j})
    SeqMat<S> scores(x.cols, x.cols);
    for (int a = 0; a < x.cols; ++a)
      for (int j = 0; j < x.cols; ++j) {
        S s(0);
        for (int i = 0; i < kx.rows; ++i) s += kx(i, a) * qx(i, j);
        scores(a, j) = s;
      }
    SeqMat<S> att = softmax_columns(scores);
    SeqMat<S> vx = matmul(h.w_v, x);
    SeqMat<S> mixed(vx.rows, x.cols);
    for (int i = 0; i < vx.rows; ++i)
      for (int j = 0; j < x.cols; ++j) {
        S s(0);
        for (int a = 0; a < x.cols; ++a) s += vx(i, a) * att(a, j);
        mixed(i, j) = s;
      }
    SeqMat<S> head_out = matmul(h.w_o, mixed);
    out += head_out;
  }
  return out;
}

template <class S>
SeqMat<S> ff_forward(const Block<S>& blk, const SeqMat<S>& x) {
  if (blk.d != x.rows) throw std::invalid_argument("ff_forward: embedding dim mismatch");
  SeqMat<S> out = x;
  for (const FFGroup<S>& g : blk.ff) {
    SeqMat<S> pre = matmul(g.w1, x);
    for (int i = 0; i < pre.rows; ++i)
      for (int j = 0; j < pre.cols; ++j) pre(i, j) += g.b1[static_cast<std::size_t>(i)];
    out += matmul(g.w2, relu(pre));
  }
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out(i, j) += blk.b2[static_cast<std::size_t>(i)];
  return out;
}

// FF(Attn(X)) with both residual additions. Residuals are structural: there
// is no flag to disable them.
template <class S>
SeqMat<S> block_forward(const Block<S>& blk, const SeqMat<S>& x) {
  return ff_forward(blk, attn_forward(blk, x));
}

}  // namespace tfa
