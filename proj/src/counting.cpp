#include "tfa/counting.hpp"

#include <cmath>
#include <stdexcept>

namespace tfa {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::int64_t{1} << 55) / base) throw std::runtime_error("count: M^{dL} overflows");
    r *= base;
  }
  return r;
}

}  // namespace

CountReport count_closed_form(int d, int L, int M) {
  if (d < 1 || L < 1 || M < 1) throw std::invalid_argument("count_closed_form: d, L, M must be >= 1");
  const std::int64_t dl = static_cast<std::int64_t>(d) * L;
  const std::int64_t mp = ipow(M, d * L);  // M^{dL}
  CountReport r;
  r.d = d;
  r.L = L;
  r.M = M;

  const std::int64_t pos_ops = dl;
  const std::int64_t quant_ops = 13 * dl * dl * M + 5 * static_cast<std::int64_t>(L) * M + 3;
  const std::int64_t ctx_ops = dl * (8 * d + 4 * L - 4) + 2 * static_cast<std::int64_t>(L) * L - L;
  const std::int64_t ff2_ops = (13 * dl + 4 * d) * L * mp + 7;
  const std::int64_t ff3_ops = (12 * dl + 5 * L + 2 * d) * L * mp + 7;
  const std::int64_t extra_ops = dl;

  const std::int64_t quant_params = M + 4;
  const std::int64_t ctx_params = 4 * static_cast<std::int64_t>(d) * d;
  const std::int64_t value_params = 2 * dl * mp + 6;

  r.per_part = {
      {"positional-encoding", pos_ops, 0},
      {"quantizer-ff", quant_ops, quant_params},
      {"contextual-attention", ctx_ops, ctx_params},
      {"value-ff-first", ff2_ops, 0},
      {"value-ff-second", ff3_ops, 0},
      {"value-extra", extra_ops, value_params},
  };
  for (const PartCount& p : r.per_part) {
    r.t += p.ops;
    r.omega += p.params;
  }

  // Taxonomy split of the same totals.
  r.taxonomy.exps = static_cast<std::int64_t>(L) * L;
  r.taxonomy.jumps = 3 * dl * dl * M + (4 * dl + 2 * dl + 2 * L) * L * mp;
  r.taxonomy.outputs = 0;
  r.taxonomy.arithmetic = r.t - r.taxonomy.exps - r.taxonomy.jumps;
  return r;
}

CountReport count_instrumented(const TransformerNetwork& net, const Mat& X) {
  const GridSpec& g = net.grid;
  const int d = g.d;
  const int L = g.L;
  const int M = g.M;
  const std::int64_t dl = static_cast<std::int64_t>(d) * L;
  CountReport r;
  r.d = d;
  r.L = L;
  r.M = M;

  OpCounts pos, quant, ctx, ff2, ff3, extra;

  // Positional encoding: one addition per entry.
  Mat xp(d, L);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < L; ++j) {
      xp(i, j) = X(i, j) + static_cast<double>(j + 1);
      pos.arithmetic += 1;
    }

  // Quantization ramps. Ground preparation: delta+delta_star, delta/delta_star,
  // (delta+delta_star)/delta_star once; the two shifted thresholds per (j,k).
  quant.arithmetic += 3;
  quant.arithmetic += 5 * static_cast<std::int64_t>(L) * M;
  Mat q = xp;
  for (const RampLayer& rl : net.quantizer.layers) {
    double t = q(rl.i, rl.j) - rl.b;
    q(rl.i, rl.j) += rl.displacement(t);
    // Fixed schedule per ramp layer over the full d x L matrix: the three
    // shifted copies, two slope products, the recombine and the residual add
    // (10 per entry) plus the three ReLU comparisons.
    quant.arithmetic += 10 * dl;
    quant.jumps += 3 * dl;
  }

  // Contextual attention, counted from its dense loops with m = d.
  {
    AttnHead<double> h = net.context.head<double>();
    auto matmul_counted = [&](const Dense<double>& a, const Mat& x, OpCounts* c) {
      Mat y(a.rows, x.cols);
      for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
          double acc = 0.0;
          for (int k = 0; k < a.cols; ++k) {
            acc += a(i, k) * x(k, j);
            c->arithmetic += 1;  // multiply
            if (k > 0) c->arithmetic += 1;  // accumulate
          }
          y(i, j) = acc;
        }
      return y;
    };
    Mat kx = matmul_counted(h.w_k, q, &ctx);
    Mat qx = matmul_counted(h.w_q, q, &ctx);
    Mat vx = matmul_counted(h.w_v, q, &ctx);
    Mat scores(L, L);
    for (int a = 0; a < L; ++a)
      for (int j = 0; j < L; ++j) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
          acc += kx(i, a) * qx(i, j);
          ctx.arithmetic += 1;
          if (i > 0) ctx.arithmetic += 1;
        }
        scores(a, j) = acc;
      }
    // Softmax per column: L exponentials, L-1 additions, L divisions. The
    // executed values use max subtraction for stability; the tally follows
    // the plain schedule.
    Mat att(L, L);
    for (int j = 0; j < L; ++j) {
      double mx = scores(0, j);
      for (int a = 1; a < L; ++a) mx = std::max(mx, scores(a, j));
      double denom = 0.0;
      for (int a = 0; a < L; ++a) {
        att(a, j) = std::exp(scores(a, j) - mx);
        denom += att(a, j);
        ctx.exps += 1;
        if (a > 0) ctx.arithmetic += 1;
      }
      for (int a = 0; a < L; ++a) {
        att(a, j) /= denom;
        ctx.arithmetic += 1;
      }
    }
    Mat mixed(d, L);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < L; ++j) {
        double acc = 0.0;
        for (int a = 0; a < L; ++a) {
          acc += vx(i, a) * att(a, j);
          ctx.arithmetic += 1;
          if (a > 0) ctx.arithmetic += 1;
        }
        mixed(i, j) = acc;
      }
    Mat head_out = matmul_counted(h.w_o, mixed, &ctx);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < L; ++j) {
        q(i, j) += head_out(i, j);
        ctx.arithmetic += 1;
      }
  }

  // Value subunits: fixed schedules per subunit plus one-time preparation
  // of the shared gadget constants (7 counted on each row).
  ff2.arithmetic += 7;
  ff3.arithmetic += 7;
  const std::int64_t owner = value_owner_of(net.value, q);
  const std::int64_t n_sub = net.value.n_subunits();
  for (std::int64_t u = 0; u < n_sub; ++u) {
    apply_value_subunit(net.value, u / L, static_cast<int>(u % L), &q, owner);
    ff2.arithmetic += 9 * dl + 4 * d;
    ff2.jumps += 4 * dl;
    ff3.arithmetic += 10 * dl + 3 * L + 2 * d;
    ff3.jumps += 2 * dl + 2 * L;
  }
  apply_value_extra(net.value, &q);
  extra.arithmetic += dl;

  r.per_part = {
      {"positional-encoding", pos.total(), 0},
      {"quantizer-ff", quant.total(), static_cast<std::int64_t>(M) + 4},
      {"contextual-attention", ctx.total(), 4 * static_cast<std::int64_t>(d) * d},
      {"value-ff-first", ff2.total(), 0},
      {"value-ff-second", ff3.total(), 0},
      {"value-extra", extra.total(), 2 * dl * ipow(M, d * L) + 6},
  };
  r.taxonomy = pos;
  r.taxonomy += quant;
  r.taxonomy += ctx;
  r.taxonomy += ff2;
  r.taxonomy += ff3;
  r.taxonomy += extra;
  for (const PartCount& p : r.per_part) {
    r.t += p.ops;
    r.omega += p.params;
  }
  return r;
}

double vc_upper_bound(double t, double omega) {
  if (t < 1.0 || omega < 1.0) throw std::invalid_argument("vc_upper_bound: t, omega must be >= 1");
  return t * t * omega * (omega + 19.0 * std::log2(9.0 * omega));
}

std::vector<SweepPoint> complexity_sweep(double alpha, double K, int d, int L,
                                         const std::vector<double>& epsilons, double headroom) {
  std::vector<SweepPoint> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) {
    ParamSelection sel = select_parameters(eps, alpha, K, d, L, headroom);
    CountReport c = count_closed_form(d, L, sel.M);
    SweepPoint p;
    p.epsilon = eps;
    p.D = block_count_formula(d, L, sel.M);
    p.t = c.t;
    p.omega = c.omega;
    p.vc_bound = vc_upper_bound(static_cast<double>(c.t), static_cast<double>(c.omega));
    out.push_back(p);
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace tfa
