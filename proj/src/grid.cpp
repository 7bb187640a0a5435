#include "tfa/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace tfa {

namespace {

constexpr std::int64_t kMaxTablePoints = 1 << 24;  // enumeration guard

}  // namespace

ParamSelection select_parameters(double epsilon, double alpha, double K, int d, int L,
                                 double headroom) {
  if (epsilon <= 0.0) throw std::invalid_argument("select_parameters: epsilon must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("select_parameters: alpha in (0,1]");
  if (K <= 0.0) throw std::invalid_argument("select_parameters: K must be positive");
  if (d < 1 || L < 1) throw std::invalid_argument("select_parameters: d, L must be >= 1");
  if (!(headroom > 0.0 && headroom < 1.0)) throw std::invalid_argument("select_parameters: headroom in (0,1)");
  const double d0 = static_cast<double>(d) * L;
  if (!(d0 > 2.0 * alpha)) throw std::invalid_argument("select_parameters: requires d0 > 2*alpha");

  ParamSelection s;
  s.epsilon = epsilon;
  s.alpha = alpha;
  s.K = K;
  s.d = d;
  s.L = L;

  s.delta_max = std::pow(epsilon, 1.0 / alpha) * std::pow(d0, -(alpha + 1.0) / (2.0 * alpha)) *
                std::pow(2.0 * K, -1.0 / alpha);
  s.c2 = std::pow(epsilon / (2.0 * std::sqrt(d0) * K), 2.0 / d0);
  s.c3 = std::pow(epsilon / (4.0 * std::sqrt(d0) * (4.0 * d0 + K)), 2.0 / d0);
  s.delta_star_max = (s.c2 - s.delta_max) * s.delta_max / 2.0;
  s.delta_star_max_c3 = (s.c3 - s.delta_max) * s.delta_max / 2.0;
  s.delta_star_binding = std::min(s.delta_star_max, s.delta_star_max_c3);

  // A feasible pair needs delta strictly below both c2 and c3, otherwise the
  // binding delta_star cap is non-positive.
  double delta_cap = std::min(s.delta_max, std::min(s.c2, s.c3));
  s.delta = headroom * delta_cap;
  double star_cap = std::min((s.c2 - s.delta) * s.delta / 2.0, (s.c3 - s.delta) * s.delta / 2.0);
  s.delta_star = headroom * star_cap;
  if (!(s.delta > 0.0 && s.delta_star > 0.0))
    throw std::runtime_error("select_parameters: no feasible (delta, delta_star)");
  if (s.delta + s.delta_star >= 1.0)
    throw std::runtime_error("select_parameters: delta + delta_star >= 1; epsilon too large");
  s.M = static_cast<int>(std::floor(1.0 / (s.delta + s.delta_star)));
  return s;
}

GridSpec build_grid(double delta, double delta_star, int d, int L) {
  if (!(delta > 0.0 && delta < 1.0) || !(delta_star > 0.0 && delta_star < 1.0))
    throw std::invalid_argument("build_grid: widths must be in (0,1)");
  if (delta + delta_star >= 1.0) throw std::invalid_argument("build_grid: delta + delta_star must be < 1");
  if (d < 1 || L < 1) throw std::invalid_argument("build_grid: d, L must be >= 1");
  GridSpec g;
  g.delta = delta;
  g.delta_star = delta_star;
  g.d = d;
  g.L = L;
  g.M = static_cast<int>(std::floor(1.0 / (delta + delta_star)));
  if (g.M < 1) throw std::invalid_argument("build_grid: M must be >= 1");
  return g;
}

GridSpec grid_from_selection(const ParamSelection& sel, int d, int L) {
  return build_grid(sel.delta, sel.delta_star, d, L);
}

std::int64_t GridSpec::total_points() const {
  std::int64_t n = 1;
  for (int t = 0; t < d0(); ++t) {
    if (n > kMaxTablePoints / M)
      throw std::runtime_error("GridSpec: M^{d0} too large to enumerate");
    n *= M;
  }
  return n;
}

Mat GridSpec::grid_matrix(std::int64_t flat) const {
  Mat g(d, L);
  for (int t = 0; t < d0(); ++t) {
    int k = static_cast<int>(flat % M);
    flat /= M;
    g(t % d, t / d) = point0(k);
  }
  return g;
}

Mat GridSpec::grid_matrix_pos(std::int64_t flat) const {
  Mat g(d, L);
  for (int t = 0; t < d0(); ++t) {
    int k = static_cast<int>(flat % M);
    flat /= M;
    int j = t / d;
    g(t % d, j) = point_pos(j, k);
  }
  return g;
}

Mat GridSpec::positional_encoding() const {
  Mat e(d, L);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < L; ++j) e(i, j) = static_cast<double>(j + 1);
  return e;
}

int GridSpec::locate_level(double x) const {
  if (x < 0.0 || x > 1.0) return -1;
  int k0 = static_cast<int>(std::floor(x / step()));
  for (int k = std::max(0, k0 - 1); k <= std::min(M - 1, k0 + 1); ++k) {
    double g = point0(k);
    if (x >= g && x <= g + delta) return k;
  }
  return -1;
}

bool GridSpec::cube_index_of(const Mat& X, std::int64_t* flat_out) const {
  if (X.rows != d || X.cols != L) throw std::invalid_argument("cube_index_of: shape mismatch");
  std::int64_t flat = 0;
  std::int64_t weight = 1;
  for (int t = 0; t < d0(); ++t) {
    int k = locate_level(X(t % d, t / d));
    if (k < 0) return false;
    flat += weight * k;
    weight *= M;
  }
  if (flat_out) *flat_out = flat;
  return true;
}

double GridSpec::complement_measure() const {
  return std::pow(1.0 - static_cast<double>(M) * delta, static_cast<double>(d0()));
}

Mat GridSpec::sample_in_cubes(Rng& rng, std::int64_t* flat_out) const {
  std::int64_t flat = 0;
  std::int64_t weight = 1;
  Mat x(d, L);
  for (int t = 0; t < d0(); ++t) {
    int k = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(M)));
    flat += weight * k;
    weight *= M;
    x(t % d, t / d) = point0(k) + delta * rng.uniform();
  }
  if (flat_out) *flat_out = flat;
  return x;
}

namespace {

// Uniform draw from the per-dimension gap set [0,1] \ union_k [g_k, g_k+delta].
double sample_gap_coord(const GridSpec& g, Rng& rng) {
  double total = 1.0 - static_cast<double>(g.M) * g.delta;
  double r = total * rng.uniform();
  for (int k = 0; k < g.M; ++k) {
    double lo = g.point0(k) + g.delta;
    double hi = (k + 1 < g.M) ? g.point0(k + 1) : 1.0;
    double len = hi - lo;
    if (r < len) return lo + r;
    r -= len;
  }
  return 1.0;  // guard against accumulated rounding
}

}  // namespace

Mat GridSpec::sample_in_gap(Rng& rng) const {
  const int n = d0();
  const double pc = static_cast<double>(M) * delta;       // per-dim cube measure
  const double pg = 1.0 - pc;                             // per-dim gap measure
  // Choose how many coordinates land in gaps, conditioned on at least one.
  // P(count = m) proportional to C(n,m) pg^m pc^(n-m).
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  double binom = 1.0;
  for (int m = 1; m <= n; ++m) {
    binom = binom * (n - m + 1) / m;
    w[static_cast<std::size_t>(m)] = binom * std::pow(pg, m) * std::pow(pc, n - m);
  }
  double tot = 0.0;
  for (double v : w) tot += v;
  double r = tot * rng.uniform();
  int count = n;
  for (int m = 1; m <= n; ++m) {
    if (r < w[static_cast<std::size_t>(m)]) {
      count = m;
      break;
    }
    r -= w[static_cast<std::size_t>(m)];
  }
  // Choose which coordinates are the gap ones (uniform subset of given size).
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) idx[static_cast<std::size_t>(t)] = t;
  for (int t = 0; t < count; ++t) {
    int pick = t + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - t)));
    std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(pick)]);
  }
  std::vector<bool> in_gap(static_cast<std::size_t>(n), false);
  for (int t = 0; t < count; ++t) in_gap[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])] = true;

  Mat x(d, L);
  for (int t = 0; t < n; ++t) {
    double v;
    if (in_gap[static_cast<std::size_t>(t)]) {
      v = sample_gap_coord(*this, rng);
    } else {
      int k = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(M)));
      v = point0(k) + delta * rng.uniform();
    }
    x(t % d, t / d) = v;
  }
  return x;
}

Mat PiecewiseConstantFn::eval(const Mat& X) const {
  std::int64_t flat = 0;
  if (grid.cube_index_of(X, &flat)) return table[static_cast<std::size_t>(flat)];
  return Mat::zeros(grid.d, grid.L);
}

PiecewiseConstantFn quantize_target(const HolderTarget& target, const GridSpec& grid,
                                    const ReshapePlan& plan) {
  if (plan.d != grid.d || plan.L != grid.L)
    throw std::invalid_argument("quantize_target: plan/grid shape mismatch");
  if (target.dx != plan.d0())
    throw std::invalid_argument("quantize_target: target input dimension != d*L");
  if (target.dy != plan.d0() && target.dy != 1)
    throw std::invalid_argument("quantize_target: target output dimension must be d*L or 1");

  PiecewiseConstantFn f;
  f.grid = grid;
  f.plan = plan;
  const std::int64_t n = grid.total_points();
  f.table.reserve(static_cast<std::size_t>(n));
  for (std::int64_t g = 0; g < n; ++g) {
    Mat G = grid.grid_matrix(g);
    std::vector<double> y = target(flatten(plan, G));
    if (target.dy == 1) {
      std::vector<double> full(static_cast<std::size_t>(plan.d0()), 0.0);
      full[0] = y[0];
      y = full;
    }
    f.table.push_back(reshape(plan, y));
  }
  return f;
}

}  // namespace tfa
