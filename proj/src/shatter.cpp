#include "tfa/shatter.hpp"

#include <cmath>
#include <stdexcept>

#include "tfa/network.hpp"

namespace tfa {

double ShatterFamily::peak() const { return 0.5 * std::pow(side() / 2.0, alpha); }

std::int64_t ShatterFamily::n_points() const {
  std::int64_t n = 1;
  for (int t = 0; t < d0; ++t) {
    if (n > (std::int64_t{1} << 40) / M) throw std::runtime_error("ShatterFamily: M^{d0} too large");
    n *= M;
  }
  return n;
}

std::vector<int> ShatterFamily::theta_of(std::int64_t flat) const {
  std::vector<int> theta(static_cast<std::size_t>(d0));
  for (int t = 0; t < d0; ++t) {
    theta[static_cast<std::size_t>(t)] = static_cast<int>(flat % M);
    flat /= M;
  }
  return theta;
}

std::vector<double> ShatterFamily::center(std::int64_t flat) const {
  std::vector<int> theta = theta_of(flat);
  std::vector<double> c(static_cast<std::size_t>(d0));
  for (int t = 0; t < d0; ++t)
    c[static_cast<std::size_t>(t)] = (static_cast<double>(theta[static_cast<std::size_t>(t)]) + 0.5) * side();
  return c;
}

double ShatterFamily::zeta(const std::vector<double>& x, std::int64_t flat) const {
  std::vector<double> c = center(flat);
  double m_inf = 0.0;
  for (int t = 0; t < d0; ++t)
    m_inf = std::max(m_inf, std::fabs(x[static_cast<std::size_t>(t)] - c[static_cast<std::size_t>(t)]));
  double half = side() / 2.0;
  if (m_inf >= half) return 0.0;
  return peak() * (1.0 - m_inf / half);
}

double ShatterFamily::f_phi(const std::vector<double>& x, std::uint64_t phi) const {
  // The tents have disjoint open supports; locate the containing cube.
  std::int64_t flat = 0, weight = 1;
  for (int t = 0; t < d0; ++t) {
    double v = x[static_cast<std::size_t>(t)];
    int k = static_cast<int>(std::floor(v * M));
    if (k < 0) k = 0;
    if (k >= M) k = M - 1;
    flat += weight * k;
    weight *= M;
  }
  double sgn = (phi >> flat) & 1u ? 1.0 : -1.0;
  return sgn * zeta(x, flat);
}

HolderTarget ShatterFamily::as_target(std::uint64_t phi) const {
  ShatterFamily fam = *this;
  return {"shatter-phi", alpha, 1.0, d0, 1,
          [fam, phi](const std::vector<double>& x) { return std::vector<double>{fam.f_phi(x, phi)}; }};
}

ShatterFamily build_shatter_family(int M, int d0, double alpha) {
  if (M < 1 || d0 < 1) throw std::invalid_argument("build_shatter_family: M, d0 must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("build_shatter_family: alpha in (0,1]");
  ShatterFamily f;
  f.M = M;
  f.d0 = d0;
  f.alpha = alpha;
  return f;
}

int shatter_m_for_epsilon(double epsilon, double alpha) {
  if (epsilon <= 0.0) throw std::invalid_argument("shatter_m_for_epsilon: epsilon must be positive");
  return static_cast<int>(std::floor(std::pow(4.5 * epsilon, -1.0 / alpha)));
}

ShatterReport verify_shattering(const ShatterFamily& fam, std::uint64_t seed, std::int64_t max_points) {
  const std::int64_t n = fam.n_points();
  if (n > max_points)
    throw std::invalid_argument("verify_shattering: M^{d0} exceeds the enumeration cap");
  int L = -1;
  for (int cand = 2; cand <= fam.d0; ++cand)
    if (fam.d0 % cand == 0) {
      L = cand;
      break;
    }
  if (L < 0) throw std::invalid_argument("verify_shattering: d0 must factor as d*L with L >= 2");
  const int d = fam.d0 / L;
  if (!(static_cast<double>(fam.d0) > 2.0 * fam.alpha))
    throw std::invalid_argument("verify_shattering: needs d0 > 2*alpha");

  // Dyadic quantization widths put every tent center on a cube corner of the
  // approximator grid: step = 1/(2M), delta = (3/4) step.
  const double step = 1.0 / (2.0 * fam.M);
  const double delta = 0.75 * step;
  const double delta_star = step - delta;

  ShatterReport rep;
  rep.n_points = n;
  rep.n_patterns = std::int64_t{1} << n;

  for (std::uint64_t phi = 0; phi < static_cast<std::uint64_t>(rep.n_patterns); ++phi) {
    ShatterPatternResult res;
    res.phi = phi;
    res.family_signs_ok = true;
    for (std::int64_t p = 0; p < n; ++p) {
      std::vector<double> c = fam.center(p);
      double want = (phi >> p) & 1u ? 1.0 : -1.0;
      double got = fam.f_phi(c, phi);
      if (!(got * want > 0.0) || std::fabs(std::fabs(got) - fam.peak()) > 1e-12) {
        res.family_signs_ok = false;
        res.failure = "family sign at theta " + std::to_string(p);
        break;
      }
    }

    BuildOptions opts;
    opts.seed = seed;
    TransformerNetwork net =
        build_approximator_manual(fam.as_target(phi), delta, delta_star, d, L, opts);
    res.network_signs_ok = true;
    for (std::int64_t p = 0; p < n; ++p) {
      std::vector<double> c = fam.center(p);
      double want = (phi >> p) & 1u ? 1.0 : -1.0;
      double got = net.apply_scalar(c);
      if (!(got * want > 0.0)) {
        res.network_signs_ok = false;
        res.failure = "network sign at theta " + std::to_string(p) + " phi " + std::to_string(phi);
        break;
      }
    }
    rep.patterns.push_back(std::move(res));
  }
  return rep;
}

}  // namespace tfa
