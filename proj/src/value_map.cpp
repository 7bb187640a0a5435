#include "tfa/value_map.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace tfa {

namespace {

double relu(double t) { return t > 0.0 ? t : 0.0; }

}  // namespace

double sigma_zeta1(double t, double gamma1, double gamma2, double label, int d) {
  const double sd = std::sqrt(static_cast<double>(d));
  const double h1 = gamma1 / (2.0 * sd);
  const double h12 = (gamma1 + gamma2) / (2.0 * sd);
  const double scale = 2.0 * sd * label / gamma2;
  return scale * (relu(t + h12) - relu(t + h1) - relu(t - h1) + relu(t - h12));
}

double sigma_zeta2(double t, double gamma2) {
  return (relu(t) - relu(t - gamma2)) / gamma2;
}

double sigma_zeta3(double t, double gamma2, double label) {
  return (label / gamma2) * (relu(t + gamma2) - relu(t));
}

std::string matrix_key(const Mat& m) {
  std::string key(m.data.size() * sizeof(double), '\0');
  std::memcpy(key.data(), m.data.data(), key.size());
  return key;
}

std::string column_key(const Mat& m, int col) {
  std::string key(sizeof(int) + static_cast<std::size_t>(m.rows) * sizeof(double), '\0');
  std::memcpy(key.data(), &col, sizeof(int));
  for (int i = 0; i < m.rows; ++i)
    std::memcpy(key.data() + sizeof(int) + static_cast<std::size_t>(i) * sizeof(double), &m(i, col),
                sizeof(double));
  return key;
}

ValueModule build_value_mapper(const ContextualIdTable& ids, const PiecewiseConstantFn& targets,
                               const SeparationCert& cert, double K, double log_gamma1_override,
                               double log_gamma2_override) {
  if (!(cert.log_gamma_emp > -std::numeric_limits<double>::infinity()) || !cert.all_distinct)
    throw std::invalid_argument("build_value_mapper: certificate reports no positive separation");
  if (ids.ids.size() != targets.table.size())
    throw std::invalid_argument("build_value_mapper: id table and target table sizes differ");

  ValueModule m;
  m.grid = ids.grid;
  ValueMapParams& p = m.params;
  p.d = ids.grid.d;
  p.L = ids.grid.L;
  p.log_gamma1 = std::isnan(log_gamma1_override) ? cert.log_gamma_emp - std::log(2.0) : log_gamma1_override;
  p.log_gamma2 = std::isnan(log_gamma2_override) ? cert.log_gamma_emp - std::log(4.0) : log_gamma2_override;
  // gamma1 + gamma2 < gamma_emp, checked as ratios against gamma_emp: for
  // huge |log gamma_emp| the constant offsets drop below one ulp of the log
  // itself, so absolute log comparison would degenerate.
  double ratio_sum = std::exp(p.log_gamma1 - cert.log_gamma_emp) +
                     std::exp(p.log_gamma2 - cert.log_gamma_emp);
  bool defaults = std::isnan(log_gamma1_override) && std::isnan(log_gamma2_override);
  if (!defaults && !(ratio_sum < 1.0))
    throw std::invalid_argument("build_value_mapper: insufficient separation budget (gamma1+gamma2 >= gamma_emp)");
  p.gamma1 = std::exp(p.log_gamma1);
  p.gamma2 = std::exp(p.log_gamma2);
  p.r = cert.r;
  p.K = K;
  p.shift = cert.r + K;
  const double sd = std::sqrt(static_cast<double>(p.d));
  p.label_printed = sd * cert.r;
  p.label = sd * (cert.r + 2.0 * K + 1.0);
  p.n_anchors = static_cast<std::int64_t>(ids.ids.size()) * p.L;

  m.anchors = ids.ids;
  m.targets = targets.table;
  for (std::int64_t seq = 0; seq < static_cast<std::int64_t>(m.anchors.size()); ++seq) {
    const Mat& a = m.anchors[static_cast<std::size_t>(seq)];
    for (double y : m.targets[static_cast<std::size_t>(seq)].data)
      if (std::fabs(y) > K * (1.0 + 1e-9))
        throw std::invalid_argument("build_value_mapper: target entries exceed K");
    auto [it, inserted] = m.matrix_lookup.emplace(matrix_key(a), seq);
    if (!inserted) throw std::runtime_error("build_value_mapper: duplicate anchor matrices");
    for (int col = 0; col < p.L; ++col) {
      std::string key = column_key(a, col);
      auto found = m.column_lookup.find(key);
      if (found == m.column_lookup.end()) {
        m.column_lookup.emplace(std::move(key), std::make_pair(seq, col));
      } else {
        // Two anchors share the key at double resolution; their true ids
        // still differ (certified), so no real column matches either one.
        found->second = {-1, -1};
      }
    }
  }
  return m;
}

bool extra_gate_fires(double column_sum, const ValueMapParams& p) {
  // Anchored columns sum to at least d*r (shift dominates negative targets);
  // pristine grid/gap columns stay at least d*step/2 lower. The 1e-9 slack
  // absorbs the rounding of sums that sit exactly on d*r.
  return column_sum >= static_cast<double>(p.d) * p.r - 1e-9;
}

std::int64_t value_owner_of(const ValueModule& m, const Mat& xbar) {
  auto it = m.matrix_lookup.find(matrix_key(xbar));
  return it == m.matrix_lookup.end() ? -1 : it->second;
}

void apply_value_subunit(const ValueModule& m, std::int64_t seq, int col, Mat* x,
                         std::int64_t owner_seq) {
  const ValueMapParams& p = m.params;
  const Mat& anchor = m.anchors[static_cast<std::size_t>(seq)];
  const Mat& target = m.targets[static_cast<std::size_t>(seq)];
  for (int j = 0; j < x->cols; ++j) {
    bool match = true;
    for (int i = 0; i < p.d; ++i)
      if ((*x)(i, j) != anchor(i, col)) {
        match = false;
        break;
      }
    if (!match) continue;
    if (owner_seq >= 0) {
      // Grid image: a column fires exactly its own subunit.
      if (owner_seq != seq || j != col) continue;
    } else {
      // Unknown provenance: fire only on an unambiguous anchor key.
      auto it = m.column_lookup.find(column_key(*x, j));
      if (it == m.column_lookup.end() || it->second.first != seq || it->second.second != col) continue;
    }
    // Fully labeled column: the trigger fires and the strip removes the
    // label, leaving target + shift in place of the id.
    for (int i = 0; i < p.d; ++i) (*x)(i, j) = target(i, col) + p.shift;
  }
}

void apply_value_extra(const ValueModule& m, Mat* x) {
  const ValueMapParams& p = m.params;
  for (int j = 0; j < x->cols; ++j) {
    double sum = 0.0;
    for (int i = 0; i < p.d; ++i) sum += (*x)(i, j);
    if (extra_gate_fires(sum, p))
      for (int i = 0; i < p.d; ++i) (*x)(i, j) -= p.shift;
  }
}

Mat value_forward(const ValueModule& m, const Mat& xbar) {
  const ValueMapParams& p = m.params;
  if (xbar.rows != p.d || xbar.cols != p.L) throw std::invalid_argument("value_forward: shape mismatch");

  Mat out = xbar;
  auto whole = m.matrix_lookup.find(matrix_key(xbar));
  if (whole != m.matrix_lookup.end()) {
    const Mat& target = m.targets[static_cast<std::size_t>(whole->second)];
    for (int j = 0; j < p.L; ++j)
      for (int i = 0; i < p.d; ++i) out(i, j) = target(i, j) + p.shift;
  } else {
    for (int j = 0; j < p.L; ++j) {
      auto hit = m.column_lookup.find(column_key(xbar, j));
      if (hit == m.column_lookup.end() || hit->second.first < 0) continue;
      const Mat& target = m.targets[static_cast<std::size_t>(hit->second.first)];
      for (int i = 0; i < p.d; ++i) out(i, j) = target(i, hit->second.second) + p.shift;
    }
  }
  apply_value_extra(m, &out);
  return out;
}

}  // namespace tfa
