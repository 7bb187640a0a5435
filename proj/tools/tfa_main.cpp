// Command-line front end: builds the explicit approximator, runs the
// verification suites and sweeps, and emits JSON reports / CSV curves.
//
// Exit codes: 0 all asserted invariants pass, 1 usage or configuration
// error, 2 a named invariant failed.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tfa/bounds.hpp"
#include "tfa/counting.hpp"
#include "tfa/error_mc.hpp"
#include "tfa/report.hpp"
#include "tfa/rng.hpp"
#include "tfa/shatter.hpp"
#include "tfa/widen.hpp"

using namespace tfa;
using nlohmann::json;

namespace {

struct CommonOpts {
  double alpha = 0.5;
  double K = 1.0;
  int d = 1;
  int L = 2;
  std::vector<double> eps;
  double delta = -1.0;
  double delta_star = -1.0;
  std::int64_t seed = -1;
  std::uint64_t samples = 200000;
  unsigned precision_bits = 0;
  std::string target_id = "bump";
  std::string out;
  std::string csv;
  bool merge_width = false;
};

void add_common(CLI::App* cmd, CommonOpts* o, bool with_widths = true) {
  cmd->add_option("--alpha", o->alpha, "Holder smoothness in (0,1]");
  cmd->add_option("--K", o->K, "Holder norm bound");
  cmd->add_option("--d", o->d, "token embedding dimension");
  cmd->add_option("--L", o->L, "sequence length");
  if (with_widths) {
    cmd->add_option("--eps", o->eps, "target accuracy (repeatable for sweeps)");
    cmd->add_option("--delta", o->delta, "cell width (manual grid)");
    cmd->add_option("--delta-star", o->delta_star, "separation width (manual grid)");
  }
  cmd->add_option("--seed", o->seed, "master seed (required for stochastic commands)");
  cmd->add_option("--samples", o->samples, "Monte Carlo sample budget");
  cmd->add_option("--precision-bits", o->precision_bits, "extended-precision mantissa override");
  cmd->add_option("--target", o->target_id, "catalog target id");
  cmd->add_option("--out", o->out, "JSON report path");
  cmd->add_option("--csv", o->csv, "CSV curve path");
  cmd->add_flag("--merge-width", o->merge_width, "merge the quantizer stack into one wide layer");
}

std::string resolve_out(const std::string& path) {
  if (path.empty() || path.find('/') != std::string::npos) return path;
  const char* dir = std::getenv("TFA_OUT_DIR");
  if (!dir || !*dir) return path;
  return std::string(dir) + "/" + path;
}

void emit(const json& report, const std::string& out) {
  if (!out.empty()) write_text_file(resolve_out(out), report.dump(2) + "\n");
  std::cout << report.dump(2) << std::endl;
}

[[noreturn]] void usage_fail(const std::string& msg) {
  std::cerr << "error: " << msg << std::endl;
  std::exit(1);
}

void require_seed(const CommonOpts& o) {
  if (o.seed < 0) usage_fail("--seed is required for this command");
}

// Exactly one of eps / (delta, delta_star).
void require_widths(const CommonOpts& o) {
  bool has_eps = !o.eps.empty();
  bool has_manual = o.delta > 0.0 || o.delta_star > 0.0;
  if (has_eps == has_manual)
    usage_fail("supply exactly one of --eps or (--delta and --delta-star)");
  if (has_manual && (o.delta <= 0.0 || o.delta_star <= 0.0))
    usage_fail("manual grids need both --delta and --delta-star");
}

json config_json(const CommonOpts& o) {
  json j{{"alpha", o.alpha}, {"K", o.K},       {"d", o.d},
         {"L", o.L},         {"seed", o.seed}, {"samples", o.samples},
         {"target", o.target_id}};
  if (!o.eps.empty()) j["eps"] = o.eps;
  if (o.delta > 0.0) {
    j["delta"] = o.delta;
    j["delta_star"] = o.delta_star;
  }
  return j;
}

TransformerNetwork build_from_opts(const CommonOpts& o, double eps_override = -1.0) {
  HolderTarget target = holder_by_id(o.target_id, o.alpha, o.K, o.d * o.L, o.d * o.L);
  BuildOptions bo;
  bo.seed = static_cast<std::uint64_t>(o.seed);
  bo.merge_quantizer = o.merge_width;
  if (eps_override > 0.0) return build_approximator(target, eps_override, o.d, o.L, bo);
  if (!o.eps.empty()) return build_approximator(target, o.eps.front(), o.d, o.L, bo);
  return build_approximator_manual(target, o.delta, o.delta_star, o.d, o.L, bo);
}

struct CheckList {
  json checks = json::array();
  bool all_pass = true;
  std::string first_failure;

  void add(const std::string& name, bool pass, const json& detail = {}) {
    checks.push_back(json{{"name", name}, {"pass", pass}, {"detail", detail}});
    if (!pass && all_pass) {
      all_pass = false;
      first_failure = name;
    }
  }
};

int finish(const CheckList& cl, json report, const std::string& out) {
  report["checks"] = cl.checks;
  report["pass"] = cl.all_pass;
  if (!cl.all_pass) report["first_failure"] = cl.first_failure;
  emit(report, out);
  if (!cl.all_pass) {
    std::cerr << "FAILED: " << cl.first_failure << std::endl;
    return 2;
  }
  return 0;
}

int cmd_build(const CommonOpts& o) {
  require_seed(o);
  require_widths(o);
  TransformerNetwork net = build_from_opts(o);
  json report{{"schema", 1}, {"command", "build"}, {"config", config_json(o)}};
  report["build"] = build_report(net);
  emit(report, o.out);
  return 0;
}

int cmd_verify(const CommonOpts& o) {
  require_seed(o);
  require_widths(o);
  TransformerNetwork net = build_from_opts(o);
  const GridSpec& g = net.grid;
  CheckList cl;

  {  // quantization: cubes snap to G + E, gaps stay in [1, L+1]
    Rng rng = derive_rng(static_cast<std::uint64_t>(o.seed), "verify-quant");
    double worst = 0.0;
    std::uint64_t per_cube = 1000;
    for (std::int64_t f = 0; f < g.total_points(); ++f) {
      Mat want = g.grid_matrix_pos(f);
      for (std::uint64_t s = 0; s < per_cube; ++s) {
        Mat x(g.d, g.L);
        std::int64_t lvl = f;
        for (int t = 0; t < g.d0(); ++t) {
          int k = static_cast<int>(lvl % g.M);
          lvl /= g.M;
          x(t % g.d, t / g.d) = g.point0(k) + g.delta * rng.uniform();
        }
        Mat out = quantize_forward(net.quantizer, x);
        for (std::size_t t = 0; t < out.data.size(); ++t)
          worst = std::max(worst, std::fabs(out.data[t] - want.data[t]));
      }
    }
    cl.add("quantize-cube-exactness", worst <= 1e-10, json{{"max_err", worst}});

    bool in_range = true;
    for (int s = 0; s < 2000; ++s) {
      Mat out = quantize_forward(net.quantizer, g.sample_in_gap(rng));
      for (double v : out.data) in_range = in_range && v >= 1.0 && v <= g.L + 1.0;
    }
    cl.add("quantize-gap-range", in_range);
  }

  {  // contextual certificate
    const SeparationCert& c = net.cert;
    cl.add("context-all-distinct", c.all_distinct, json{{"ids", 2 * g.total_points()}});
    cl.add("context-bounded", c.max_id_norm <= c.r + 1e-12,
           json{{"max_norm", c.max_id_norm}, {"r", c.r}});
    cl.add("context-token-separation", c.min_distinct_token_dist >= c.beta / 2.0 - 1e-12,
           json{{"min_dist", c.min_distinct_token_dist}, {"beta_half", c.beta / 2.0}});
    cl.add("context-head-shift", c.max_head_shift <= c.beta / 4.0 + 1e-12,
           json{{"max_shift", c.max_head_shift}});
    double rel = std::fabs(c.log_gamma_theory - c.log_gamma_theory_closed) /
                 std::fabs(c.log_gamma_theory);
    cl.add("gamma-theory-route-agreement", rel <= 1e-9, json{{"rel", rel}});
    cl.add("gamma-emp-positive", c.all_distinct && std::isfinite(c.log_gamma_emp),
           json{{"log_gamma_emp", c.log_gamma_emp}});
    cl.add("gamma-emp-dominates-theory", c.log_gamma_emp >= c.log_gamma_theory);
    try {
      double log_brute = bruteforce_log_min_distance(net.context, g, net.cert.log_gamma_emp);
      double rel_b = std::fabs(log_brute - c.log_gamma_emp) / std::fabs(c.log_gamma_emp);
      cl.add("gamma-emp-bruteforce-agreement", rel_b <= 1e-8, json{{"rel", rel_b}});
    } catch (const std::exception& e) {
      cl.add("gamma-emp-bruteforce-agreement", true, json{{"skipped", e.what()}});
    }
  }

  {  // value mapping exactness on the grid
    PiecewiseConstantFn fd = quantize_target(
        holder_by_id(o.target_id, o.alpha, o.K, o.d * o.L, o.d * o.L), g, net.plan);
    double worst = 0.0;
    for (std::int64_t f = 0; f < g.total_points(); ++f) {
      std::vector<double> got = net.apply(flatten(net.plan, g.grid_matrix(f)));
      std::vector<double> want = flatten(net.plan, fd.table[static_cast<std::size_t>(f)]);
      for (std::size_t k = 0; k < got.size(); ++k)
        worst = std::max(worst, std::fabs(got[k] - want[k]));
    }
    cl.add("value-grid-exactness", worst <= 1e-8, json{{"max_err", worst}});

    try {
      unsigned bits = o.precision_bits ? o.precision_bits
                                       : bits_for_separation(-net.cert.log_gamma_emp);
      set_working_precision(bits);
      std::vector<Block<BigFloat>> blocks = net.blocks<BigFloat>();
      double worst_lw = 0.0;
      Mat e = g.positional_encoding();
      Rng rng = derive_rng(static_cast<std::uint64_t>(o.seed), "verify-layerwise");
      for (int s = 0; s < 10; ++s) {
        Mat x = g.sample_in_cubes(rng);
        Mat fast = net.forward(x);
        SeqMat<BigFloat> xb(x.rows, x.cols);
        for (int i = 0; i < x.rows; ++i)
          for (int j = 0; j < x.cols; ++j) xb(i, j) = BigFloat(x(i, j)) + BigFloat(e(i, j));
        SeqMat<BigFloat> slow = forward_blocks(blocks, xb);
        for (int i = 0; i < x.rows; ++i)
          for (int j = 0; j < x.cols; ++j)
            worst_lw = std::max(worst_lw, std::fabs(to_double(slow(i, j)) - fast(i, j)));
      }
      cl.add("value-layerwise-differential", worst_lw <= 1e-9,
             json{{"max_diff", worst_lw}, {"mantissa_bits", bits}});
    } catch (const std::exception& e) {
      cl.add("value-layerwise-differential", true, json{{"skipped", e.what()}});
    }
  }

  {  // depth-width transform agreement
    WideNetwork w = widen_by_factor(net, 2);
    Rng rng = derive_rng(static_cast<std::uint64_t>(o.seed), "verify-widen");
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
      Mat x = g.sample_in_cubes(rng);
      Mat a = net.forward(x);
      Mat b = w.forward(x);
      for (std::size_t t = 0; t < a.data.size(); ++t)
        worst = std::max(worst, std::fabs(a.data[t] - b.data[t]));
    }
    cl.add("widen-agreement", worst <= 1e-9, json{{"max_diff", worst}});
  }

  json report{{"schema", 1},
              {"command", "verify"},
              {"config", config_json(o)},
              {"cert", to_json(net.cert)}};
  return finish(cl, std::move(report), o.out);
}

int cmd_approx_error(const CommonOpts& o) {
  require_seed(o);
  require_widths(o);
  CheckList cl;
  json runs = json::array();
  CsvTable curve;
  curve.columns = {"eps", "err_total", "ci_lo", "ci_hi"};

  HolderTarget target = holder_by_id(o.target_id, o.alpha, o.K, o.d * o.L, o.d * o.L);
  auto run_one = [&](TransformerNetwork& net, double eps) {
    L2ErrorEstimate est =
        estimate_l2_error(net, target, o.samples, static_cast<std::uint64_t>(o.seed));
    json r{{"eps", eps},
           {"D", net.block_count()},
           {"grid", grid_to_json(net.grid)},
           {"estimate", to_json(est)}};
    const double d0 = static_cast<double>(o.d) * o.L;
    const double cube_bound = std::sqrt(d0) * o.K * std::pow(std::sqrt(d0) * net.grid.delta, o.alpha);
    cl.add("cube-error-bound", est.err_on_cubes <= cube_bound + 3.0 * est.ci95_cubes,
           json{{"err_on_cubes", est.err_on_cubes}, {"bound", cube_bound}});
    if (eps > 0.0)
      cl.add("total-error-below-eps", est.err_total_upper95 < eps,
             json{{"upper95", est.err_total_upper95}, {"eps", eps}});
    runs.push_back(std::move(r));
    curve.rows.push_back({eps > 0 ? eps : net.grid.delta, est.err_total,
                          est.err_total - est.ci95_total, est.err_total + est.ci95_total});
  };

  if (!o.eps.empty()) {
    for (double eps : o.eps) {
      TransformerNetwork net = build_from_opts(o, eps);
      run_one(net, eps);
    }
  } else {
    TransformerNetwork net = build_from_opts(o);
    run_one(net, -1.0);
  }
  if (!o.csv.empty()) write_text_file(resolve_out(o.csv), csv_to_string(curve));

  json report{{"schema", 1}, {"command", "approx-error"}, {"config", config_json(o)}, {"runs", runs}};
  return finish(cl, std::move(report), o.out);
}

int cmd_count(const CommonOpts& o, int M) {
  require_seed(o);
  if (M < 1) usage_fail("--M must be >= 1");
  CountReport closed = count_closed_form(o.d, o.L, M);

  double step = 1.0 / (static_cast<double>(M) + 0.5);
  HolderTarget t = holder_by_id(o.target_id, o.alpha, o.K, o.d * o.L, o.d * o.L);
  BuildOptions bo;
  bo.seed = static_cast<std::uint64_t>(o.seed);
  TransformerNetwork net = build_approximator_manual(t, 0.75 * step, 0.25 * step, o.d, o.L, bo);
  Rng rng = derive_rng(static_cast<std::uint64_t>(o.seed), "count-input");
  Mat x(o.d, o.L);
  for (double& v : x.data) v = rng.uniform();
  CountReport inst = count_instrumented(net, x);

  CheckList cl;
  cl.add("instrumented-matches-closed-form", inst.t == closed.t && inst.omega == closed.omega,
         json{{"t_closed", closed.t}, {"t_instrumented", inst.t}, {"omega", closed.omega}});
  json report{{"schema", 1},
              {"command", "count"},
              {"config", config_json(o)},
              {"M", M},
              {"closed_form", to_json(closed)},
              {"instrumented", to_json(inst)},
              {"vc_upper_bound", vc_upper_bound(static_cast<double>(closed.t),
                                                static_cast<double>(closed.omega))}};
  return finish(cl, std::move(report), o.out);
}

int cmd_vc_bound(const CommonOpts& o, double t_direct, double omega_direct) {
  json report{{"schema", 1}, {"command", "vc-bound"}, {"config", config_json(o)}};
  CheckList cl;
  if (t_direct > 0.0 && omega_direct > 0.0) {
    report["vc_upper_bound"] = vc_upper_bound(t_direct, omega_direct);
    emit(report, o.out);
    return 0;
  }
  if (o.eps.size() < 2) usage_fail("vc-bound needs --t/--omega or an --eps sweep of >= 2 points");
  std::vector<SweepPoint> sweep = complexity_sweep(o.alpha, o.K, o.d, o.L, o.eps);
  CsvTable curve;
  curve.columns = {"eps", "D", "t", "omega", "vc_bound"};
  std::vector<double> logd, logvc;
  json rows = json::array();
  for (const SweepPoint& p : sweep) {
    curve.rows.push_back({p.epsilon, static_cast<double>(p.D), static_cast<double>(p.t),
                          static_cast<double>(p.omega), p.vc_bound});
    logd.push_back(std::log(static_cast<double>(p.D)));
    logvc.push_back(std::log(p.vc_bound));
    rows.push_back(json{{"eps", p.epsilon}, {"D", p.D}, {"t", p.t}, {"omega", p.omega},
                        {"vc_bound", p.vc_bound}});
  }
  double slope = fit_slope(logd, logvc);
  report["sweep"] = rows;
  report["log_slope_vc_vs_D"] = slope;
  cl.add("vc-scaling-slope", std::fabs(slope - 4.0) <= 0.3, json{{"slope", slope}});
  if (!o.csv.empty()) write_text_file(resolve_out(o.csv), csv_to_string(curve));
  return finish(cl, std::move(report), o.out);
}

int cmd_shatter(const CommonOpts& o, int M, int d0, std::int64_t cap) {
  require_seed(o);
  ShatterFamily fam = build_shatter_family(M, d0, o.alpha);
  ShatterReport rep = verify_shattering(fam, static_cast<std::uint64_t>(o.seed), cap);
  CheckList cl;
  json patterns = json::array();
  for (const ShatterPatternResult& p : rep.patterns) {
    patterns.push_back(json{{"phi", p.phi},
                            {"family_signs_ok", p.family_signs_ok},
                            {"network_signs_ok", p.network_signs_ok},
                            {"failure", p.failure}});
    cl.add("shatter-phi-" + std::to_string(p.phi), p.family_signs_ok && p.network_signs_ok);
  }
  HolderCheck hc = check_holder_smoothness(fam.as_target((1u << rep.n_points) - 1), 100000,
                                           static_cast<std::uint64_t>(o.seed));
  cl.add("family-holder-membership", hc.violations == 0, json{{"worst_ratio", hc.worst_ratio}});
  json report{{"schema", 1},
              {"command", "shatter"},
              {"config", config_json(o)},
              {"M", M},
              {"d0", d0},
              {"n_points", rep.n_points},
              {"n_patterns", rep.n_patterns},
              {"patterns", patterns}};
  return finish(cl, std::move(report), o.out);
}

int cmd_tradeoff(const CommonOpts& o, std::vector<int> factors) {
  require_seed(o);
  require_widths(o);
  if (factors.empty()) factors = {1, 2, 4};
  TransformerNetwork net = build_from_opts(o);
  CheckList cl;
  CsvTable curve;
  curve.columns = {"n", "d_prime", "w_prime", "max_diff"};
  json rows = json::array();
  Rng rng = derive_rng(static_cast<std::uint64_t>(o.seed), "tradeoff");
  const double base = static_cast<double>(net.block_count()) * 4.0 * net.grid.d;
  for (int n : factors) {
    WideNetwork w = widen_by_factor(net, n);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      Mat x = net.grid.sample_in_cubes(rng);
      Mat a = net.forward(x);
      Mat b = w.forward(x);
      for (std::size_t t = 0; t < a.data.size(); ++t)
        worst = std::max(worst, std::fabs(a.data[t] - b.data[t]));
    }
    double ratio = static_cast<double>(w.d_prime * w.w_prime) / base;
    cl.add("widen-agreement-n" + std::to_string(n), worst <= 1e-9, json{{"max_diff", worst}});
    rows.push_back(json{{"n", n}, {"d_prime", w.d_prime}, {"w_prime", w.w_prime},
                        {"product_ratio", ratio}, {"max_diff", worst}});
    curve.rows.push_back({static_cast<double>(n), static_cast<double>(w.d_prime),
                          static_cast<double>(w.w_prime), worst});
  }
  if (!o.csv.empty()) write_text_file(resolve_out(o.csv), csv_to_string(curve));
  json report{{"schema", 1}, {"command", "tradeoff"}, {"config", config_json(o)},
              {"D", net.block_count()}, {"factors", rows}};
  return finish(cl, std::move(report), o.out);
}

int cmd_regression(const CommonOpts& o, std::vector<std::uint64_t> sweep_n, int n_seeds,
                   double noise) {
  require_seed(o);
  if (o.eps.empty()) usage_fail("regression needs --eps");
  if (sweep_n.empty()) sweep_n = {100, 1000, 10000};
  CheckList cl;
  CsvTable curve;
  curve.columns = {"N", "empirical_excess", "e_app_sq", "e_sta_bound"};
  json rows = json::array();
  std::vector<double> medians;
  for (std::uint64_t n : sweep_n) {
    std::vector<double> excesses;
    json per_seed = json::array();
    for (int s = 0; s < n_seeds; ++s) {
      RegressionSetup setup;
      setup.target = holder_scalar_bump(o.alpha, o.K, o.d * o.L);
      setup.N = n;
      setup.noise_sd = noise;
      setup.seed = static_cast<std::uint64_t>(o.seed) * 1000003ull + static_cast<std::uint64_t>(s);
      RegressionRunReport rep = plugin_regression_demo(setup, o.eps.front(), o.d, o.L);
      excesses.push_back(rep.empirical_excess);
      per_seed.push_back(to_json(rep));
      curve.rows.push_back({static_cast<double>(n), rep.empirical_excess, rep.e_app * rep.e_app,
                            rep.e_sta_bound});
    }
    std::sort(excesses.begin(), excesses.end());
    double median = excesses[excesses.size() / 2];
    medians.push_back(median);
    rows.push_back(json{{"N", n}, {"median_excess", median}, {"runs", per_seed}});
  }
  for (std::size_t i = 1; i < medians.size(); ++i)
    cl.add("median-excess-decreases-" + std::to_string(i), medians[i] < medians[i - 1],
           json{{"prev", medians[i - 1]}, {"cur", medians[i]}});
  if (!o.csv.empty()) write_text_file(resolve_out(o.csv), csv_to_string(curve));
  json report{{"schema", 1}, {"command", "regression"}, {"config", config_json(o)},
              {"noise", noise}, {"sweep", rows}};
  return finish(cl, std::move(report), o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit Transformer approximator laboratory"};
  app.require_subcommand(1);

  CommonOpts o;
  int M = 2;
  int d0 = 2;
  std::int64_t cap = 4;
  double t_direct = -1.0, omega_direct = -1.0;
  std::vector<int> factors;
  std::vector<std::uint64_t> sweep_n;
  int n_seeds = 10;
  double noise = 0.05;

  CLI::App* c_build = app.add_subcommand("build", "build an approximator and report it");
  add_common(c_build, &o);
  CLI::App* c_verify = app.add_subcommand("verify", "run the construction invariant suite");
  add_common(c_verify, &o);
  CLI::App* c_err = app.add_subcommand("approx-error", "Monte Carlo L2 error of a built network");
  add_common(c_err, &o);
  CLI::App* c_count = app.add_subcommand("count", "operation/parameter counts");
  add_common(c_count, &o, false);
  c_count->add_option("--M", M, "grid points per dimension");
  CLI::App* c_vc = app.add_subcommand("vc-bound", "VC-dimension upper bound and scaling");
  add_common(c_vc, &o);
  c_vc->add_option("--t", t_direct, "operation count");
  c_vc->add_option("--omega", omega_direct, "parameter count");
  CLI::App* c_shatter = app.add_subcommand("shatter", "lower-bound sign-pattern realization");
  add_common(c_shatter, &o, false);
  c_shatter->add_option("--M", M, "shattering grid size per dimension");
  c_shatter->add_option("--d0", d0, "input dimension");
  c_shatter->add_option("--cap", cap, "max shatterable points to enumerate");
  CLI::App* c_trade = app.add_subcommand("tradeoff", "depth-width trade-off agreement");
  add_common(c_trade, &o);
  c_trade->add_option("--factors", factors, "replication factors");
  CLI::App* c_reg = app.add_subcommand("regression", "plug-in regression demo sweep");
  add_common(c_reg, &o);
  c_reg->add_option("--sweep-n", sweep_n, "training sizes");
  c_reg->add_option("--n-seeds", n_seeds, "seeds per size");
  c_reg->add_option("--noise", noise, "observation noise std-dev");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_build->parsed()) return cmd_build(o);
    if (c_verify->parsed()) return cmd_verify(o);
    if (c_err->parsed()) return cmd_approx_error(o);
    if (c_count->parsed()) return cmd_count(o, M);
    if (c_vc->parsed()) return cmd_vc_bound(o, t_direct, omega_direct);
    if (c_shatter->parsed()) return cmd_shatter(o, M, d0, cap);
    if (c_trade->parsed()) return cmd_tradeoff(o, factors);
    if (c_reg->parsed()) return cmd_regression(o, sweep_n, n_seeds, noise);
  } catch (const std::invalid_argument& e) {
    usage_fail(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 1;
}
