#include "tfa/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tfa {

using nlohmann::json;

json to_json(const ParamSelection& s) {
  return json{{"epsilon", s.epsilon},
              {"alpha", s.alpha},
              {"K", s.K},
              {"d", s.d},
              {"L", s.L},
              {"delta_max", s.delta_max},
              {"c2", s.c2},
              {"c3", s.c3},
              {"delta_star_max", s.delta_star_max},
              {"delta_star_max_c3", s.delta_star_max_c3},
              {"delta_star_binding", s.delta_star_binding},
              {"delta", s.delta},
              {"delta_star", s.delta_star},
              {"M", s.M}};
}

json to_json(const SeparationCert& c) {
  return json{{"r_min", c.r_min},
              {"r_max", c.r_max},
              {"beta", c.beta},
              {"r", c.r},
              {"delta0", c.delta0},
              {"kappa", c.kappa},
              {"log_gamma_theory", c.log_gamma_theory},
              {"log_gamma_theory_closed", c.log_gamma_theory_closed},
              {"log_gamma_emp", c.log_gamma_emp},
              {"gamma_emp", c.gamma_emp},
              {"vocab_size", c.vocab_size},
              {"vocab_distinct", c.vocab_distinct},
              {"all_distinct", c.all_distinct},
              {"max_id_norm", c.max_id_norm},
              {"min_distinct_token_dist", c.min_distinct_token_dist},
              {"max_head_shift", c.max_head_shift},
              {"separation_margin_nats", c.separation_margin_nats}};
}

json to_json(const CountReport& c) {
  json parts = json::array();
  for (const PartCount& p : c.per_part)
    parts.push_back(json{{"part", p.part}, {"ops", p.ops}, {"params", p.params}});
  return json{{"d", c.d},
              {"L", c.L},
              {"M", c.M},
              {"per_part", parts},
              {"t", c.t},
              {"omega", c.omega},
              {"taxonomy",
               json{{"exponentials", c.taxonomy.exps},
                    {"arithmetic", c.taxonomy.arithmetic},
                    {"jumps", c.taxonomy.jumps},
                    {"outputs", c.taxonomy.outputs}}}};
}

json to_json(const L2ErrorEstimate& e) {
  return json{{"err_on_cubes", e.err_on_cubes},
              {"err_total", e.err_total},
              {"ci95_cubes", e.ci95_cubes},
              {"ci95_total", e.ci95_total},
              {"err_total_upper95", e.err_total_upper95},
              {"cube_measure", e.cube_measure},
              {"n_samples", e.n_samples}};
}

json to_json(const RegressionRunReport& r) {
  return json{{"N", r.N},
              {"epsilon", r.epsilon},
              {"D", r.D},
              {"empirical_excess", r.empirical_excess},
              {"e_app", r.e_app},
              {"e_app_sq", r.e_app * r.e_app},
              {"e_sta_bound", r.e_sta_bound},
              {"empty_cells", r.empty_cells},
              {"total_cells", r.total_cells},
              {"coverage", r.coverage},
              {"gap_train_points", r.gap_train_points}};
}

json grid_to_json(const GridSpec& g) {
  return json{{"delta", g.delta}, {"delta_star", g.delta_star}, {"M", g.M}, {"d", g.d}, {"L", g.L}};
}

json build_report(const TransformerNetwork& net) {
  json j{{"grid", grid_to_json(net.grid)},
         {"D", net.block_count()},
         {"cert", to_json(net.cert)},
         {"n_anchors", net.value.params.n_anchors},
         {"target_K", net.target_K}};
  if (net.selection) j["selection"] = to_json(*net.selection);
  return j;
}

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json network_to_json(const TransformerNetwork& net, bool include_tables) {
  json layers = json::array();
  for (const RampLayer& rl : net.quantizer.layers)
    layers.push_back(json{{"i", rl.i}, {"j", rl.j}, {"k", rl.k}, {"b", rl.b},
                          {"d2", rl.d2}, {"d3", rl.d3}, {"m1", rl.m1}, {"m2", rl.m2}});
  json ctx{{"v", net.context.v},
           {"uu", net.context.uu},
           {"w_o_scale", net.context.w_o_scale},
           {"r_min", net.context.r_min},
           {"r_max", net.context.r_max},
           {"beta", net.context.beta},
           {"vocab_formula", net.context.vocab_formula}};
  json value{{"log_gamma1", net.value.params.log_gamma1},
             {"log_gamma2", net.value.params.log_gamma2},
             {"label", net.value.params.label},
             {"label_printed", net.value.params.label_printed},
             {"shift", net.value.params.shift},
             {"r", net.value.params.r},
             {"K", net.value.params.K},
             {"n_anchors", net.value.params.n_anchors}};
  if (include_tables) {
    json anchors = json::array();
    json targets = json::array();
    for (const Mat& a : net.value.anchors) anchors.push_back(mat_to_json(a));
    for (const Mat& y : net.value.targets) targets.push_back(mat_to_json(y));
    value["anchors"] = std::move(anchors);
    value["targets"] = std::move(targets);
  }
  return json{{"schema", 1},
              {"grid", grid_to_json(net.grid)},
              {"quantizer", json{{"merge_width", net.quantizer.merge_width}, {"layers", layers}}},
              {"context", ctx},
              {"value", value},
              {"D", net.block_count()}};
}

std::string csv_to_string(const CsvTable& t) {
  if (t.rows.empty()) throw std::invalid_argument("csv_to_string: empty sweep");
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  char buf[64];
  for (const std::vector<double>& row : t.rows) {
    if (row.size() != t.columns.size()) throw std::invalid_argument("csv_to_string: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof(buf), "%.12g", row[c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_text_file: cannot open " + path);
  f << contents;
}

}  // namespace tfa
