#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tfa/bounds.hpp"
#include "tfa/context.hpp"
#include "tfa/counting.hpp"
#include "tfa/error_mc.hpp"
#include "tfa/grid.hpp"
#include "tfa/network.hpp"

namespace tfa {

nlohmann::json to_json(const ParamSelection& s);
nlohmann::json to_json(const SeparationCert& c);
nlohmann::json to_json(const CountReport& c);
nlohmann::json to_json(const L2ErrorEstimate& e);
nlohmann::json to_json(const RegressionRunReport& r);
nlohmann::json grid_to_json(const GridSpec& g);

// Build report: dimensions, widths, certificate, block count.
nlohmann::json build_report(const TransformerNetwork& net);

// Full weight-level serialization. include_tables controls the value-mapping
// anchor/target arrays (they grow as M^{d0}).
nlohmann::json network_to_json(const TransformerNetwork& net, bool include_tables = true);

// Deterministic CSV emission: fixed column order, "%.12g" cells, '\n' line
// ends. Identical inputs give identical bytes.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string csv_to_string(const CsvTable& t);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace tfa
