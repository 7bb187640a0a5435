#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tfa/report.hpp"

using namespace tfa;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TransformerNetwork fixture_net() {
  HolderTarget t = holder_by_id("bump", 0.5, 1.0, 2, 2);
  BuildOptions opts;
  opts.seed = 7;
  return build_approximator_manual(t, 0.4, 0.1, 1, 2, opts);
}

}  // namespace

TEST_CASE("csv emission is deterministic and validates") {
  CsvTable t;
  t.columns = {"x", "y", "ci_lo", "ci_hi"};
  t.rows = {{0.7, 0.31, 0.30, 0.32}, {0.5, 0.22, 0.21, 0.23}, {1.0 / 3.0, 0.1, 0.09, 0.11},
            {0.25, 0.08, 0.07, 0.09}};
  std::string a = csv_to_string(t);
  std::string b = csv_to_string(t);
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) == "x,y,ci_lo,ci_hi");
  CHECK(a.find("0.333333333333") != std::string::npos);
  // four data rows plus the header
  CHECK(std::count(a.begin(), a.end(), '\n') == 5);

  CsvTable empty;
  empty.columns = {"x", "y"};
  CHECK_THROWS_AS(csv_to_string(empty), std::invalid_argument);
  CsvTable ragged;
  ragged.columns = {"x", "y"};
  ragged.rows = {{1.0}};
  CHECK_THROWS_AS(csv_to_string(ragged), std::invalid_argument);
}

TEST_CASE("build report carries the certificate and dimensions") {
  TransformerNetwork net = fixture_net();
  nlohmann::json j = build_report(net);
  CHECK(j["D"] == 22);
  CHECK(j["grid"]["M"] == 2);
  CHECK(j["cert"]["vocab_size"] == 8);
  CHECK(j["cert"]["all_distinct"] == true);
  CHECK(j["cert"].contains("log_gamma_emp"));
  CHECK(j["cert"].contains("gamma_emp"));
  CHECK(j["cert"].contains("kappa"));
}

TEST_CASE("network serialization round-trips deterministically") {
  TransformerNetwork a = fixture_net();
  TransformerNetwork b = fixture_net();
  nlohmann::json ja = network_to_json(a, true);
  nlohmann::json jb = network_to_json(b, true);
  CHECK(ja.dump() == jb.dump());
  CHECK(ja["schema"] == 1);
  CHECK(ja["quantizer"]["layers"].size() == 4);
  CHECK(ja["value"]["anchors"].size() == 4);
}

TEST_CASE("serialization matches the committed golden file") {
  TransformerNetwork net = fixture_net();
  std::string got = network_to_json(net, true).dump(2) + "\n";
  std::string want = read_file(std::string(TFA_TEST_DATA_DIR) + "/network_d1L2M2.json");
  CHECK(got == want);
}
