#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qlrs/cli.hpp"
#include "qlrs/molecule.hpp"

using namespace qlrs;

TEST_SUITE_BEGIN("cli");

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 3));
}

}  // namespace

TEST_CASE("catalog list and show") {
  const CliResult list = run({"catalog", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("C3HN+") != std::string::npos);
  CHECK(list.out.find("Ba138") != std::string::npos);

  const CliResult show = run({"catalog", "show", "C3HN+"});
  CHECK(show.code == 0);
  CHECK(show.out.find("nu1") != std::string::npos);
  CHECK(show.out.find("3259") != std::string::npos);
  CHECK(show.out.find("nu4") != std::string::npos);
  CHECK(show.out.find("911") != std::string::npos);
  CHECK(show.out.find("default_ion = Ca40") != std::string::npos);

  const CliResult missing = run({"catalog", "show", "NOPE"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("not found") != std::string::npos);
}

TEST_CASE("catalog validation") {
  const std::string good = "qlrs_cli_good.json";
  save_catalog(builtin_catalog(), good);
  CHECK(run({"catalog", "validate", good}).code == 0);
  std::remove(good.c_str());

  const std::string bad = "qlrs_cli_bad.json";
  {
    std::ofstream f(bad);
    f << R"({"molecules": [{"name": "X", "mass_da": 1, "surprise": 1, "modes": []}],)"
      << R"( "ions": []})";
  }
  CHECK(run({"catalog", "validate", bad}).code == 2);
  std::remove(bad.c_str());

  CHECK(run({"catalog", "validate", "missing_file.json"}).code == 2);
}

TEST_CASE("detect with angle optimization matches the reference cell") {
  const CliResult r =
      run({"detect", "--molecule", "NH3+", "--heating", "0.1", "--optimize-angle"});
  REQUIRE(r.code == 0);
  const double eff = value_after(r.out, "efficiency");
  CHECK(std::abs(eff - 0.94) <= 0.05);
  CHECK(r.out.find("alpha_star") != std::string::npos);
  CHECK(r.out.find("duration_us") != std::string::npos);
  // NH3+/Ca40 has mass ratio < 0.5: warned, not fatal
  CHECK(r.err.find("mass ratio") != std::string::npos);
}

TEST_CASE("detect headline cell") {
  const CliResult r = run({"detect", "--molecule", "C3HN+", "--mode", "nu3", "--heating",
                           "0.1", "--optimize-angle"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(value_after(r.out, "efficiency") - 0.49) <= 0.05);
}

TEST_CASE("detect trivial zero case") {
  const CliResult r = run({"detect", "--molecule", "C3HN+", "--mode", "nu3", "--heating",
                           "0", "--angle", "0", "--alpha", "0"});
  REQUIRE(r.code == 0);
  CHECK(value_after(r.out, "efficiency") == 0.0);
}

TEST_CASE("detect rejects unknown names and flags") {
  CHECK(run({"detect", "--molecule", "NOPE", "--heating", "1", "--optimize-angle"}).code ==
        2);
  CHECK(run({"detect", "--molecule", "NH3+", "--heating", "1", "--frobnicate"}).code == 2);
  // infeasible fixed point: alpha above the reachable cap
  CHECK(run({"detect", "--molecule", "C3HN+", "--mode", "nu3", "--heating", "1", "--angle",
             "0", "--alpha", "50"})
            .code == 3);
}

TEST_CASE("spectrum output is deterministic and format consistent") {
  const std::vector<std::string> base = {
      "spectrum", "--molecule", "C3HN+", "--from", "1850", "--to", "1930",
      "--step",   "40",         "--heating", "0.1"};
  const CliResult a = run(base);
  const CliResult b = run(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);  // byte identical

  std::vector<std::string> json_args = base;
  json_args.push_back("--format");
  json_args.push_back("json");
  const CliResult j = run(json_args);
  REQUIRE(j.code == 0);

  // cross-parse: identical numeric content
  const auto doc = nlohmann::json::parse(j.out);
  std::istringstream csv(a.out);
  std::string line;
  std::vector<std::vector<double>> csv_rows;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#' || line.find("wavenumber") == 0) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    csv_rows.push_back(row);
  }
  REQUIRE(csv_rows.size() == doc["rows"].size());
  for (size_t i = 0; i < csv_rows.size(); ++i) {
    for (size_t k = 0; k < csv_rows[i].size(); ++k) {
      const double jv = doc["rows"][i][k].get<double>();
      CHECK(std::abs(jv - csv_rows[i][k]) <=
            1e-12 * std::max(1.0, std::abs(csv_rows[i][k])));
    }
  }

  CHECK(run({"spectrum", "--molecule", "C3HN+", "--from", "2000", "--to", "1000", "--step",
             "10", "--heating", "0.1"})
            .code == 2);
}

TEST_CASE("pump-probe curve through the CLI") {
  const CliResult r = run({"pumpprobe", "--molecule", "NH3+", "--heating", "0.1", "--tau1",
                           "5e-12", "--delays", "0:50e-12:11"});
  REQUIRE(r.code == 0);

  std::istringstream csv(r.out);
  std::string line;
  std::vector<std::pair<double, double>> rows;
  double p2 = -1.0;
  while (std::getline(csv, line)) {
    if (line.rfind("# two_photon_efficiency=", 0) == 0) {
      p2 = std::stod(line.substr(line.find('=') + 1));
    }
    if (line.empty() || line[0] == '#' || line.find("delay") == 0) continue;
    std::stringstream ls(line);
    std::string a, b;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    rows.emplace_back(std::stod(a), std::stod(b));
  }
  REQUIRE(rows.size() == 11);
  REQUIRE(p2 > 0.0);
  CHECK(rows[0].second == 0.0);                       // zero delay
  CHECK(std::abs(p2 - 0.99) <= 0.05);                 // saturation level
  CHECK(rows.back().second == doctest::Approx(p2 * (1.0 - std::exp(-10.0))).epsilon(1e-9));

  // midpoint at tau1 ln 2 gives half the saturation value
  const CliResult mid = run({"pumpprobe", "--molecule", "NH3+", "--heating", "0.1",
                             "--tau1", "5e-12", "--delays", "3.4657359027997265e-12:1e-11:1",
                             "--format", "json"});
  REQUIRE(mid.code == 0);
  const auto doc = nlohmann::json::parse(mid.out);
  const double p_mid = doc["rows"][0][1].get<double>();
  CHECK(p_mid == doctest::Approx(0.5 * p2).epsilon(1e-6));

  CHECK(run({"pumpprobe", "--molecule", "NH3+", "--heating", "0.1", "--tau1", "0",
             "--delays", "0:1:2"})
            .code == 2);
}

TEST_CASE("tables command emits the reproduction grid with metadata") {
  const CliResult r = run({"tables", "--which", "2", "--heating-rates", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# catalog_hash=") != std::string::npos);
  CHECK(r.out.find("# trap_frequency_khz=500") != std::string::npos);
  CHECK(r.out.find("# rabi_cap_khz=300") != std::string::npos);
  CHECK(r.out.find("C9H11NO2+") != std::string::npos);

  int data_rows = 0;
  std::istringstream csv(r.out);
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty() && line[0] != '#' && line.find("molecule") != 0) ++data_rows;
  }
  CHECK(data_rows == 6);
}

TEST_CASE("catalog override via environment variable") {
  const std::string path = "qlrs_cli_env_catalog.json";
  Catalog small;
  small.molecules = {{"D2+", 4.0, {{"nu1", 1577.0, 1.0, ModeModel::harmonic, {}}}}};
  small.ions = {{"Be9", 9.0, 313e-9}};
  save_catalog(small, path);
  setenv("QLS_CATALOG", path.c_str(), 1);
  const CliResult r = run({"catalog", "list"});
  unsetenv("QLS_CATALOG");
  std::remove(path.c_str());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("D2+") != std::string::npos);
  CHECK(r.out.find("C3HN+") == std::string::npos);
}

TEST_CASE("output to file") {
  const std::string path = "qlrs_cli_out.csv";
  const CliResult r = run({"tables", "--which", "2", "--heating-rates", "0.1", "--out",
                           path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str().find("efficiency") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("version flag") {
  const CliResult r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(version) != std::string::npos);
}

TEST_SUITE_END();
