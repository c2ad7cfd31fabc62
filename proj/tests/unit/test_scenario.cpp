// Copyright 2026 The fano-tunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/scenario.hpp"

using namespace fano_tunnel;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("fano_tunnel_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data rows of a CSV written by the runner (comment and header lines skipped).
std::vector<std::vector<double>> rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<double>> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("presets expand to the figure parameters") {
    const auto s1 = preset_scenario(Preset::Fig1);
    REQUIRE(s1.model.has_value());
    CHECK(s1.model->e0 == doctest::Approx(6.0));
    CHECK(s1.model->eta_max == doctest::Approx(13.0));
    CHECK(s1.lindblad->gamma == 0.3);
    CHECK(s1.lindblad->gamma_prime == 0.0);
    const auto s3 = preset_scenario(Preset::Fig3);
    CHECK(s3.lindblad->gamma == 2.0);
    CHECK(s3.lindblad->gamma_prime == 0.5);
    CHECK(s3.grid.t_end == 20.0);
    CHECK(preset_from_string("fig2") == Preset::Fig2);
    CHECK_FALSE(preset_from_string("fig4").has_value());
  }

  TEST_CASE("round trip through the JSON dialect") {
    const auto text = R"({"name": "rt", "preset": "fig3", "methods": ["closed", "cme", "oracle"],
      "oracle_bins": 600, "grid": {"t_start": 0, "t_end": 5, "n_points": 11},
      "outputs": ["trajectory_csv", "rates_csv", "comparison_json", "adiabatic_csv"],
      "model": {"epsilon": 1, "e0": 40, "eta_min": 0, "eta_max": 81,
                "g": {"width": 2}, "g_prime": {"power_law": {"prefactor": 0.01, "exponent": 0.5}}},
      "adiabatic": {"cutoffs": [10, 100]}})";
    const auto s = parse_scenario(text);
    CHECK(s.oracle_bins == 600);
    CHECK(s.grid.n_points == 11);
    CHECK(s.methods.size() == 3);
    CHECK(s.cutoffs.size() == 2);
    const auto once = to_json(s);
    CHECK(to_json(parse_scenario(once)) == once);
  }

  TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(parse_scenario(""), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[]"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"preset": "fig1", "colour": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"preset": "fig1", "methods": ["magic"]})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"name": "x", "methods": ["closed"]})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"name": "../x", "preset": "fig1"})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"preset": "fig1", "grid": {"t_start": 0, "t_end": 1, "n_points": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"preset": "fig1", "oracle_bins": 3, "methods": ["oracle"]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"preset": "fig1", "outputs": ["adiabatic_csv"]})"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
  }

  TEST_CASE("runner writes versioned files") {
    const auto dir = scratch_dir("run");
    auto s = parse_scenario(R"({"name": "f1", "preset": "fig1", "methods": ["closed", "cme"],
      "outputs": ["trajectory_csv", "rates_csv"]})");
    const auto res = run_scenario(s, {dir, OutputFormat::Csv});
    CHECK(res.files.size() == 4);
    const auto traj = dir / "f1_closed_trajectory.csv";
    REQUIRE(fs::exists(traj));
    const auto text = slurp(traj);
    CHECK(text.rfind("# fano-tunnel trajectory v1", 0) == 0);
    CHECK(text.find("t,rho_pp,re_rho_pm,im_rho_pm,P,delta\n") != std::string::npos);
    const auto r = rows(traj);
    REQUIRE(r.size() == 801);
    CHECK(r.front()[1] == doctest::Approx(0.5));
    // Single width: the oscillation of P about 1/2 decays like e^{-G t/2}.
    for (const auto& row : r) CHECK(std::abs(row[4] - 0.5) <= 0.5 * std::exp(-0.15 * row[0]) + 1e-12);
    CHECK(fs::exists(dir / "f1_cme_rates.csv"));

    const auto js = run_scenario(s, {dir, OutputFormat::Json});
    const auto j = nlohmann::json::parse(slurp(dir / "f1_closed_trajectory.json"));
    CHECK(j["version"] == kOutputFormatVersion);
    CHECK(j["rows"].size() == 801);
    CHECK(js.files.size() == 4);
  }

  TEST_CASE("decoherence dominates the earliest rates at large width") {
    const auto dir = scratch_dir("fig2");
    auto s = parse_scenario(R"({"name": "f2", "preset": "fig2", "methods": ["closed"],
      "outputs": ["rates_csv"]})");
    run_scenario(s, {dir, OutputFormat::Csv});
    const auto r = rows(dir / "f2_closed_rates.csv");
    REQUIRE(r.size() == 401);
    // columns: t, P, P_dot, R_d, R_u, ...
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i][0] <= 0.05 + 1e-12) CHECK(std::abs(r[i][3]) > std::abs(r[i][4]));
    }
  }

  TEST_CASE("comparison report") {
    auto s = parse_scenario(R"({"name": "cmp", "preset": "fig3",
      "grid": {"t_start": 0, "t_end": 10, "n_points": 201}})");
    const auto j = nlohmann::json::parse(compare_scenario(s));
    CHECK(j.contains("sup_norm_diffs"));
    CHECK(j.contains("fit_residuals"));
    CHECK(j.contains("first_order"));
    REQUIRE(j["checks"].is_array());
    for (const auto& c : j["checks"]) {
      INFO(c.dump());
      CHECK(c["pass"].get<bool>());
    }
    // Model and master equation differ at second order in t only.
    CHECK(j["sup_norm_diffs"]["closed_vs_cme"].get<double>() > 1e-3);
  }

  TEST_CASE("adiabatic table") {
    auto s = parse_scenario(R"({"name": "ad", "model": {"epsilon": 1, "e0": 0, "eta_min": 0, "eta_max": 10,
      "g": {"power_law": {"prefactor": 0.001, "exponent": 0.5}}, "g_prime": {"constant": 0}},
      "methods": ["closed"], "outputs": ["adiabatic_csv"], "adiabatic": {"cutoffs": [1, 10, 100]}})");
    const auto csv = adiabatic_csv(s);
    CHECK(csv.find("cutoff") != std::string::npos);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines >= 4);
  }
}
