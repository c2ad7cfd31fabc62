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

// Command line runner for scenario files.
//
//   fano_tunnel run <scenario> [--out-dir DIR] [--preset fig1|fig2|fig3]
//                   [--method closed|quadrature|oracle|cme] [--format csv|json]
//   fano_tunnel compare <scenario> [--out-dir DIR]
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure. Every
// run leaves <name>_report.json in the output directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/scenario.hpp"

namespace ft = fano_tunnel;
namespace fs = std::filesystem;

namespace {

struct Request {
  std::string command;
  std::string scenario_file;
  std::string out_dir = ".";
  std::string preset;
  std::string method;
  std::string format = "csv";
};

void write_report(const fs::path& dir, const std::string& name, const nlohmann::json& report) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / (name + "_report.json"), std::ios::binary);
  out << report.dump(2) << "\n";
}

int execute(const Request& req) {
  ft::Scenario scenario;
  try {
    // Overrides are applied to the document before validation, so a file
    // that only names a scenario becomes complete with --preset.
    std::ifstream in(req.scenario_file, std::ios::binary);
    if (!in) throw ft::ConfigError("cannot open scenario file " + req.scenario_file);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      scenario = ft::parse_scenario(text);  // reports the parse error
    }
    if (!req.preset.empty()) {
      if (!ft::preset_from_string(req.preset)) throw ft::ConfigError("unknown preset " + req.preset);
      // The preset replaces model, master-equation rates and grid.
      doc["preset"] = req.preset;
      for (const char* key : {"model", "lindblad", "grid"}) doc.erase(key);
    }
    if (!req.method.empty()) {
      if (!ft::method_from_string(req.method)) throw ft::ConfigError("unknown method " + req.method);
      doc["methods"] = nlohmann::json::array({req.method});
    }
    scenario = ft::parse_scenario(doc.dump());
  } catch (const ft::Error& e) {
    fmt::print(stderr, "{}: {}\n", e.name(), e.what());
    return 1;
  }

  nlohmann::json report{{"scenario", scenario.name}, {"command", req.command}};
  try {
    if (req.command == "compare") {
      const auto text = ft::compare_scenario(scenario);
      fs::create_directories(req.out_dir);
      const auto path = fs::path(req.out_dir) / (scenario.name + "_comparison.json");
      std::ofstream(path, std::ios::binary) << text;
      std::cout << text;
      report["files"] = {path.filename().string()};
    } else {
      ft::RunOptions options;
      options.out_dir = req.out_dir;
      options.format = req.format == "json" ? ft::OutputFormat::Json : ft::OutputFormat::Csv;
      const auto result = ft::run_scenario(scenario, options);
      report["files"] = nlohmann::json::array();
      for (const auto& f : result.files) {
        report["files"].push_back(f.filename().string());
        fmt::print("{}\n", f.string());
      }
    }
  } catch (const ft::ConfigError& e) {
    report["status"] = "config_error";
    report["error"] = {{"name", e.name()}, {"message", e.what()}};
    write_report(req.out_dir, scenario.name, report);
    fmt::print(stderr, "{}: {}\n", e.name(), e.what());
    return 1;
  } catch (const ft::Error& e) {
    report["status"] = "numerical_failure";
    report["error"] = {{"name", e.name()}, {"message", e.what()}};
    write_report(req.out_dir, scenario.name, report);
    fmt::print(stderr, "{}: {}\n", e.name(), e.what());
    return 2;
  }
  report["status"] = "ok";
  write_report(req.out_dir, scenario.name, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tunneling two-level system coupled to a continuum"};
  app.require_subcommand(1);
  Request req;

  auto* run = app.add_subcommand("run", "Run a scenario and write trajectory/rate/report files");
  run->add_option("scenario", req.scenario_file, "Scenario file (JSON)")->required();
  run->add_option("--out-dir", req.out_dir, "Output directory");
  run->add_option("--preset", req.preset, "Figure preset")->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  run->add_option("--method", req.method, "Evolution method")
      ->check(CLI::IsMember({"closed", "quadrature", "oracle", "cme"}));
  run->add_option("--format", req.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* compare = app.add_subcommand("compare", "Compare the exact model with the master equation");
  compare->add_option("scenario", req.scenario_file, "Scenario file (JSON)")->required();
  compare->add_option("--out-dir", req.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  req.command = run->parsed() ? "run" : "compare";
  return execute(req);
}
