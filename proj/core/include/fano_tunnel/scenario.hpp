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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/lindblad.hpp"
#include "fano_tunnel/model.hpp"

namespace fano_tunnel {

/// Version of the CSV column contract written in every file header.
inline constexpr int kOutputFormatVersion = 1;

enum class Preset { Fig1, Fig2, Fig3 };

enum class RunMethod { Closed, Quadrature, Oracle, Cme };

enum class OutputKind { TrajectoryCsv, RatesCsv, ComparisonJson, AdiabaticCsv };

enum class OutputFormat { Csv, Json };

/// Declarative run description. The file dialect is JSON:
///
///   {
///     "name": "fig3",
///     "preset": "fig3",                      optional, fills model/lindblad/grid
///     "model": {"epsilon": 1, "e0": 40, "eta_min": 0, "eta_max": 81,
///               "g": {"width": 2}, "g_prime": {"constant": 0.28},
///               "topology": "single"},
///     "lindblad": {"epsilon": 1, "gamma": 2, "gamma_prime": 0.5},
///     "methods": ["closed", "oracle", "cme"],
///     "oracle_bins": 4000,
///     "grid": {"t_start": 0, "t_end": 20, "n_points": 401},
///     "outputs": ["trajectory_csv", "rates_csv", "comparison_json"],
///     "adiabatic": {"cutoffs": [10, 100, 1000]}
///   }
///
/// Couplings: {"constant": g}, {"width": G} (g = sqrt(G / 2 pi)),
/// {"power_law": {"prefactor": p, "exponent": s}} or
/// {"tabulated": [[eta, g], ...]}. Explicit keys override preset values.
struct Scenario {
  std::string name = "scenario";
  std::optional<Preset> preset;
  std::optional<ModelParams> model;
  std::optional<LindbladParams> lindblad;
  std::vector<RunMethod> methods;
  TimeGrid grid;
  std::vector<OutputKind> outputs;
  std::size_t oracle_bins = 4000;
  std::vector<double> cutoffs;
};

/// Model, master-equation rates and grid of a figure preset: e0 = 20 G,
/// band [0, 40 G + eps], constant couplings from the widths.
Scenario preset_scenario(Preset preset);

/// Throws ConfigError with a diagnostic.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string to_json(const Scenario& scenario);

std::optional<Preset> preset_from_string(const std::string& s);
std::optional<RunMethod> method_from_string(const std::string& s);
std::string to_string(Preset preset);
std::string to_string(RunMethod method);
std::string to_string(OutputKind kind);

/// Replaces model, lindblad and grid by the preset's (name is kept unless
/// empty).
void apply_preset(Scenario& scenario, Preset preset);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::Csv;
};

struct RunResult {
  std::vector<std::filesystem::path> files;
};

/// Executes every requested method and writes the requested outputs.
/// Throws ConfigError for inconsistent requests and the numerical error
/// types for failures.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

/// Comparison report (JSON text) between the model methods and the master
/// equation: sup-norm differences, first-order check, exponential fits.
std::string compare_scenario(const Scenario& scenario);

/// Serializers used by run_scenario; exposed for tests.
std::string trajectory_csv(const Trajectory& trajectory, const std::string& header_note);
std::string adiabatic_csv(const Scenario& scenario);

}  // namespace fano_tunnel
