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

#include <span>
#include <string>
#include <vector>

#include "fano_tunnel/model.hpp"

namespace fano_tunnel {

/// Lowest adiabatic doublet of the continuum model.
struct AdiabaticResult {
  double cutoff = 0.0;
  double E0 = 0.0;
  double a0_sq = 1.0;
  /// (1/4) int g^2 / (E0 - eta)^2 d eta.
  double I = 0.0;
  /// (1 - I) / (1 + I).
  double overlap = 1.0;
  /// epsilon * overlap.
  double effective_splitting = 0.0;
  std::vector<std::string> warnings;
};

/// Root E0 < eta_min of E0 - e0 = int g^2 / (E0 - eta) d eta.
/// Throws NoRoot when the dispersion function has no sign change below the
/// band, DomainError for a power-law exponent outside [0, 1).
double dispersion_root(const ModelParams& params);

AdiabaticResult overlap_factor(const ModelParams& params);

/// overlap_factor for each cutoff (eta_max); cutoffs must increase strictly.
std::vector<AdiabaticResult> cutoff_sweep(const ModelParams& params,
                                          std::span<const double> cutoffs);

}  // namespace fano_tunnel
