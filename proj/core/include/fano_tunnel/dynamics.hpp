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

#include <optional>
#include <vector>

#include "fano_tunnel/model.hpp"

namespace fano_tunnel {

enum class EvolutionMethod { ClosedForm, Quadrature, Oracle };

/// Exact time derivative of a reduced density, when one is available.
struct DensityRate {
  double d_rho_pp = 0.0;
  Complex d_rho_pm{0.0, 0.0};
};

struct TrajectoryPoint {
  double t = 0.0;
  ReducedDensity rho;
  double P = 0.0;
  double delta = 0.0;
  /// Set by producers that can differentiate their own output exactly.
  std::optional<DensityRate> d_rho;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// P = (1 - 2 Re rho_+-)/2, the population of |r>.
double tunneling_probability(const ReducedDensity& rho);

/// delta = 2 det rho, clipped to 0 inside the positivity slack.
/// Throws PositivityViolation below it.
double idempotency_defect(const ReducedDensity& rho);

/// Builds a point with P and delta filled in.
TrajectoryPoint make_point(double t, const ReducedDensity& rho,
                           std::optional<DensityRate> d_rho = std::nullopt);

/// Breit-Wigner single relaxation: rho_++ = e^{-G t}/2,
/// rho_+- = e^{-i omega t - G t/2}/2 with omega = e_R - e0.
ReducedDensity closed_single(double gamma, double omega, double t);
DensityRate closed_single_rate(double gamma, double omega, double t);

/// Breit-Wigner two relaxation times with omega = e_R - e'_R. The
/// re-correlation term 2 sqrt(G G')/(G + G') e^{i omega t}(1 - e^{-(G+G')t/2})
/// is dropped for orthogonal continua.
ReducedDensity closed_two(double gamma, double gamma_prime, double omega, double t,
                          Topology topology);
DensityRate closed_two_rate(double gamma, double gamma_prime, double omega, double t,
                            Topology topology);

/// Steady-state coefficient 2 sqrt(G G')/(G + G') (0 for orthogonal continua).
double recorrelation_coefficient(double gamma, double gamma_prime, Topology topology);

/// t -> infinity limit of delta. Throws DomainError when either width is 0.
double delta_asymptote(double gamma, double gamma_prime, Topology topology);

/// Widths and frequency the closed forms are evaluated with.
struct ClosedFormParams {
  double gamma = 0.0;
  double gamma_prime = 0.0;
  double omega = 0.0;
  Topology topology = Topology::SingleContinuum;
};

/// Throws MethodUnavailable for non-constant couplings or when the
/// broad-band check warns.
ClosedFormParams closed_form_params(const ModelParams& params);

struct EvolveOptions {
  std::size_t oracle_bins = 4000;
};

/// Diagnostics of the Quadrature path.
struct QuadratureDiagnostics {
  std::size_t energy_nodes = 0;
  std::size_t time_nodes = 0;
  /// max over grid times of |1 - |alpha|^2 - int |g a_t|^2| (and for beta);
  /// only filled when the re-correlation term is computed.
  double norm_defect = 0.0;
  /// |alpha(0)| and |beta(0)| minus one: completeness of the energy grid.
  double completeness_defect = 0.0;
};

/// Reduced density from rho(0) = |l><l| on every grid sample.
Trajectory evolve(const ModelParams& params, const TimeGrid& grid, EvolutionMethod method,
                  const EvolveOptions& options = {});

Trajectory evolve_quadrature(const ModelParams& params, const TimeGrid& grid,
                             QuadratureDiagnostics* diagnostics = nullptr);

}  // namespace fano_tunnel
