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

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/model.hpp"

namespace fano_tunnel {

struct LindbladParams {
  double epsilon = 1.0;
  double gamma = 0.0;
  double gamma_prime = 0.0;
};

/// Throws DomainError for negative rates or non-finite values.
void check(const LindbladParams& params);

/// Single-damping solution: rho_++ = e^{-g t}/2, rho_+- = e^{-i eps t - g t/2}/2.
/// Requires gamma_prime = 0 (DomainError otherwise).
ReducedDensity solve_single_closed(const LindbladParams& params, double t);

/// The two-rate solution as printed, including its rho_+- with the
/// 2 sqrt(eps^2 - g g') frequency. It does not solve the equation it
/// accompanies (see integrate_cme); kept for comparison only. Throws
/// DomainError at eps^2 = g g'.
ReducedDensity solve_combined_closed(const LindbladParams& params, double t);

/// Right-hand side of the two-rate master equation at rho.
DensityRate cme_rate(const LindbladParams& params, const ReducedDensity& rho);

/// Dormand-Prince integration of the two-rate master equation in Bloch
/// coordinates from rho(0) = |l><l| (abs tol 1e-12, rel tol 1e-10).
/// Throws IntegratorFailure.
Trajectory integrate_cme(const LindbladParams& params, const TimeGrid& grid);

struct ComparisonReport {
  double t = 0.0;
  /// d rho_++/dt at t = 0 from the exact model and the master equation.
  double model_linear = 0.0;
  double master_linear = 0.0;
  bool linear_agree = false;
  /// max(|d rho_++|, |d rho_+-|) between the full solutions at t and 2t.
  double residual = 0.0;
  double residual_double = 0.0;
  double richardson_ratio = 0.0;
  double diagonal_residual = 0.0;
};

/// Compares the model's two-relaxation-time closed form (widths G, G',
/// frequency eps) with the integrated master equation at gamma = G,
/// gamma' = G'.
ComparisonReport first_order_compare(const LindbladParams& params, double gamma_model,
                                     double gamma_prime_model, double t,
                                     Topology topology = Topology::SingleContinuum);

}  // namespace fano_tunnel
