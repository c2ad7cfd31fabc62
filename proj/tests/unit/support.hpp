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

#include <cmath>
#include <complex>
#include <random>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/model.hpp"

namespace fano_tunnel::test {

inline double rho_distance(const ReducedDensity& a, const ReducedDensity& b) {
  return std::max(std::abs(a.rho_pp - b.rho_pp), std::abs(a.rho_pm - b.rho_pm));
}

inline double sup_distance(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, rho_distance(a[i].rho, b[i].rho));
  }
  return worst;
}

/// Broad-band constant-coupling model with level margins of 20 widths.
inline ModelParams broad_band(double gamma, double gamma_prime, double eps = 1.0,
                              Topology topology = Topology::SingleContinuum) {
  const double w = std::max(gamma, gamma_prime);
  ModelParams p;
  p.epsilon = eps;
  p.e0 = 20.0 * w;
  p.eta_min = 0.0;
  p.eta_max = 40.0 * w + eps;
  p.g = CouplingFn::from_width(gamma);
  p.g_prime = CouplingFn::from_width(gamma_prime);
  p.topology = topology;
  return p;
}

/// Random physical density: Bloch vector inside the unit ball.
inline ReducedDensity random_density(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BlochVector b;
  do {
    b = {u(rng), u(rng), u(rng)};
  } while (b.norm() > 1.0);
  return rho_from_bloch(b);
}

}  // namespace fano_tunnel::test
