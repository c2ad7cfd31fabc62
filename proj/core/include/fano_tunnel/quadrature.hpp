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
#include <functional>
#include <span>
#include <vector>

namespace fano_tunnel::quad {

using RealFn = std::function<double(double)>;

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b]. The interval is split at
/// every entry of `breaks` lying strictly inside it. Throws QuadratureFailure
/// when the error estimate exceeds max(abs, rel * L1).
double integrate(const RealFn& f, double a, double b, std::span<const double> breaks = {},
                 Tolerance tol = {});

/// PV of int_a^b f(c) / (x - c) dc for a < x < b, folded symmetrically about x.
double pv_cauchy(const RealFn& f, double a, double b, double x,
                 std::span<const double> breaks = {}, Tolerance tol = {});

/// int_a^b f(c) / (x - c) dc for x outside [a, b] (log-substituted so the
/// integrand stays bounded when x approaches an edge).
double cauchy_outside(const RealFn& f, double a, double b, double x,
                      std::span<const double> breaks = {}, Tolerance tol = {});

/// int_a^b f(c) / (x - c)^2 dc for x outside [a, b].
double cauchy_outside_sq(const RealFn& f, double a, double b, double x,
                         std::span<const double> breaks = {}, Tolerance tol = {});

/// Bracketed root of f on [lo, hi] (TOMS 748). Throws RootNotBracketed when
/// f(lo) and f(hi) have the same strict sign.
double find_root(const RealFn& f, double lo, double hi, double abs_tol);
double find_root(const RealFn& f, double lo, double hi, double f_lo, double f_hi, double abs_tol);

/// Composite Gauss-Legendre rule: `order` nodes on each panel.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Panel edges of [a, b] with width <= max_width, always at least one panel.
std::vector<double> uniform_panels(double a, double b, double max_width);

/// Supported orders: 4, 5, 8.
Rule gauss_legendre(std::span<const double> panel_edges, int order);

}  // namespace fano_tunnel::quad
