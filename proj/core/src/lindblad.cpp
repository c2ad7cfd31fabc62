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

#include "fano_tunnel/lindblad.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"

namespace fano_tunnel {

namespace {

using State = std::array<double, 3>;

// Bloch form with S = g + g', k = sqrt(g g'):
//   bx' = -eps by - (S/2 - k) bx
//   by' =  eps bx - (S/2 + k) by
//   bz' = -S bz - (g - g')
State bloch_rhs(const LindbladParams& p, const State& b) {
  const double s = p.gamma + p.gamma_prime;
  const double k = std::sqrt(p.gamma * p.gamma_prime);
  return {-p.epsilon * b[1] - (0.5 * s - k) * b[0],
          p.epsilon * b[0] - (0.5 * s + k) * b[1],
          -s * b[2] - (p.gamma - p.gamma_prime)};
}

ReducedDensity to_rho(const State& b) { return rho_from_bloch({b[0], b[1], b[2]}); }

}  // namespace

void check(const LindbladParams& p) {
  if (!std::isfinite(p.epsilon) || !std::isfinite(p.gamma) || !std::isfinite(p.gamma_prime)) {
    throw DomainError("master-equation parameters must be finite");
  }
  if (p.gamma < 0.0 || p.gamma_prime < 0.0) throw DomainError("damping rates must be >= 0");
}

ReducedDensity solve_single_closed(const LindbladParams& p, double t) {
  check(p);
  if (p.gamma_prime != 0.0) throw DomainError("single-damping solution needs gamma' = 0");
  return {0.5 * std::exp(-p.gamma * t),
          0.5 * std::exp(Complex{-0.5 * p.gamma * t, -p.epsilon * t})};
}

ReducedDensity solve_combined_closed(const LindbladParams& p, double t) {
  check(p);
  const double s = p.gamma + p.gamma_prime;
  const double k = std::sqrt(p.gamma * p.gamma_prime);
  const double disc = p.epsilon * p.epsilon - p.gamma * p.gamma_prime;
  if (disc == 0.0) throw DomainError("printed solution is singular at eps^2 = gamma gamma'");
  ReducedDensity rho;
  const double decay = std::exp(-s * t);
  rho.rho_pp = s == 0.0 ? 0.5 : 0.5 * decay + p.gamma_prime / s * (1.0 - decay);
  const Complex w = std::sqrt(Complex{disc, 0.0});
  const Complex arg = 2.0 * w * t;
  rho.rho_pm = decay / (2.0 * w) *
               (k - Complex{0.0, p.epsilon} * std::sin(arg) + w * std::cos(arg));
  return rho;
}

DensityRate cme_rate(const LindbladParams& p, const ReducedDensity& rho) {
  const BlochVector b = bloch_from_rho(rho);
  const State d = bloch_rhs(p, {b.x, b.y, b.z});
  return {0.5 * d[2], Complex{0.5 * d[0], -0.5 * d[1]}};
}

Trajectory integrate_cme(const LindbladParams& p, const TimeGrid& grid) {
  check(p);
  grid.check();
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-13, 1e-12, ode::runge_kutta_dopri5<State>());
  auto rhs = [&p](const State& b, State& db, double) { db = bloch_rhs(p, b); };

  State b{1.0, 0.0, 0.0};
  Trajectory out;
  out.reserve(grid.n_points);
  auto observe = [&](const State& s, double t) {
    const auto rho = to_rho(s);
    out.push_back(make_point(t, rho, cme_rate(p, rho)));
  };
  const auto times = grid.samples();
  const double dt0 = std::min(1e-3, 0.1 * grid.step());
  try {
    if (times.front() > 0.0) {
      // Advance silently from 0 to the first requested sample.
      const std::array<double, 2> lead{0.0, times.front()};
      ode::integrate_times(stepper, rhs, b, lead.begin(), lead.end(), dt0,
                           [](const State&, double) {});
    }
    ode::integrate_times(stepper, rhs, b, times.begin(), times.end(), dt0, observe);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw IntegratorFailure(fmt::format("master-equation integration failed: {}", e.what()));
  }
  if (out.size() != grid.n_points) throw IntegratorFailure("integrator skipped output samples");
  return out;
}

ComparisonReport first_order_compare(const LindbladParams& p, double gamma_model,
                                     double gamma_prime_model, double t, Topology topology) {
  check(p);
  if (!(t > 0.0)) throw DomainError("comparison time must be positive");
  ComparisonReport r;
  r.t = t;
  r.model_linear = closed_two_rate(gamma_model, gamma_prime_model, p.epsilon, 0.0, topology).d_rho_pp;
  r.master_linear = cme_rate(p, localized_left()).d_rho_pp;
  const double scale = std::max({1.0, std::abs(r.model_linear), std::abs(r.master_linear)});
  r.linear_agree = std::abs(r.model_linear - r.master_linear) <=
                   8.0 * std::numeric_limits<double>::epsilon() * scale;

  const auto master = integrate_cme(p, TimeGrid{0.0, 2.0 * t, 3});
  auto residual = [&](std::size_t i, double* diag) {
    const auto model = closed_two(gamma_model, gamma_prime_model, p.epsilon, master[i].t, topology);
    const double dpp = std::abs(model.rho_pp - master[i].rho.rho_pp);
    if (diag) *diag = dpp;
    return std::max(dpp, std::abs(model.rho_pm - master[i].rho.rho_pm));
  };
  r.residual = residual(1, &r.diagonal_residual);
  r.residual_double = residual(2, nullptr);
  r.richardson_ratio = r.residual > 0.0 ? r.residual_double / r.residual : 0.0;
  return r;
}

}  // namespace fano_tunnel
