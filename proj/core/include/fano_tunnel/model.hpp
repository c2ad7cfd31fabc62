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

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fano_tunnel {

using Complex = std::complex<double>;

/// Slack allowed on det(rho) >= 0 and |b| <= 1.
inline constexpr double kPositivityTolerance = 1e-10;

// ---------------------------------------------------------------------------
// Couplings
// ---------------------------------------------------------------------------

/// Energy-independent amplitude g(eta) = value.
struct ConstantCoupling {
  double value = 0.0;
};

/// |g(eta)|^2 = prefactor * eta^exponent for eta >= 0, zero below.
struct PowerLawCoupling {
  double prefactor = 0.0;
  double exponent = 0.0;
};

/// Amplitude linearly interpolated between (eta, value) knots.
struct TabulatedCoupling {
  std::vector<std::pair<double, double>> knots;
};

/// Coupling amplitude between a discrete b-state and the continuum.
/// Amplitudes are real; only |g|^2 enters the dynamics.
class CouplingFn {
 public:
  using Variant = std::variant<ConstantCoupling, PowerLawCoupling, TabulatedCoupling>;

  CouplingFn() = default;
  CouplingFn(ConstantCoupling c) : v_(c) {}
  CouplingFn(PowerLawCoupling p) : v_(p) {}
  CouplingFn(TabulatedCoupling t) : v_(std::move(t)) {}

  static CouplingFn constant(double value) { return ConstantCoupling{value}; }
  static CouplingFn power_law(double prefactor, double exponent) {
    return PowerLawCoupling{prefactor, exponent};
  }
  static CouplingFn tabulated(std::vector<std::pair<double, double>> knots) {
    return TabulatedCoupling{std::move(knots)};
  }
  /// Constant coupling whose Golden-Rule width 2*pi*g^2 equals `width`.
  static CouplingFn from_width(double width);

  double amplitude(double eta) const;
  double squared(double eta) const;

  bool is_zero() const;
  bool is_constant() const { return std::holds_alternative<ConstantCoupling>(v_); }

  /// Abscissae where the coupling is not smooth (tabulated knots, power-law origin).
  std::vector<double> kinks() const;

  const Variant& variant() const { return v_; }

 private:
  Variant v_{ConstantCoupling{}};
};

enum class Topology { SingleContinuum, OrthogonalContinua };

/// Parameters of the doublet + (discrete state, continuum band) Hamiltonian.
///  - |+0_b> (energy epsilon + e0) couples to |-eta> through g
///  - |-0_b> (energy e0) couples to |+eta> (energy eta + epsilon) through g'
struct ModelParams {
  double epsilon = 1.0;
  double e0 = 0.0;
  double eta_min = 0.0;
  double eta_max = 1.0;
  CouplingFn g;
  CouplingFn g_prime;
  Topology topology = Topology::SingleContinuum;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool valid() const { return violations.empty(); }
  bool clean() const { return violations.empty() && warnings.empty(); }
};

/// Checks parameter invariants and the broad-band assumption. Never throws.
ValidationReport validate(const ModelParams& params);

// ---------------------------------------------------------------------------
// Two-level states
// ---------------------------------------------------------------------------

/// Reduced density of the doublet in the |+>, |-> basis. rho_-- = 1 - rho_++
/// is implied, so unit trace holds by construction.
struct ReducedDensity {
  double rho_pp = 0.5;
  Complex rho_pm{0.5, 0.0};

  double rho_mm() const { return 1.0 - rho_pp; }
  double det() const { return rho_pp * (1.0 - rho_pp) - std::norm(rho_pm); }
  bool is_physical(double tol = kPositivityTolerance) const;
};

/// b_i = Tr(rho sigma_i) with the standard Pauli matrices.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

BlochVector bloch_from_rho(const ReducedDensity& rho);
ReducedDensity rho_from_bloch(const BlochVector& b);

/// Localized initial state |l> = (|+> + |->)/sqrt 2.
inline ReducedDensity localized_left() { return {0.5, Complex{0.5, 0.0}}; }

// ---------------------------------------------------------------------------
// Time grids
// ---------------------------------------------------------------------------

/// Uniform grid of `n_points` samples on [t_start, t_end] (hbar = 1 units).
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t n_points = 2;

  /// Throws DomainError when the invariants fail.
  void check() const;
  double step() const { return (t_end - t_start) / static_cast<double>(n_points - 1); }
  double at(std::size_t i) const;
  std::vector<double> samples() const;
};

}  // namespace fano_tunnel
