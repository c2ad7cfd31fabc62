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

/// Invariant subspace of the Hamiltonian.
///  A: {|+0_b>, |-eta>}, discrete energy epsilon + e0, continuum energy eta.
///  B: {|-0_b>, |+eta>}, discrete energy e0, continuum energy eta + epsilon.
enum class Channel { A, B };

/// One discrete level coupled to a continuum, written in the continuum's own
/// energy variable c. Channel B lives on the shifted band [eta_min + eps,
/// eta_max + eps] with G(c) = g'(c - eps).
struct FanoChannel {
  double level = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double offset = 0.0;
  CouplingFn coupling;

  static FanoChannel from(const ModelParams& params, Channel channel);

  double coupling_amplitude(double c) const { return coupling.amplitude(c - offset); }
  double coupling_sq(double c) const { return coupling.squared(c - offset); }
  bool uncoupled() const { return coupling.is_zero(); }
  bool in_band(double c) const { return c >= lo && c <= hi; }
  std::vector<double> kinks() const;

  /// F(E) = PV int G(c)^2 / (E - c) dc; finite outside the band, PV inside.
  double shift(double E) const;
  /// dF/dE for E outside the band.
  double shift_derivative(double E) const;
  /// E - level - F(E).
  double dispersion(double E) const { return E - level - shift(E); }
  /// |a0(E)|^2 for E in the band.
  double density(double E) const;
  /// x / (x^2 + pi^2 G^4) with x = E - level - F(E): the coefficient of the
  /// delta term in the continuum amplitude, multiplied by |a0|^2.
  double delta_weight(double E) const;
};

struct Resonance {
  double energy = 0.0;
  double width = 0.0;
};

struct DiscreteLevel {
  double energy = 0.0;
  double weight = 0.0;
};

double shift_function(const ModelParams& params, Channel channel, double E);

/// Throws DomainError when E lies outside the channel's band.
double spectral_density(const ModelParams& params, Channel channel, double E);

/// Root of E - level - F(E) inside the band nearest to the bare level where
/// the dispersion function crosses zero upwards; width = 2 pi G(e_R)^2.
/// Zero coupling returns (level, 0). Throws RootNotBracketed.
Resonance resonance(const ModelParams& params, Channel channel);
Resonance resonance(const FanoChannel& ch);

/// Out-of-band roots of the dispersion equation with weights (1 - F'(E_d))^-1.
/// For zero coupling the bare level is returned with weight 1 when it lies
/// outside the band.
std::vector<DiscreteLevel> discrete_roots(const ModelParams& params, Channel channel);
std::vector<DiscreteLevel> discrete_roots(const FanoChannel& ch);

/// Overlap int B^(E)(eta) A^(E')*(eta) d eta of channel-B and channel-A
/// continuum eigenstates, as the distribution
///   amplitude * [regular + principal_numerator * P/(u - v)
///                + delta_coefficient * delta(u - v)]
/// with u = E - epsilon, v = E' and amplitude = b0(E) a0(E').
struct OverlapKernel {
  double amplitude = 0.0;
  double regular = 0.0;
  double principal_numerator = 0.0;
  double delta_coefficient = 0.0;
};

/// Throws DomainError in OrthogonalContinua topology or for E, E' off band.
OverlapKernel continuum_amplitude_overlap(const ModelParams& params, double E, double E_prime);

/// Stationary solution of one channel.
class SpectralSolution {
 public:
  SpectralSolution(const ModelParams& params, Channel channel);

  Channel channel() const { return channel_; }
  const FanoChannel& fano() const { return ch_; }

  double density(double E) const;
  double shift(double E) const { return ch_.shift(E); }
  /// Throw RootNotBracketed when the channel has no in-band resonance.
  double resonance_energy() const;
  double width() const;
  bool has_resonance() const { return res_.has_value(); }
  const std::vector<DiscreteLevel>& discrete() const { return discrete_; }

  /// Band integral of the density.
  double continuum_weight() const;
  /// continuum_weight() plus the discrete weights; 1 for a complete basis.
  double total_weight() const;

 private:
  Channel channel_;
  FanoChannel ch_;
  std::optional<Resonance> res_;
  std::vector<DiscreteLevel> discrete_;
};

}  // namespace fano_tunnel
