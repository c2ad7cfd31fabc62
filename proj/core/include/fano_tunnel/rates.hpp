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
#include <span>
#include <vector>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/model.hpp"

namespace fano_tunnel {

/// Below this Bloch-vector length the eigenvalues are treated as degenerate.
inline constexpr double kDegenerateBloch = 1e-12;

/// Rank-1 projector (1 + axis . sigma)/2; the default is |r><r|.
struct Projector {
  BlochVector axis{-1.0, 0.0, 0.0};
};

/// Eigenvalues p1 >= p2 of rho; `axis` is the Bloch direction of |t,1> and is
/// empty at degeneracy.
struct Eigendecomposition {
  double p1 = 0.5;
  double p2 = 0.5;
  std::optional<BlochVector> axis;

  bool degenerate() const { return !axis.has_value(); }
};

Eigendecomposition eigendecompose(const ReducedDensity& rho);

struct RateDecomposition {
  double t = 0.0;
  double P = 0.0;
  double P_dot = 0.0;
  double R_d = 0.0;
  double R_u = 0.0;
  double p1 = 0.5;
  /// <t,1| projector |t,1>; |<r|t,1>|^2 for the default projector.
  double orbital_overlap = 0.5;
};

enum class DerivativeMode {
  /// Analytic when every point carries d_rho, finite differences otherwise.
  Auto,
  Analytic,
  FiniteDifference,
};

/// Split of dP/dt into the eigenvalue part R_d and the eigenvector part R_u.
/// Finite differences need a uniform grid with >= 5 points; GridTooCoarse is
/// thrown when |R_d + R_u - P_dot| exceeds 1e-6 there.
std::vector<RateDecomposition> rate_decomposition(const Trajectory& trajectory,
                                                  const Projector& projector = {},
                                                  DerivativeMode mode = DerivativeMode::Auto);

/// State c_plus |+> + c_minus |-> of the two-level space.
struct SubspaceState {
  Complex plus{1.0, 0.0};
  Complex minus{0.0, 0.0};
};

/// Projector onto the span of orthonormal `states` (rank 1 or 2), decomposed
/// over the natural orbitals. Throws DomainError for non-orthonormal input.
std::vector<RateDecomposition> projector_rate_decomposition(const Trajectory& trajectory,
                                                            std::span<const SubspaceState> states,
                                                            DerivativeMode mode = DerivativeMode::Auto);

/// Largest |R_d + R_u - P_dot| of a decomposition.
double split_residual(std::span<const RateDecomposition> rates);

/// |r> = (|+> - |->)/sqrt 2 and |l> = (|+> + |->)/sqrt 2.
SubspaceState right_state();
SubspaceState left_state();

}  // namespace fano_tunnel
