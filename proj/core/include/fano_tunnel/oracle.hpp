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
#include <span>
#include <vector>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/model.hpp"

namespace fano_tunnel {

/// Largest bin count evolve_oracle accepts.
inline constexpr std::size_t kMaxOracleBins = 20000;

/// Continuum replaced by N uniform midpoint bins of width delta. Block a is
/// the arrowhead matrix with diagonal (eps + e0, eta_1..eta_N) and border
/// g_i = g(eta_i) sqrt(delta); block b has diagonal (e0, eta_i + eps) and
/// border g'_i sqrt(delta).
struct DiscretizedModel {
  std::size_t n_bins = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double level_a = 0.0;
  double level_b = 0.0;
  Topology topology = Topology::SingleContinuum;
  std::vector<double> bin_energies;
  std::vector<double> bin_couplings_a;
  std::vector<double> bin_couplings_b;

  /// Diagonal of block b's continuum part (bin energies shifted by epsilon).
  std::vector<double> shifted_energies() const;
  /// Dense (N+1) x (N+1) blocks, row-major; for cross-checks at small N.
  std::vector<double> block_a() const;
  std::vector<double> block_b() const;
};

DiscretizedModel discretize(const ModelParams& params, std::size_t n_bins);

/// Poincare recurrence time 2 pi / delta of the discretized continuum.
double recurrence_time(const DiscretizedModel& model);

/// Spectrum of the arrowhead matrix [[d0, z^T], [z, diag(p)]] with p strictly
/// increasing. head[k] is the first component of eigenvector k; the others
/// follow as head[k] z_i / (values[k] - p_i) (zero for deflated k, where
/// head[k] = 0).
struct ArrowheadSpectrum {
  static constexpr std::size_t kNoOrigin = static_cast<std::size_t>(-1);

  std::vector<double> values;
  std::vector<double> head;
  /// values[k] = poles[origin[k]] + offset[k]; kept separately so gaps to
  /// nearby poles keep full relative precision.
  std::vector<std::size_t> origin;
  std::vector<double> offset;

  std::size_t size() const { return values.size(); }
  /// values[k] - poles[i].
  double gap(std::size_t k, std::size_t i, std::span<const double> poles) const;
};

/// O(N^2) secular-equation solver. Throws EigenFailure.
ArrowheadSpectrum solve_arrowhead(double d0, std::span<const double> poles,
                                  std::span<const double> couplings);

/// Dense reference using a symmetric eigensolver; O(N^3), cross-checks only.
ArrowheadSpectrum solve_arrowhead_dense(double d0, std::span<const double> poles,
                                        std::span<const double> couplings);

/// Exact evolution of the discretized model from |l> (x) |0_b>, followed by
/// the partial trace over the b-states. Throws DomainError for
/// n_bins > kMaxOracleBins, EigenFailure.
Trajectory evolve_oracle(const DiscretizedModel& model, const TimeGrid& grid);

/// Largest |1 - norm| of the evolved discrete-model state over the grid.
double oracle_norm_defect(const DiscretizedModel& model, const TimeGrid& grid);

}  // namespace fano_tunnel
