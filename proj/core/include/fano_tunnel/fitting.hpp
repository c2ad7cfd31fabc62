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
#include <vector>

namespace fano_tunnel {

/// Least-squares fit of a constant plus a sum of decaying exponentials.
/// params: single = {c, a, k}, y = c + a e^{-k t};
///         two    = {c, a, k1, b, k2}, y = c + a e^{-k1 t} + b e^{-k2 t}.
struct ExponentialFit {
  std::vector<double> params;
  /// Root-mean-square residual over the samples.
  double rms = 0.0;
};

ExponentialFit fit_single_exponential(std::span<const double> t, std::span<const double> y);
ExponentialFit fit_two_exponential(std::span<const double> t, std::span<const double> y);

}  // namespace fano_tunnel
