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

namespace fano_tunnel {

/// Worker count from FANO_TUNNEL_THREADS (unset or 0 = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; results must be written to per-index slots so the
/// outcome does not depend on the schedule. Rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Fixed-size chunking used for deterministic reductions: the number of
/// chunks depends only on n, never on the worker count.
inline constexpr std::size_t kReductionChunk = 512;
inline std::size_t chunk_count(std::size_t n) {
  return (n + kReductionChunk - 1) / kReductionChunk;
}

}  // namespace fano_tunnel
