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

#include "fano_tunnel/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/parallel.hpp"
#include "fano_tunnel/quadrature.hpp"

namespace fano_tunnel {

namespace {

void check_params(const ModelParams& p) {
  const auto report = validate(p);
  if (!report.valid()) throw DomainError("invalid model parameters: " + report.violations.front());
  if (const auto* pl = std::get_if<PowerLawCoupling>(&p.g.variant())) {
    if (!(pl->exponent >= 0.0 && pl->exponent < 1.0)) {
      throw DomainError("adiabatic analysis needs a power-law exponent in [0, 1)");
    }
  }
}

double coupling_weight(const ModelParams& p) {
  auto g2 = [&p](double eta) { return p.g.squared(eta); };
  return quad::integrate(g2, p.eta_min, p.eta_max, p.g.kinks());
}

}  // namespace

double dispersion_root(const ModelParams& p) {
  check_params(p);
  auto g2 = [&p](double eta) { return p.g.squared(eta); };
  const auto br = p.g.kinks();
  const bool uncoupled = p.g.is_zero();
  if (uncoupled) {
    if (p.e0 <= p.eta_min) return p.e0;
    throw NoRoot(fmt::format("uncoupled level {:.6g} lies inside the band", p.e0));
  }
  auto d = [&](double E) {
    const double f = quad::cauchy_outside(g2, p.eta_min, p.eta_max, E, br);
    return E - p.e0 - f;
  };

  // Closest representable point below the edge.
  const double edge = p.eta_min;
  double top = std::nextafter(edge, -std::numeric_limits<double>::infinity());
  if (edge == 0.0) top = -std::numeric_limits<double>::min();
  const double d_top = d(top);
  if (!(d_top > 0.0)) {
    throw NoRoot(fmt::format("dispersion function has no sign change below eta_min = {:.6g}", edge));
  }
  double reach = std::max(1.0, 10.0 * coupling_weight(p) / (p.eta_max - p.eta_min));
  double bottom = edge - reach;
  double d_bottom = d(bottom);
  for (int k = 0; d_bottom >= 0.0; ++k) {
    if (k > 2000) throw NoRoot("lower bracket for the dispersion root did not converge");
    reach *= 2.0;
    bottom = edge - reach;
    d_bottom = d(bottom);
  }
  std::uintmax_t iters = 300;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      d, bottom, top, d_bottom, d_top, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (lo + hi);
}

AdiabaticResult overlap_factor(const ModelParams& p) {
  AdiabaticResult r;
  r.cutoff = p.eta_max;
  r.E0 = dispersion_root(p);
  if (!p.g.is_zero()) {
    auto g2 = [&p](double eta) { return p.g.squared(eta); };
    r.I = 0.25 * quad::cauchy_outside_sq(g2, p.eta_min, p.eta_max, r.E0, p.g.kinks());
  }
  r.a0_sq = 1.0 / (1.0 + r.I);
  r.overlap = (1.0 - r.I) / (1.0 + r.I);
  r.effective_splitting = p.epsilon * r.overlap;

  const double scale = std::max(1.0, std::abs(p.eta_max - p.eta_min));
  if (std::abs(p.e0 - p.eta_min) > 1e-3 * scale) {
    r.warnings.push_back("e0 is not at the band edge; outside the adiabatic-doublet regime");
  }
  for (double x : {0.25, 0.5, 0.75}) {
    const double eta = p.eta_min + x * (p.eta_max - p.eta_min);
    if (std::abs(p.g.squared(eta) - p.g_prime.squared(eta)) > 1e-12 * std::max(1.0, p.g.squared(eta))) {
      r.warnings.push_back("g and g' differ; the doublet analysis assumes g = g'");
      break;
    }
  }
  return r;
}

std::vector<AdiabaticResult> cutoff_sweep(const ModelParams& params,
                                          std::span<const double> cutoffs) {
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > cutoffs[i - 1])) throw DomainError("cutoffs must increase strictly");
  }
  std::vector<AdiabaticResult> out(cutoffs.size());
  parallel_for(cutoffs.size(), [&](std::size_t i) {
    ModelParams p = params;
    p.eta_max = cutoffs[i];
    out[i] = overlap_factor(p);
  });
  return out;
}

}  // namespace fano_tunnel
