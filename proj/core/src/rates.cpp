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

#include "fano_tunnel/rates.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"

namespace fano_tunnel {

namespace {

constexpr double kFdResidualLimit = 1e-6;

// Projector (c0 + m . sigma)/2.
struct BlochProjector {
  double c0 = 1.0;
  BlochVector m;
};

BlochVector bloch_rate(const DensityRate& r) {
  return {2.0 * r.d_rho_pm.real(), -2.0 * r.d_rho_pm.imag(), 2.0 * r.d_rho_pp};
}

bool all_analytic(const Trajectory& tr) {
  return std::all_of(tr.begin(), tr.end(), [](const auto& p) { return p.d_rho.has_value(); });
}

// Fourth-order first derivative on a uniform grid; one-sided at the ends.
std::vector<double> derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
    } else if (i == 0) {
      d[i] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    } else if (i == 1) {
      d[i] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    } else if (i == n - 2) {
      d[i] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * s;
    } else {
      d[i] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * s;
    }
  }
  return d;
}

double uniform_step(const Trajectory& tr) {
  if (tr.size() < 5) throw GridTooCoarse("finite-difference rates need at least 5 samples");
  const double h = (tr.back().t - tr.front().t) / static_cast<double>(tr.size() - 1);
  for (std::size_t i = 1; i < tr.size(); ++i) {
    if (std::abs((tr[i].t - tr[i - 1].t) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw DomainError("finite-difference rates need a uniform time grid");
    }
  }
  if (!(h > 0.0)) throw DomainError("time samples must be strictly increasing");
  return h;
}

std::vector<RateDecomposition> decompose(const Trajectory& tr, const BlochProjector& proj,
                                         DerivativeMode mode) {
  if (tr.empty()) return {};
  if (mode == DerivativeMode::Auto) {
    mode = all_analytic(tr) ? DerivativeMode::Analytic : DerivativeMode::FiniteDifference;
  }
  const std::size_t n = tr.size();
  std::vector<RateDecomposition> out(n);
  std::vector<BlochVector> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = bloch_from_rho(tr[i].rho);
    const auto eig = eigendecompose(tr[i].rho);
    out[i].t = tr[i].t;
    out[i].P = 0.5 * (proj.c0 + proj.m.dot(b[i]));
    out[i].p1 = eig.p1;
    out[i].orbital_overlap = eig.axis ? 0.5 * (proj.c0 + proj.m.dot(*eig.axis)) : 0.5 * proj.c0;
  }

  if (mode == DerivativeMode::Analytic) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!tr[i].d_rho) throw DomainError("analytic rates need d_rho on every sample");
      const BlochVector db = bloch_rate(*tr[i].d_rho);
      auto& r = out[i];
      r.P_dot = 0.5 * proj.m.dot(db);
      const double len = b[i].norm();
      if (len < kDegenerateBloch) {
        r.R_d = r.P_dot;
        r.R_u = 0.0;
        continue;
      }
      const BlochVector nh = b[i] * (1.0 / len);
      const double radial = nh.dot(db);       // d|b|/dt
      const double q = proj.m.dot(nh);
      r.R_d = 0.5 * q * radial;
      r.R_u = 0.5 * (proj.m.dot(db) - q * radial);
    }
    return out;
  }

  const double h = uniform_step(tr);
  std::vector<double> P(n), p1(n), q(n), len(n);
  for (std::size_t i = 0; i < n; ++i) {
    P[i] = out[i].P;
    p1[i] = out[i].p1;
    len[i] = b[i].norm();
    q[i] = len[i] < kDegenerateBloch ? 0.0 : proj.m.dot(b[i] * (1.0 / len[i]));
  }
  const auto dP = derivative(P, h);
  const auto dp1 = derivative(p1, h);
  const auto dq = derivative(q, h);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = out[i];
    r.P_dot = dP[i];
    if (len[i] < kDegenerateBloch) {
      r.R_d = r.P_dot;
      r.R_u = 0.0;
    } else {
      r.R_d = q[i] * dp1[i];
      r.R_u = 0.5 * len[i] * dq[i];
    }
  }
  const double res = split_residual(out);
  if (res > kFdResidualLimit) {
    throw GridTooCoarse(fmt::format(
        "rate split residual {:.3e} exceeds {:.0e}; refine the time grid", res, kFdResidualLimit));
  }
  return out;
}

BlochVector state_axis(const SubspaceState& s) {
  ReducedDensity rho;
  rho.rho_pp = std::norm(s.plus);
  rho.rho_pm = s.plus * std::conj(s.minus);
  return bloch_from_rho(rho);
}

}  // namespace

Eigendecomposition eigendecompose(const ReducedDensity& rho) {
  const BlochVector b = bloch_from_rho(rho);
  const double len = b.norm();
  Eigendecomposition e;
  e.p1 = 0.5 * (1.0 + len);
  e.p2 = 0.5 * (1.0 - len);
  if (len >= kDegenerateBloch) e.axis = b * (1.0 / len);
  return e;
}

std::vector<RateDecomposition> rate_decomposition(const Trajectory& trajectory,
                                                  const Projector& projector, DerivativeMode mode) {
  const double len = projector.axis.norm();
  if (std::abs(len - 1.0) > 1e-12) throw DomainError("projector axis must be a unit vector");
  return decompose(trajectory, {1.0, projector.axis}, mode);
}

std::vector<RateDecomposition> projector_rate_decomposition(const Trajectory& trajectory,
                                                            std::span<const SubspaceState> states,
                                                            DerivativeMode mode) {
  if (states.empty() || states.size() > 2) throw DomainError("projector rank must be 1 or 2");
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i; j < states.size(); ++j) {
      const Complex ip = std::conj(states[i].plus) * states[j].plus +
                         std::conj(states[i].minus) * states[j].minus;
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(ip - want) > 1e-10) throw DomainError("projector states must be orthonormal");
    }
  }
  BlochProjector proj{static_cast<double>(states.size()), {}};
  for (const auto& s : states) proj.m = proj.m + state_axis(s);
  return decompose(trajectory, proj, mode);
}

double split_residual(std::span<const RateDecomposition> rates) {
  double worst = 0.0;
  for (const auto& r : rates) worst = std::max(worst, std::abs(r.R_d + r.R_u - r.P_dot));
  return worst;
}

SubspaceState right_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Complex{s, 0.0}, Complex{-s, 0.0}};
}

SubspaceState left_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Complex{s, 0.0}, Complex{s, 0.0}};
}

}  // namespace fano_tunnel
