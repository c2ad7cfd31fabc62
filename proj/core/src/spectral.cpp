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

#include "fano_tunnel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/quadrature.hpp"

namespace fano_tunnel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kResonanceScan = 2048;
// Out-of-band roots closer than this (relative to the band width) carry a
// weight far below the completeness tolerance and are dropped.
constexpr double kEdgeGuard = 1e-12;

double band_scale(const FanoChannel& ch) { return std::max(1.0, ch.hi - ch.lo); }

}  // namespace

FanoChannel FanoChannel::from(const ModelParams& p, Channel channel) {
  FanoChannel ch;
  if (channel == Channel::A) {
    ch.level = p.epsilon + p.e0;
    ch.lo = p.eta_min;
    ch.hi = p.eta_max;
    ch.offset = 0.0;
    ch.coupling = p.g;
  } else {
    ch.level = p.e0;
    ch.lo = p.eta_min + p.epsilon;
    ch.hi = p.eta_max + p.epsilon;
    ch.offset = p.epsilon;
    ch.coupling = p.g_prime;
  }
  return ch;
}

std::vector<double> FanoChannel::kinks() const {
  std::vector<double> out;
  for (double k : coupling.kinks()) out.push_back(k + offset);
  return out;
}

double FanoChannel::shift(double E) const {
  if (uncoupled()) return 0.0;
  auto g2 = [this](double c) { return coupling_sq(c); };
  const auto br = kinks();
  if (E > lo && E < hi) return quad::pv_cauchy(g2, lo, hi, E, br);
  if (E < lo || E > hi) return quad::cauchy_outside(g2, lo, hi, E, br);
  // Exactly on an edge: logarithmic divergence unless G vanishes there.
  const double edge_g2 = coupling_sq(E);
  if (edge_g2 > 0.0) {
    return E == lo ? -std::numeric_limits<double>::infinity()
                   : std::numeric_limits<double>::infinity();
  }
  const double d = kEdgeGuard * band_scale(*this);
  return quad::cauchy_outside(g2, lo, hi, E == lo ? lo - d : hi + d, br);
}

double FanoChannel::shift_derivative(double E) const {
  if (in_band(E)) throw DomainError("shift derivative is only defined outside the band");
  if (uncoupled()) return 0.0;
  auto g2 = [this](double c) { return coupling_sq(c); };
  return -quad::cauchy_outside_sq(g2, lo, hi, E, kinks());
}

double FanoChannel::density(double E) const {
  if (!in_band(E)) {
    throw DomainError(fmt::format("spectral density requested at {:.17g}, outside [{:.17g}, {:.17g}]",
                                  E, lo, hi));
  }
  const double g2 = coupling_sq(E);
  if (g2 == 0.0 || E == lo || E == hi) return 0.0;
  const double x = E - level - shift(E);
  return g2 / (x * x + kPi * kPi * g2 * g2);
}

double FanoChannel::delta_weight(double E) const {
  const double g2 = coupling_sq(E);
  if (g2 == 0.0 || E <= lo || E >= hi) return 0.0;
  const double x = E - level - shift(E);
  return x / (x * x + kPi * kPi * g2 * g2);
}

double shift_function(const ModelParams& params, Channel channel, double E) {
  return FanoChannel::from(params, channel).shift(E);
}

double spectral_density(const ModelParams& params, Channel channel, double E) {
  return FanoChannel::from(params, channel).density(E);
}

Resonance resonance(const FanoChannel& ch) {
  if (ch.uncoupled()) return {ch.level, 0.0};
  const double span = ch.hi - ch.lo;
  std::vector<double> xs(kResonanceScan + 1);
  std::vector<double> ds(kResonanceScan + 1);
  for (int i = 0; i <= kResonanceScan; ++i) {
    // Half-step offset keeps the scan off the (divergent) edges.
    xs[i] = ch.lo + span * (i + 0.5) / (kResonanceScan + 1);
    ds[i] = ch.dispersion(xs[i]);
  }
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kResonanceScan; ++i) {
    if (ds[i] <= 0.0 && ds[i + 1] > 0.0) {
      const double dist = std::min(std::abs(xs[i] - ch.level), std::abs(xs[i + 1] - ch.level));
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
  }
  if (best < 0) {
    throw RootNotBracketed(fmt::format(
        "no upward zero crossing of E - {:.6g} - F(E) inside [{:.6g}, {:.6g}]", ch.level, ch.lo,
        ch.hi));
  }
  auto d = [&ch](double E) { return ch.dispersion(E); };
  const double e_r = quad::find_root(d, xs[best], xs[best + 1], ds[best], ds[best + 1], 1e-12 * span);
  return {e_r, 2.0 * kPi * ch.coupling_sq(e_r)};
}

Resonance resonance(const ModelParams& params, Channel channel) {
  return resonance(FanoChannel::from(params, channel));
}

std::vector<DiscreteLevel> discrete_roots(const FanoChannel& ch) {
  std::vector<DiscreteLevel> out;
  if (ch.uncoupled()) {
    if (!ch.in_band(ch.level)) out.push_back({ch.level, 1.0});
    return out;
  }
  const double scale = band_scale(ch);
  const double guard = kEdgeGuard * scale;
  const double tol = 1e-12 * scale;
  auto d = [&ch](double E) { return ch.dispersion(E); };
  auto weight = [&ch](double E) { return 1.0 / (1.0 - ch.shift_derivative(E)); };

  // Below the band the dispersion function increases from -infinity.
  const double below = ch.lo - guard;
  const double d_below = d(below);
  if (d_below > 0.0) {
    double reach = std::max({1.0, std::abs(ch.level - ch.lo), d_below});
    double far = ch.lo - reach;
    double d_far = d(far);
    while (d_far >= 0.0) {
      reach *= 2.0;
      far = ch.lo - reach;
      d_far = d(far);
    }
    const double e = quad::find_root(d, far, below, d_far, d_below, tol);
    out.push_back({e, weight(e)});
  }
  // Above the band it increases towards +infinity.
  const double above = ch.hi + guard;
  const double d_above = d(above);
  if (d_above < 0.0) {
    double reach = std::max({1.0, std::abs(ch.level - ch.hi), -d_above});
    double far = ch.hi + reach;
    double d_far = d(far);
    while (d_far <= 0.0) {
      reach *= 2.0;
      far = ch.hi + reach;
      d_far = d(far);
    }
    const double e = quad::find_root(d, above, far, d_above, d_far, tol);
    out.push_back({e, weight(e)});
  }
  return out;
}

std::vector<DiscreteLevel> discrete_roots(const ModelParams& params, Channel channel) {
  return discrete_roots(FanoChannel::from(params, channel));
}

OverlapKernel continuum_amplitude_overlap(const ModelParams& p, double E, double E_prime) {
  if (p.topology == Topology::OrthogonalContinua) {
    throw DomainError("continuum overlap vanishes identically for orthogonal continua");
  }
  const auto a = FanoChannel::from(p, Channel::A);
  const auto b = FanoChannel::from(p, Channel::B);
  if (!b.in_band(E) || !a.in_band(E_prime)) {
    throw DomainError("continuum overlap requested off band");
  }
  OverlapKernel k;
  if (a.uncoupled() || b.uncoupled()) return k;

  const double u = E - p.epsilon;
  const double v = E_prime;
  const double ga_v = a.coupling_amplitude(v);
  const double gb_u = b.coupling_amplitude(E);
  if (ga_v == 0.0 || gb_u == 0.0) return k;

  auto h = [&p](double eta) { return p.g.amplitude(eta) * p.g_prime.amplitude(eta); };
  std::vector<double> br = p.g.kinks();
  for (double x : p.g_prime.kinks()) br.push_back(x);
  auto hilbert = [&](double x) {
    if (x <= p.eta_min || x >= p.eta_max) return quad::cauchy_outside(h, p.eta_min, p.eta_max, x, br);
    return quad::pv_cauchy(h, p.eta_min, p.eta_max, x, br);
  };

  const double xa_v = v - a.level - a.shift(v);
  const double xb_e = E - b.level - b.shift(E);
  const double za_v = xa_v / (ga_v * ga_v);
  const double zb_e = xb_e / (gb_u * gb_u);

  k.amplitude = gb_u / std::sqrt(xb_e * xb_e + kPi * kPi * std::pow(gb_u, 4)) * ga_v /
                std::sqrt(xa_v * xa_v + kPi * kPi * std::pow(ga_v, 4));
  if (u != v) {
    k.regular = (hilbert(u) - hilbert(v)) / (v - u);
  } else {
    const double step = 1e-6 * (p.eta_max - p.eta_min);
    k.regular = -(hilbert(u + step) - hilbert(u - step)) / (2.0 * step);
  }
  k.principal_numerator = za_v * h(v) - zb_e * h(u);
  if (a.in_band(u) && a.coupling_sq(u) > 0.0) {
    const double ga_u = a.coupling_amplitude(u);
    const double za_u = (u - a.level - a.shift(u)) / (ga_u * ga_u);
    k.delta_coefficient = h(u) * (kPi * kPi + za_u * zb_e);
  }
  return k;
}

SpectralSolution::SpectralSolution(const ModelParams& params, Channel channel)
    : channel_(channel), ch_(FanoChannel::from(params, channel)) {
  try {
    res_ = fano_tunnel::resonance(ch_);
  } catch (const RootNotBracketed&) {
    res_.reset();
  }
  if (ch_.uncoupled()) {
    discrete_ = {{ch_.level, 1.0}};
  } else {
    discrete_ = discrete_roots(ch_);
  }
}

double SpectralSolution::resonance_energy() const {
  if (!res_) throw RootNotBracketed("channel has no in-band resonance");
  return res_->energy;
}

double SpectralSolution::width() const {
  if (!res_) throw RootNotBracketed("channel has no in-band resonance");
  return res_->width;
}

double SpectralSolution::density(double E) const {
  if (!ch_.in_band(E)) throw DomainError("spectral density requested outside the band");
  return ch_.density(E);
}

double SpectralSolution::continuum_weight() const {
  if (ch_.uncoupled()) return 0.0;
  std::vector<double> br = ch_.kinks();
  br.push_back(ch_.level);
  if (res_) {
    const double w = std::max(res_->width, 1e-9 * (ch_.hi - ch_.lo));
    for (double k : {0.0, 1.0, 5.0, 25.0, 125.0}) {
      br.push_back(res_->energy - k * w);
      br.push_back(res_->energy + k * w);
    }
  }
  auto rho = [this](double E) { return ch_.density(E); };
  return quad::integrate(rho, ch_.lo, ch_.hi, br, {1e-10, 1e-10});
}

double SpectralSolution::total_weight() const {
  double sum = continuum_weight();
  for (const auto& d : discrete_) sum += d.weight;
  return sum;
}

}  // namespace fano_tunnel
