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

#include "fano_tunnel/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"

namespace fano_tunnel {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double interpolate(const TabulatedCoupling& tab, double eta) {
  const auto& k = tab.knots;
  if (k.empty()) return 0.0;
  if (eta <= k.front().first) return k.front().second;
  if (eta >= k.back().first) return k.back().second;
  auto hi = std::upper_bound(k.begin(), k.end(), eta,
                             [](double x, const auto& knot) { return x < knot.first; });
  auto lo = std::prev(hi);
  const double w = (eta - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

}  // namespace

CouplingFn CouplingFn::from_width(double width) {
  return constant(std::sqrt(width / (2.0 * std::numbers::pi)));
}

double CouplingFn::amplitude(double eta) const {
  return std::visit(
      Overloaded{
          [](const ConstantCoupling& c) { return c.value; },
          [eta](const PowerLawCoupling& p) {
            if (eta < 0.0 || p.prefactor <= 0.0) return 0.0;
            return std::sqrt(p.prefactor * std::pow(eta, p.exponent));
          },
          [eta](const TabulatedCoupling& t) { return interpolate(t, eta); },
      },
      v_);
}

double CouplingFn::squared(double eta) const {
  if (const auto* p = std::get_if<PowerLawCoupling>(&v_)) {
    if (eta < 0.0) return 0.0;
    return p->prefactor * std::pow(eta, p->exponent);
  }
  const double a = amplitude(eta);
  return a * a;
}

bool CouplingFn::is_zero() const {
  return std::visit(
      Overloaded{
          [](const ConstantCoupling& c) { return c.value == 0.0; },
          [](const PowerLawCoupling& p) { return p.prefactor == 0.0; },
          [](const TabulatedCoupling& t) {
            return std::all_of(t.knots.begin(), t.knots.end(),
                               [](const auto& k) { return k.second == 0.0; });
          },
      },
      v_);
}

std::vector<double> CouplingFn::kinks() const {
  std::vector<double> out;
  if (const auto* t = std::get_if<TabulatedCoupling>(&v_)) {
    for (const auto& k : t->knots) out.push_back(k.first);
  } else if (std::holds_alternative<PowerLawCoupling>(v_)) {
    out.push_back(0.0);
  }
  return out;
}

namespace {

void check_coupling(const CouplingFn& fn, const char* label, const ModelParams& p,
                    ValidationReport& report) {
  std::visit(
      Overloaded{
          [&](const ConstantCoupling& c) {
            if (!std::isfinite(c.value) || c.value < 0.0)
              report.violations.push_back(fmt::format("{}: constant value must be >= 0", label));
          },
          [&](const PowerLawCoupling& pl) {
            if (!std::isfinite(pl.prefactor) || pl.prefactor < 0.0)
              report.violations.push_back(fmt::format("{}: power-law prefactor must be >= 0", label));
            if (!std::isfinite(pl.exponent) || pl.exponent < 0.0)
              report.violations.push_back(fmt::format("{}: power-law exponent must be >= 0", label));
            if (p.eta_min < 0.0)
              report.violations.push_back(
                  fmt::format("{}: power-law coupling needs eta_min >= 0", label));
          },
          [&](const TabulatedCoupling& t) {
            if (t.knots.size() < 2) {
              report.violations.push_back(fmt::format("{}: tabulated coupling needs >= 2 knots", label));
              return;
            }
            for (std::size_t i = 1; i < t.knots.size(); ++i) {
              if (!(t.knots[i].first > t.knots[i - 1].first)) {
                report.violations.push_back(
                    fmt::format("{}: tabulated knots must be strictly increasing", label));
                break;
              }
            }
            if (t.knots.front().first > p.eta_min || t.knots.back().first < p.eta_max)
              report.violations.push_back(
                  fmt::format("{}: tabulated knots must span [eta_min, eta_max]", label));
          },
      },
      fn.variant());
}

}  // namespace

ValidationReport validate(const ModelParams& p) {
  ValidationReport report;
  if (!(std::isfinite(p.epsilon) && p.epsilon > 0.0))
    report.violations.emplace_back("epsilon > 0");
  if (!(std::isfinite(p.eta_min) && std::isfinite(p.eta_max) && p.eta_min < p.eta_max))
    report.violations.emplace_back("eta_min < eta_max");
  if (!std::isfinite(p.e0)) report.violations.emplace_back("e0 must be finite");
  check_coupling(p.g, "g", p, report);
  check_coupling(p.g_prime, "g_prime", p, report);
  if (!report.valid()) return report;

  // Broad-band assumption: both product levels sit inside the band, further
  // than one Golden-Rule width from either edge.
  const double two_pi = 2.0 * std::numbers::pi;
  const double width = std::max(two_pi * p.g.squared(p.e0 + p.epsilon),
                                two_pi * p.g_prime.squared(p.e0 - p.epsilon));
  const std::pair<double, const char*> levels[] = {{p.e0, "e0"}, {p.e0 + p.epsilon, "e0+epsilon"}};
  for (const auto& [level, label] : levels) {
    if (level < p.eta_min || level > p.eta_max) {
      report.warnings.push_back(fmt::format("discrete level {} outside band", label));
    } else if (level - p.eta_min <= width || p.eta_max - level <= width) {
      report.warnings.push_back(fmt::format("discrete level at band edge ({})", label));
    }
  }
  return report;
}

bool ReducedDensity::is_physical(double tol) const {
  return std::isfinite(rho_pp) && std::isfinite(rho_pm.real()) && std::isfinite(rho_pm.imag()) &&
         rho_pp >= -tol && rho_pp <= 1.0 + tol && det() >= -tol;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector bloch_from_rho(const ReducedDensity& rho) {
  return {2.0 * rho.rho_pm.real(), -2.0 * rho.rho_pm.imag(), 2.0 * rho.rho_pp - 1.0};
}

ReducedDensity rho_from_bloch(const BlochVector& b) {
  return {0.5 * (1.0 + b.z), Complex{0.5 * b.x, -0.5 * b.y}};
}

void TimeGrid::check() const {
  if (!(std::isfinite(t_start) && t_start >= 0.0))
    throw DomainError("time grid: t_start must be >= 0");
  if (n_points < 2) throw DomainError("time grid: n_points must be >= 2");
  if (!(std::isfinite(t_end) && t_end > t_start))
    throw DomainError("time grid: samples must be strictly increasing");
}

double TimeGrid::at(std::size_t i) const {
  if (i + 1 == n_points) return t_end;
  return t_start + static_cast<double>(i) * step();
}

std::vector<double> TimeGrid::samples() const {
  std::vector<double> ts(n_points);
  for (std::size_t i = 0; i < n_points; ++i) ts[i] = at(i);
  return ts;
}

}  // namespace fano_tunnel
