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

#include "fano_tunnel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"

namespace fano_tunnel::quad {

namespace {

constexpr unsigned kMaxDepth = 20;
constexpr double kRoundoffSlack = 100.0;

double integrate_piece(const RealFn& f_ab, double a, double b, Tolerance tol) {
  // Boost's error estimate carries an absolute floor that does not shrink
  // with the interval, so every piece is mapped onto [0, 1].
  const double len = b - a;
  auto f = [&](double y) { return len * f_ab(a + len * y); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double error = 0.0;
  double l1 = 0.0;
  // Boost refines on relative error only; a first unrefined pass converts the
  // absolute target into an equivalent relative one.
  double value = GK::integrate(f, 0.0, 1.0, 0, tol.rel, &error, &l1);
  double rel = tol.rel;
  if (std::isfinite(l1) && l1 > 0.0) rel = std::max(rel, tol.abs / l1);
  if (error > std::max(tol.abs, tol.rel * l1) || !std::isfinite(value)) {
    value = GK::integrate(f, 0.0, 1.0, kMaxDepth, rel, &error, &l1);
  }
  if (!std::isfinite(value) || error > std::max(tol.abs, tol.rel * l1)) {
    // Endpoint algebraic singularities (power-law couplings at the band edge)
    // defeat bisection; the double-exponential rule absorbs them.
    boost::math::quadrature::tanh_sinh<double> ts;
    double ts_error = 0.0, ts_l1 = 0.0;
    try {
      const double ts_value = ts.integrate(f, 0.0, 1.0, std::min(rel, 1e-3), &ts_error, &ts_l1);
      if (std::isfinite(ts_value) && (!std::isfinite(value) || ts_error < error)) {
        value = ts_value;
        error = ts_error;
        l1 = ts_l1;
      }
    } catch (const std::domain_error&) {
      // keep the Gauss-Kronrod estimate
    }
  }
  // A roundoff-limited estimate (difference quotients next to a principal
  // value pole) is accepted up to kRoundoffSlack times the absolute target.
  if (!std::isfinite(value) || error > kRoundoffSlack * std::max(tol.abs, tol.rel * l1)) {
    throw QuadratureFailure(fmt::format(
        "adaptive quadrature on [{:.6g}, {:.6g}] did not converge (error estimate {:.3g})", a, b,
        error));
  }
  return value;
}

std::vector<double> split_points(double a, double b, std::span<const double> breaks) {
  std::vector<double> pts{a};
  for (double x : breaks) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Breakpoints of the log substitution u = ln(1 + dist / d).
std::vector<double> mapped_breaks(std::span<const double> breaks, double edge, double d,
                                  bool below) {
  std::vector<double> out;
  for (double x : breaks) {
    const double dist = below ? x - edge : edge - x;
    if (!(dist > 0.0)) continue;
    const double ratio = dist / d;
    out.push_back(std::isfinite(ratio) ? std::log1p(ratio) : std::log(dist) - std::log(d));
  }
  return out;
}

template <int N>
void append_gauss(std::span<const double> edges, Rule& rule) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    // Boost stores the non-negative half; a zero abscissa (odd N) comes first.
    for (std::size_t i = x.size(); i-- > 0;) {
      if (x[i] == 0.0) continue;
      rule.nodes.push_back(mid - half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
    if (x[0] == 0.0) {
      rule.nodes.push_back(mid);
      rule.weights.push_back(half * w[0]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) continue;
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
  }
}

}  // namespace

double integrate(const RealFn& f, double a, double b, std::span<const double> breaks,
                 Tolerance tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, breaks, tol);
  const auto pts = split_points(a, b, breaks);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate_piece(f, pts[i], pts[i + 1], tol);
  return sum;
}

double pv_cauchy(const RealFn& f, double a, double b, double x, std::span<const double> breaks,
                 Tolerance tol) {
  if (!(x > a && x < b)) throw DomainError("pv_cauchy: pole must lie inside the interval");
  // Symmetric part on [x - r, x + r] folds into a bounded integrand; the
  // rest is a regular Cauchy integral seen from outside its interval.
  const double r = std::min(x - a, b - x);
  auto sym = [&](double s) { return s == 0.0 ? 0.0 : (f(x - s) - f(x + s)) / s; };
  std::vector<double> sb;
  for (double k : breaks) {
    const double s = std::abs(k - x);
    if (s > 0.0 && s < r) sb.push_back(s);
  }
  double sum = integrate(sym, 0.0, r, sb, tol);
  if (x - r > a) sum += cauchy_outside(f, a, x - r, x, breaks, tol);
  if (x + r < b) sum += cauchy_outside(f, x + r, b, x, breaks, tol);
  return sum;
}

namespace {

// Log substitution c = edge -/+ d (e^u - 1) for a point at distance d from the
// interval; written so that d down to DBL_MIN neither overflows nor cancels.
struct LogMap {
  double d, log_d, top;

  LogMap(double dist, double length) : d(dist), log_d(std::log(dist)) {
    const double ratio = length / dist;
    top = std::isfinite(ratio) ? std::log1p(ratio) : std::log(length) - log_d;
  }
  double offset(double u) const { return u < 1.0 ? std::expm1(u) * d : std::exp(u + log_d) - d; }
  double inv_d_exp(double u) const { return std::exp(-u - log_d); }
};

}  // namespace

double cauchy_outside(const RealFn& f, double a, double b, double x,
                      std::span<const double> breaks, Tolerance tol) {
  if (x < a) {
    const LogMap m(a - x, b - a);
    auto g = [&](double u) { return f(a + m.offset(u)); };
    return -integrate(g, 0.0, m.top, mapped_breaks(breaks, a, m.d, true), tol);
  }
  if (x > b) {
    const LogMap m(x - b, b - a);
    auto g = [&](double u) { return f(b - m.offset(u)); };
    return integrate(g, 0.0, m.top, mapped_breaks(breaks, b, m.d, false), tol);
  }
  throw DomainError("cauchy_outside: point lies inside the interval");
}

double cauchy_outside_sq(const RealFn& f, double a, double b, double x,
                         std::span<const double> breaks, Tolerance tol) {
  if (x < a) {
    const LogMap m(a - x, b - a);
    auto g = [&](double u) { return f(a + m.offset(u)) * m.inv_d_exp(u); };
    return integrate(g, 0.0, m.top, mapped_breaks(breaks, a, m.d, true), tol);
  }
  if (x > b) {
    const LogMap m(x - b, b - a);
    auto g = [&](double u) { return f(b - m.offset(u)) * m.inv_d_exp(u); };
    return integrate(g, 0.0, m.top, mapped_breaks(breaks, b, m.d, false), tol);
  }
  throw DomainError("cauchy_outside_sq: point lies inside the interval");
}

double find_root(const RealFn& f, double lo, double hi, double abs_tol) {
  return find_root(f, lo, hi, f(lo), f(hi), abs_tol);
}

double find_root(const RealFn& f, double lo, double hi, double f_lo, double f_hi,
                 double abs_tol) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0) || !std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    throw RootNotBracketed(
        fmt::format("no sign change on [{:.17g}, {:.17g}] (f = {:.6g}, {:.6g})", lo, hi, f_lo, f_hi));
  }
  std::uintmax_t iters = 200;
  auto done = [abs_tol](double x, double y) { return std::abs(y - x) <= abs_tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iters);
  return 0.5 * (a + b);
}

std::vector<double> uniform_panels(double a, double b, double max_width) {
  const double span = b - a;
  std::size_t n = 1;
  if (max_width > 0.0 && span > max_width) n = static_cast<std::size_t>(std::ceil(span / max_width));
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i) edges[i] = a + span * static_cast<double>(i) / static_cast<double>(n);
  edges[n] = b;
  return edges;
}

Rule gauss_legendre(std::span<const double> panel_edges, int order) {
  Rule rule;
  const std::size_t panels = panel_edges.size() > 1 ? panel_edges.size() - 1 : 0;
  rule.nodes.reserve(panels * static_cast<std::size_t>(order));
  rule.weights.reserve(panels * static_cast<std::size_t>(order));
  switch (order) {
    case 4: append_gauss<4>(panel_edges, rule); break;
    case 5: append_gauss<5>(panel_edges, rule); break;
    case 8: append_gauss<8>(panel_edges, rule); break;
    default: throw DomainError(fmt::format("unsupported Gauss-Legendre order {}", order));
  }
  return rule;
}

}  // namespace fano_tunnel::quad
