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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/quadrature.hpp"
#include "fano_tunnel/spectral.hpp"
#include "support.hpp"

using namespace fano_tunnel;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams unit_band(double g) {
  ModelParams p;
  p.epsilon = 1.0;
  p.e0 = 0.0;
  p.eta_min = 0.0;
  p.eta_max = 2.0;
  p.g = CouplingFn::constant(g);
  p.g_prime = CouplingFn::constant(g);
  return p;
}

// Dispersion function for g^2 = 0.1 eta^0.5 on [0, 20] below the band,
// integrated independently with eta = x^2 and composite Simpson.
double power_law_dispersion(double E) {
  const int n = 20000;
  const double top = std::sqrt(20.0), h = top / n;
  auto f = [E](double x) { return 0.2 * x * x / (E - x * x); };
  double s = f(0.0) + f(top);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return E - s * h / 3.0;
}

double bisect(double (*f)(double), double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("shift function examples") {
    const auto p = unit_band(0.5);
    CHECK(std::abs(shift_function(p, Channel::A, 1.0)) < 1e-14);
    CHECK(shift_function(p, Channel::A, 1.5) == doctest::Approx(0.25 * std::log(3.0)).epsilon(1e-9));
    CHECK(shift_function(p, Channel::A, 1.5) == doctest::Approx(0.27465).epsilon(1e-4));
    auto zero = p;
    zero.g = CouplingFn::constant(0.0);
    for (double E : {-1.0, 0.5, 1.0, 3.0}) CHECK(shift_function(zero, Channel::A, E) == 0.0);
  }

  TEST_CASE("shift function matches the constant-coupling logarithm") {
    auto p = test::broad_band(0.7, 0.2);
    const double g2 = p.g.squared(0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(p.eta_min - 5.0, p.eta_max + 5.0);
    for (int i = 0; i < 200; ++i) {
      const double E = u(rng);
      if (std::abs(E - p.eta_min) < 1e-6 || std::abs(E - p.eta_max) < 1e-6) continue;
      const double exact = g2 * std::log(std::abs((E - p.eta_min) / (p.eta_max - E)));
      CHECK(shift_function(p, Channel::A, E) == doctest::Approx(exact).epsilon(1e-9));
    }
  }

  TEST_CASE("spectral density peak and breit-wigner shape") {
    const double gamma = 0.3;
    const auto p = test::broad_band(gamma, gamma);
    const SpectralSolution s(p, Channel::A);
    const double eR = s.resonance_energy();
    CHECK(s.width() == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(s.density(eR) == doctest::Approx(2.0 / (kPi * gamma)).epsilon(1e-12));
    double worst = 0.0, peak = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double E = p.eta_min + (p.eta_max - p.eta_min) * i / 4000.0;
      const double bw = gamma / (2.0 * kPi) / ((E - eR) * (E - eR) + gamma * gamma / 4.0);
      worst = std::max(worst, std::abs(s.density(E) - bw));
      peak = std::max(peak, bw);
    }
    CHECK(worst <= 0.01 * peak);
  }

  TEST_CASE("density is nonnegative and off band is an error") {
    const auto p = test::broad_band(1.0, 0.5);
    for (auto ch : {Channel::A, Channel::B}) {
      const auto fc = FanoChannel::from(p, ch);
      for (int i = 0; i <= 500; ++i) {
        const double E = fc.lo + (fc.hi - fc.lo) * i / 500.0;
        CHECK(spectral_density(p, ch, E) >= 0.0);
      }
      CHECK_THROWS_AS(spectral_density(p, ch, fc.hi + 1.0), DomainError);
    }
  }

  TEST_CASE("uncoupled channel keeps its discrete state") {
    auto p = test::broad_band(0.3, 0.0);
    const SpectralSolution b(p, Channel::B);
    CHECK(b.density(p.e0 + 3.0) == 0.0);
    REQUIRE(b.discrete().size() == 1);
    CHECK(b.discrete()[0].energy == p.e0);
    CHECK(b.discrete()[0].weight == 1.0);
    CHECK(b.total_weight() == doctest::Approx(1.0).epsilon(1e-14));
    const auto r = resonance(p, Channel::B);
    CHECK(r.energy == p.e0);
    CHECK(r.width == 0.0);
    // Uncoupled level outside the band is a genuine discrete root.
    auto q = unit_band(0.0);
    q.e0 = 3.0;
    const auto roots = discrete_roots(q, Channel::A);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].energy == 4.0);
    CHECK(roots[0].weight == 1.0);
  }

  TEST_CASE("resonance on a symmetric band sits at the bare level") {
    ModelParams p;
    p.epsilon = 1.0;
    p.e0 = 9.0;
    p.eta_min = 0.0;
    p.eta_max = 20.0;
    p.g = CouplingFn::from_width(0.5);
    p.g_prime = CouplingFn::from_width(0.5);
    const auto r = resonance(p, Channel::A);
    CHECK(r.energy == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(r.width == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("resonance splitting follows the logarithmic shifts") {
    // Levels 7 on [0, 13] and 6 on [1, 14]: to first order in g^2 the shifts
    // are g^2 ln(7/6) and g^2 ln(5/8).
    const auto p = test::broad_band(0.3, 0.3);
    const double g2 = 0.3 / (2.0 * std::numbers::pi);
    const double split = resonance(p, Channel::A).energy - resonance(p, Channel::B).energy;
    CHECK(split == doctest::Approx(1.0 + g2 * (std::log(7.0 / 6.0) - std::log(5.0 / 8.0))).epsilon(1e-3));
  }

  TEST_CASE("power-law coupling has one root below the band") {
    ModelParams p;
    p.epsilon = 1.0;
    p.e0 = -1.0;  // channel A level e0 + eps = 0 = eta_min
    p.eta_min = 0.0;
    p.eta_max = 20.0;
    p.g = CouplingFn::power_law(0.1, 0.5);
    p.g_prime = CouplingFn::power_law(0.1, 0.5);
    const auto roots = discrete_roots(p, Channel::A);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].energy < 0.0);
    const double oracle = bisect(power_law_dispersion, -50.0, -1e-9);
    CHECK(roots[0].energy == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(roots[0].weight > 0.0);
    CHECK(roots[0].weight <= 1.0);
  }

  TEST_CASE("broad band with a deep level has no discrete roots") {
    const auto p = test::broad_band(0.3, 0.3);
    CHECK(discrete_roots(p, Channel::A).empty());
    CHECK(discrete_roots(p, Channel::B).empty());
  }

  TEST_CASE("narrow band roots lie outside and complete the basis") {
    ModelParams p;
    p.epsilon = 0.5;
    p.e0 = 0.2;
    p.eta_min = 0.0;
    p.eta_max = 1.0;
    p.g = CouplingFn::constant(0.4);
    p.g_prime = CouplingFn::tabulated({{0.0, 0.1}, {0.5, 0.5}, {1.0, 0.2}});
    for (auto ch : {Channel::A, Channel::B}) {
      const SpectralSolution s(p, ch);
      CHECK_FALSE(s.discrete().empty());
      for (const auto& d : s.discrete()) {
        CHECK_FALSE(s.fano().in_band(d.energy));
        CHECK(d.weight > 0.0);
        CHECK(d.weight <= 1.0);
      }
      CHECK(s.total_weight() == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("completeness on random parameters") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 10; ++draw) {
      ModelParams p;
      p.epsilon = 0.2 + 2.0 * u(rng);
      p.eta_min = -2.0 + 4.0 * u(rng);
      p.eta_max = p.eta_min + 1.0 + 10.0 * u(rng);
      p.e0 = p.eta_min - 1.0 + (p.eta_max - p.eta_min + 2.0) * u(rng);
      p.g = CouplingFn::constant(0.05 + 0.5 * u(rng));
      p.g_prime = CouplingFn::constant(0.05 + 0.5 * u(rng));
      for (auto ch : {Channel::A, Channel::B}) {
        const SpectralSolution s(p, ch);
        CHECK(s.total_weight() == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("channel B equals channel A of the shifted problem") {
    auto p = test::broad_band(0.8, 0.4);
    p.g_prime = CouplingFn::tabulated({{0.0, 0.2}, {10.0, 0.3}, {p.eta_max, 0.25}});
    // Channel B: level e0 on [eta_min + eps, eta_max + eps] with g'(c - eps).
    ModelParams q;
    q.epsilon = p.epsilon;
    q.e0 = p.e0 - p.epsilon;
    q.eta_min = p.eta_min + p.epsilon;
    q.eta_max = p.eta_max + p.epsilon;
    q.g = CouplingFn::tabulated({{q.eta_min, 0.2}, {10.0 + p.epsilon, 0.3}, {q.eta_max, 0.25}});
    q.g_prime = p.g;
    for (double E : {q.eta_min - 3.0, q.eta_min + 0.5, p.e0, p.e0 + 4.0, q.eta_max + 2.0}) {
      CHECK(shift_function(p, Channel::B, E) == doctest::Approx(shift_function(q, Channel::A, E)).epsilon(1e-9));
      if (E > q.eta_min && E < q.eta_max) {
        CHECK(spectral_density(p, Channel::B, E) ==
              doctest::Approx(spectral_density(q, Channel::A, E)).epsilon(1e-9));
      }
    }
    CHECK(resonance(p, Channel::B).energy == doctest::Approx(resonance(q, Channel::A).energy).epsilon(1e-10));
  }

  TEST_CASE("overlap kernel contract") {
    auto p = test::broad_band(1.0, 0.0);
    const auto k = continuum_amplitude_overlap(p, 5.0, 6.0);
    CHECK(k.amplitude == 0.0);
    CHECK(k.regular == 0.0);
    CHECK(k.principal_numerator == 0.0);
    CHECK(k.delta_coefficient == 0.0);
    p.topology = Topology::OrthogonalContinua;
    CHECK_THROWS_AS(continuum_amplitude_overlap(p, 5.0, 6.0), DomainError);
    auto q = test::broad_band(1.0, 0.5);
    CHECK_THROWS_AS(continuum_amplitude_overlap(q, -1.0, 6.0), DomainError);
  }

  TEST_CASE("overlap kernel reproduces the re-correlation of the time-domain route") {
    // R(t) = int int dE dE' b0(E) a0(E') e^{-i(E - E')t} <B_E|A_E'>, with the
    // delta line integrated exactly and the principal part by subtraction.
    ModelParams p;
    p.epsilon = 1.0;
    p.e0 = 4.0;
    p.eta_min = 0.0;
    p.eta_max = 10.0;
    p.g = CouplingFn::from_width(1.0);
    p.g_prime = CouplingFn::from_width(0.5);
    const double t = 1.0, eps = p.epsilon;
    using C = std::complex<double>;
    // Offset panel counts keep E - eps off the inner nodes.
    const auto re = quad::gauss_legendre(quad::uniform_panels(p.eta_min + eps, p.eta_max + eps, 10.0 / 40), 8);
    const auto rv = quad::gauss_legendre(quad::uniform_panels(p.eta_min, p.eta_max, 10.0 / 47), 8);
    C R{0.0, 0.0};
    for (std::size_t i = 0; i < re.size(); ++i) {
      const double E = re.nodes[i], u = E - eps;
      const auto ku = continuum_amplitude_overlap(p, E, u);
      const double au = ku.amplitude * ku.amplitude;
      const C fu = au * ku.principal_numerator * std::exp(C{0.0, -eps * t});
      C line = au * ku.delta_coefficient * std::exp(C{0.0, -eps * t});
      line += fu * std::log((u - p.eta_min) / (p.eta_max - u));
      for (std::size_t j = 0; j < rv.size(); ++j) {
        const double v = rv.nodes[j];
        const auto k = continuum_amplitude_overlap(p, E, v);
        const C ph = std::exp(C{0.0, -(E - v) * t});
        const double a2 = k.amplitude * k.amplitude;
        line += rv.weights[j] * (a2 * k.regular * ph + (a2 * k.principal_numerator * ph - fu) / (u - v));
      }
      R += re.weights[i] * line;
    }
    const TimeGrid grid{0.0, t, 2};
    const auto shared = evolve(p, grid, EvolutionMethod::Quadrature);
    p.topology = Topology::OrthogonalContinua;
    const auto separate = evolve(p, grid, EvolutionMethod::Quadrature);
    const C time_domain = 2.0 * (shared[1].rho.rho_pm - separate[1].rho.rho_pm);
    CHECK(std::abs(time_domain) > 0.1);
    CHECK(std::abs(R - time_domain) < 1e-5);
  }
}
