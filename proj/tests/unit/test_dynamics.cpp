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
#include <cstdlib>
#include <numbers>

#include "fano_tunnel/dynamics.hpp"
#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/spectral.hpp"
#include "support.hpp"

using namespace fano_tunnel;

namespace {

void check_physical(const Trajectory& tr) {
  for (const auto& p : tr) {
    CHECK(p.rho.rho_pp >= -kPositivityTolerance);
    CHECK(p.rho.rho_pp <= 1.0 + kPositivityTolerance);
    CHECK(p.rho.det() >= -kPositivityTolerance);
    CHECK(p.P >= -kPositivityTolerance);
    CHECK(p.P <= 1.0 + kPositivityTolerance);
    CHECK(p.delta >= 0.0);
    CHECK(p.delta <= 0.5 + 1e-12);
    CHECK(p.P == doctest::Approx(tunneling_probability(p.rho)).epsilon(1e-15));
  }
}

ModelParams uncoupled() {
  ModelParams p;
  p.epsilon = 1.0;
  p.e0 = 5.0;
  p.eta_min = 0.0;
  p.eta_max = 11.0;
  p.g = CouplingFn::constant(0.0);
  p.g_prime = CouplingFn::constant(0.0);
  return p;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("tunneling probability and idempotency defect") {
    CHECK(tunneling_probability(localized_left()) == 0.0);
    CHECK(tunneling_probability({0.5, {0.0, 0.0}}) == 0.5);
    CHECK(idempotency_defect({0.5, {0.0, 0.0}}) == 0.5);
    CHECK(idempotency_defect(localized_left()) == 0.0);
    const double eps = 1.3;
    for (double t : {0.0, 0.4, 2.0, 7.5}) {
      const ReducedDensity pure{0.5, 0.5 * std::exp(Complex{0.0, -eps * t})};
      CHECK(tunneling_probability(pure) == doctest::Approx(std::pow(std::sin(eps * t / 2), 2)).epsilon(1e-14));
      CHECK(idempotency_defect(pure) < 1e-15);
    }
    CHECK(idempotency_defect({0.5, {0.5 + 1e-12, 0.0}}) == 0.0);  // clipped
    CHECK_THROWS_AS(idempotency_defect({0.5, {0.6, 0.0}}), PositivityViolation);
  }

  TEST_CASE("closed single examples") {
    const auto r0 = closed_single(3.0, 1.0, 0.0);
    CHECK(r0.rho_pp == 0.5);
    CHECK(r0.rho_pm == Complex{0.5, 0.0});
    CHECK(closed_single(3.0, 1.0, std::log(2.0) / 3.0).rho_pp == doctest::Approx(0.25).epsilon(1e-15));
    const auto undamped = closed_single(0.0, 1.7, 2.0);
    CHECK(std::abs(undamped.rho_pm - 0.5 * std::exp(Complex{0.0, -3.4})) < 1e-15);
  }

  TEST_CASE("single relaxation defect peaks at 1/8") {
    const double gamma = 0.7;
    const double tm = std::log(2.0) / gamma;
    CHECK(idempotency_defect(closed_single(gamma, 1.0, tm)) == doctest::Approx(0.125).epsilon(1e-14));
    for (double t : {0.5 * tm, 0.9 * tm, 1.1 * tm, 2.0 * tm}) {
      const double x = std::exp(-gamma * t);
      CHECK(idempotency_defect(closed_single(gamma, 1.0, t)) == doctest::Approx(0.5 * x * (1 - x)).epsilon(1e-13));
      CHECK(idempotency_defect(closed_single(gamma, 1.0, t)) < 0.125);
    }
  }

  TEST_CASE("closed two at equal widths is undamped in P") {
    const double g = 0.9, eps = 1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.1 * i;
      const auto rho = closed_two(g, g, eps, t, Topology::SingleContinuum);
      CHECK(std::abs(tunneling_probability(rho) - std::pow(std::sin(eps * t / 2), 2)) <= 1e-12);
      const double x = std::exp(-g * t);
      CHECK(std::abs(idempotency_defect(rho) - 2 * x * (1 - x) * std::pow(std::sin(eps * t), 2)) <= 1e-12);
    }
  }

  TEST_CASE("closed two reduces to closed single") {
    for (double t : {0.0, 0.3, 1.0, 5.0}) {
      CHECK(test::rho_distance(closed_two(2.0, 0.0, 1.0, t, Topology::SingleContinuum),
                               closed_single(2.0, 1.0, t)) < 1e-15);
    }
  }

  TEST_CASE("re-correlation coefficient and asymptote") {
    CHECK(recorrelation_coefficient(2.0, 0.5, Topology::SingleContinuum) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(recorrelation_coefficient(2.0, 0.5, Topology::OrthogonalContinua) == 0.0);
    CHECK(delta_asymptote(2.0, 0.5, Topology::SingleContinuum) == doctest::Approx(0.18).epsilon(1e-14));
    CHECK(delta_asymptote(1.0, 1.0, Topology::SingleContinuum) == doctest::Approx(0.0));
    CHECK(delta_asymptote(2.0, 0.5, Topology::OrthogonalContinua) == 0.5);
    CHECK_THROWS_AS(delta_asymptote(0.0, 0.5, Topology::SingleContinuum), DomainError);
    CHECK_THROWS_AS(delta_asymptote(2.0, 0.0, Topology::SingleContinuum), DomainError);
    // Long-time closed form approaches the asymptote.
    const auto late = closed_two(2.0, 0.5, 1.0, 60.0, Topology::SingleContinuum);
    CHECK(idempotency_defect(late) == doctest::Approx(0.18).epsilon(1e-10));
  }

  TEST_CASE("closed form rates are derivatives") {
    const double h = 1e-5;
    for (auto topo : {Topology::SingleContinuum, Topology::OrthogonalContinua}) {
      for (double t : {0.2, 1.0, 3.0}) {
        const auto r = closed_two_rate(2.0, 0.5, 1.1, t, topo);
        const auto plus = closed_two(2.0, 0.5, 1.1, t + h, topo);
        const auto minus = closed_two(2.0, 0.5, 1.1, t - h, topo);
        CHECK(r.d_rho_pp == doctest::Approx((plus.rho_pp - minus.rho_pp) / (2 * h)).epsilon(1e-8));
        CHECK(std::abs(r.d_rho_pm - (plus.rho_pm - minus.rho_pm) / (2 * h)) < 1e-8);
      }
    }
    const auto s = closed_single_rate(0.3, 1.0, 2.0);
    const auto plus = closed_single(0.3, 1.0, 2.0 + h), minus = closed_single(0.3, 1.0, 2.0 - h);
    CHECK(std::abs(s.d_rho_pm - (plus.rho_pm - minus.rho_pm) / (2 * h)) < 1e-9);
  }

  TEST_CASE("closed form preconditions") {
    auto p = test::broad_band(0.3, 0.0);
    CHECK_NOTHROW(closed_form_params(p));
    const auto cf = closed_form_params(p);
    CHECK(cf.gamma == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(cf.gamma_prime == 0.0);
    CHECK(cf.omega == doctest::Approx(resonance(p, Channel::A).energy - resonance(p, Channel::B).energy));
    p.g = CouplingFn::tabulated({{p.eta_min, 0.2}, {p.eta_max, 0.2}});
    CHECK_THROWS_AS(closed_form_params(p), MethodUnavailable);
    auto q = test::broad_band(0.3, 0.0);
    q.e0 = 0.0;
    CHECK_THROWS_AS(closed_form_params(q), MethodUnavailable);
    q.eta_max = -1.0;
    CHECK_THROWS_AS(closed_form_params(q), DomainError);
  }

  TEST_CASE("initial condition for every method") {
    const auto p = test::broad_band(1.0, 0.5);
    EvolveOptions opts;
    opts.oracle_bins = 400;
    for (auto m : {EvolutionMethod::ClosedForm, EvolutionMethod::Quadrature, EvolutionMethod::Oracle}) {
      const auto tr = evolve(p, TimeGrid{0.0, 1.0, 5}, m, opts);
      // Quadrature reproduces t = 0 only to its completeness tolerance.
      const double tol = m == EvolutionMethod::Quadrature ? 1e-6 : 1e-12;
      CAPTURE(static_cast<int>(m));
      CHECK(std::abs(tr[0].rho.rho_pp - 0.5) < tol);
      CHECK(std::abs(tr[0].rho.rho_pm - Complex{0.5, 0.0}) < tol);
      CHECK(std::abs(tr[0].P) < tol);
      CHECK(tr[0].delta < 2.0 * tol);
      check_physical(tr);
    }
  }

  TEST_CASE("uncoupled model gives pure oscillation") {
    const auto p = uncoupled();
    const TimeGrid grid{0.0, 20.0, 101};
    EvolveOptions opts;
    opts.oracle_bins = 100;
    for (auto m : {EvolutionMethod::Quadrature, EvolutionMethod::Oracle}) {
      const auto tr = evolve(p, grid, m, opts);
      for (const auto& pt : tr) {
        CHECK(pt.rho.rho_pp == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(pt.rho.rho_pm - 0.5 * std::exp(Complex{0.0, -p.epsilon * pt.t})) < 1e-12);
        CHECK(pt.delta < 1e-12);
      }
    }
  }

  TEST_CASE("quadrature against closed form: strong coupling, broad band") {
    // The gap is the Lorentzian weight outside the band, ~ 1/(pi * margin/G);
    // it halves when the margins double.
    const TimeGrid grid{0.0, 4.0, 201};
    double previous = 1.0;
    for (double margin : {20.0, 40.0, 80.0}) {
      ModelParams p;
      p.epsilon = 1.0;
      p.e0 = 3.0 * margin;
      p.eta_min = 0.0;
      p.eta_max = 6.0 * margin + 1.0;
      p.g = CouplingFn::from_width(3.0);
      p.g_prime = CouplingFn::constant(0.0);
      const double d = test::sup_distance(evolve(p, grid, EvolutionMethod::ClosedForm),
                                          evolve(p, grid, EvolutionMethod::Quadrature));
      CAPTURE(margin);
      CHECK(d <= 0.4 / margin);
      CHECK(d < 0.6 * previous);
      if (margin >= 40.0) CHECK(d <= 1e-2);
      previous = d;
    }
  }

  TEST_CASE("quadrature against closed form: two widths, orthogonal continua") {
    const auto p = test::broad_band(2.0, 0.5, 1.0, Topology::OrthogonalContinua);
    const TimeGrid grid{0.0, 10.0, 201};
    const double d = test::sup_distance(evolve(p, grid, EvolutionMethod::ClosedForm),
                                        evolve(p, grid, EvolutionMethod::Quadrature));
    CHECK(d <= 2e-2);
  }

  TEST_CASE("quadrature diagnostics: norm and completeness") {
    const auto p = test::broad_band(2.0, 0.5);
    QuadratureDiagnostics diag;
    const auto tr = evolve_quadrature(p, TimeGrid{0.5, 8.0, 61}, &diag);
    CHECK(diag.energy_nodes > 0);
    CHECK(diag.time_nodes > 0);
    CHECK(diag.completeness_defect < 1e-6);
    CHECK(diag.norm_defect < 1e-8);
    check_physical(tr);
  }

  TEST_CASE("quadrature includes discrete states of a narrow band") {
    ModelParams p;
    p.epsilon = 0.5;
    p.e0 = 0.2;
    p.eta_min = 0.0;
    p.eta_max = 1.0;
    p.g = CouplingFn::constant(0.4);
    p.g_prime = CouplingFn::constant(0.3);
    QuadratureDiagnostics diag;
    const auto tr = evolve_quadrature(p, TimeGrid{0.0, 30.0, 61}, &diag);
    CHECK(diag.completeness_defect < 1e-6);
    CHECK(diag.norm_defect < 1e-8);
    check_physical(tr);
    EvolveOptions opts;
    opts.oracle_bins = 4000;
    const auto oracle = evolve(p, TimeGrid{0.0, 30.0, 61}, EvolutionMethod::Oracle, opts);
    CHECK(test::sup_distance(tr, oracle) < 2e-3);
  }

  TEST_CASE("parallel evaluation is bit-identical to serial") {
    const auto p = test::broad_band(2.0, 0.5);
    const TimeGrid grid{0.0, 5.0, 41};
    EvolveOptions opts;
    opts.oracle_bins = 300;
    for (auto m : {EvolutionMethod::Quadrature, EvolutionMethod::Oracle}) {
      setenv("FANO_TUNNEL_THREADS", "1", 1);
      const auto serial = evolve(p, grid, m, opts);
      setenv("FANO_TUNNEL_THREADS", "4", 1);
      const auto threaded = evolve(p, grid, m, opts);
      unsetenv("FANO_TUNNEL_THREADS");
      for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].rho.rho_pp == threaded[i].rho.rho_pp);
        CHECK(serial[i].rho.rho_pm == threaded[i].rho.rho_pm);
      }
    }
  }

  TEST_CASE("closed form refuses non-constant couplings") {
    auto p = test::broad_band(0.3, 0.3);
    p.g = CouplingFn::power_law(0.01, 0.5);
    CHECK_THROWS_AS(evolve(p, TimeGrid{0.0, 1.0, 3}, EvolutionMethod::ClosedForm), MethodUnavailable);
  }
}
