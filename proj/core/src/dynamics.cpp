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

#include "fano_tunnel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/oracle.hpp"
#include "fano_tunnel/parallel.hpp"
#include "fano_tunnel/quadrature.hpp"
#include "fano_tunnel/spectral.hpp"

namespace fano_tunnel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Caps on the Quadrature path's grids; exceeding them means the requested
// widths/times are out of proportion with the band.
constexpr std::size_t kMaxEnergyNodes = 2'000'000;
constexpr std::size_t kMaxTimeNodes = 2'000'000;

Complex phase(double x) { return {std::cos(x), std::sin(x)}; }

void require_valid(const ModelParams& params) {
  const auto report = validate(params);
  if (!report.valid()) {
    std::string msg = "invalid model parameters:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw DomainError(msg);
  }
}

}  // namespace

double tunneling_probability(const ReducedDensity& rho) {
  return 0.5 * (1.0 - 2.0 * rho.rho_pm.real());
}

double idempotency_defect(const ReducedDensity& rho) {
  const double det = rho.det();
  if (det < -kPositivityTolerance) {
    throw PositivityViolation(fmt::format("det rho = {:.3e} below -{:.0e}", det, kPositivityTolerance));
  }
  return std::max(0.0, 2.0 * det);
}

TrajectoryPoint make_point(double t, const ReducedDensity& rho, std::optional<DensityRate> d_rho) {
  return {t, rho, tunneling_probability(rho), idempotency_defect(rho), d_rho};
}

ReducedDensity closed_single(double gamma, double omega, double t) {
  return {0.5 * std::exp(-gamma * t), 0.5 * std::exp(Complex{-0.5 * gamma * t, -omega * t})};
}

DensityRate closed_single_rate(double gamma, double omega, double t) {
  const auto rho = closed_single(gamma, omega, t);
  return {-gamma * rho.rho_pp, Complex{-0.5 * gamma, -omega} * rho.rho_pm};
}

double recorrelation_coefficient(double gamma, double gamma_prime, Topology topology) {
  const double sum = gamma + gamma_prime;
  if (topology == Topology::OrthogonalContinua || sum == 0.0) return 0.0;
  return 2.0 * std::sqrt(gamma * gamma_prime) / sum;
}

ReducedDensity closed_two(double gamma, double gamma_prime, double omega, double t,
                          Topology topology) {
  const double s = gamma + gamma_prime;
  const double c = recorrelation_coefficient(gamma, gamma_prime, topology);
  const double decay = std::exp(-0.5 * s * t);
  ReducedDensity rho;
  rho.rho_pp = 0.5 * (1.0 + std::exp(-gamma * t) - std::exp(-gamma_prime * t));
  rho.rho_pm = 0.5 * (phase(-omega * t) * decay + c * phase(omega * t) * (1.0 - decay));
  return rho;
}

DensityRate closed_two_rate(double gamma, double gamma_prime, double omega, double t,
                            Topology topology) {
  const double s = gamma + gamma_prime;
  const double c = recorrelation_coefficient(gamma, gamma_prime, topology);
  const double decay = std::exp(-0.5 * s * t);
  DensityRate r;
  r.d_rho_pp = 0.5 * (-gamma * std::exp(-gamma * t) + gamma_prime * std::exp(-gamma_prime * t));
  r.d_rho_pm = 0.5 * (Complex{-0.5 * s, -omega} * phase(-omega * t) * decay +
                      c * phase(omega * t) * (kI * omega * (1.0 - decay) + 0.5 * s * decay));
  return r;
}

double delta_asymptote(double gamma, double gamma_prime, Topology topology) {
  if (!(gamma > 0.0) || !(gamma_prime > 0.0)) {
    throw DomainError("delta asymptote needs both widths nonzero (the limits do not commute)");
  }
  if (topology == Topology::OrthogonalContinua) return 0.5;
  const double s = gamma + gamma_prime;
  return 0.5 - 2.0 * gamma * gamma_prime / (s * s);
}

ClosedFormParams closed_form_params(const ModelParams& params) {
  require_valid(params);
  if (!params.g.is_constant() || !params.g_prime.is_constant()) {
    throw MethodUnavailable("closed form needs constant couplings");
  }
  const auto report = validate(params);
  if (!report.warnings.empty()) {
    throw MethodUnavailable("closed form needs the broad-band condition: " + report.warnings.front());
  }
  const auto a = resonance(params, Channel::A);
  const auto b = resonance(params, Channel::B);
  return {a.width, b.width, a.energy - b.energy, params.topology};
}

// ---------------------------------------------------------------------------
// Quadrature path
// ---------------------------------------------------------------------------

namespace {

struct ChannelGrid {
  FanoChannel ch;
  bool coupled = false;
  std::vector<double> energy;
  std::vector<double> weight;  // quadrature weight times density
  std::vector<DiscreteLevel> discrete;

  // sum_j weight_j e^{-i E_j t} + sum_d w_d e^{-i E_d t}
  Complex transform(double t) const {
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < energy.size(); ++j) sum += weight[j] * phase(-energy[j] * t);
    for (const auto& d : discrete) sum += d.weight * phase(-d.energy * t);
    return sum;
  }
};

constexpr double kEdgeGrading = 0.15;

ChannelGrid build_channel(const SpectralSolution& sol, double panel_width) {
  ChannelGrid cg;
  cg.ch = sol.fano();
  cg.coupled = !cg.ch.uncoupled();
  cg.discrete = sol.discrete();
  if (!cg.coupled) return cg;
  // The density vanishes like 1/log^2 at a band edge where the coupling is
  // finite, so the end panels are graded geometrically toward the edges.
  const auto uniform = quad::uniform_panels(cg.ch.lo, cg.ch.hi, panel_width);
  std::vector<double> edges;
  const double w = uniform[1] - uniform[0];
  const double floor = 1e-10 * std::max(1.0, cg.ch.hi - cg.ch.lo);
  edges.push_back(cg.ch.lo);
  std::vector<double> left;
  for (double d = w * kEdgeGrading; d > floor; d *= kEdgeGrading) left.push_back(cg.ch.lo + d);
  edges.insert(edges.end(), left.rbegin(), left.rend());
  edges.insert(edges.end(), uniform.begin() + 1, uniform.end() - 1);
  for (double d = w * kEdgeGrading; d > floor; d *= kEdgeGrading) edges.push_back(cg.ch.hi - d);
  std::sort(edges.begin(), edges.end());
  edges.push_back(cg.ch.hi);
  auto rule = quad::gauss_legendre(edges, 4);
  cg.energy = std::move(rule.nodes);
  cg.weight = std::move(rule.weights);
  std::vector<double> rho(cg.energy.size());
  parallel_for(cg.energy.size(), [&](std::size_t j) { rho[j] = cg.ch.density(cg.energy[j]); });
  for (std::size_t j = 0; j < rho.size(); ++j) cg.weight[j] *= rho[j];
  return cg;
}

// Time nodes: segment [0, t_0] (when t_0 > 0) followed by one segment per
// grid interval, each split into equal Gauss-Legendre panels.
struct TimeSegment {
  double start = 0.0;
  std::size_t panels = 0;
  int kind = 0;  // index into TimeRule::offsets/weights
};

struct TimeRule {
  std::vector<TimeSegment> segments;
  double h[2] = {0.0, 0.0};
  std::vector<double> offsets[2];  // node offsets inside one panel
  std::vector<double> weights[2];
  // grid index i is reached at the end of segment ends[i]; -1 for t = 0
  std::vector<long> ends;
  std::size_t order = 8;

  std::size_t node_count() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.panels * order;
    return n;
  }
};

TimeRule build_time_rule(const TimeGrid& grid, double h_max) {
  TimeRule tr;
  const auto gl = quad::gauss_legendre(std::vector<double>{0.0, 1.0}, 8);
  auto set_kind = [&](int kind, double length) {
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / h_max)));
    tr.h[kind] = length / static_cast<double>(m);
    tr.offsets[kind].clear();
    tr.weights[kind].clear();
    for (std::size_t q = 0; q < gl.size(); ++q) {
      tr.offsets[kind].push_back(gl.nodes[q] * tr.h[kind]);
      tr.weights[kind].push_back(gl.weights[q] * tr.h[kind]);
    }
    return m;
  };
  const double t0 = grid.t_start;
  if (t0 > 0.0) {
    const auto m0 = set_kind(1, t0);
    tr.segments.push_back({0.0, m0, 1});
    tr.ends.push_back(0);
  } else {
    tr.ends.push_back(-1);
  }
  const auto m = set_kind(0, grid.step());
  for (std::size_t i = 1; i < grid.n_points; ++i) {
    tr.segments.push_back({grid.at(i - 1), m, 0});
    tr.ends.push_back(static_cast<long>(tr.segments.size()) - 1);
  }
  return tr;
}

// Transform sampled on every time node, segment by segment.
std::vector<Complex> transform_on_nodes(const ChannelGrid& cg, const TimeRule& tr) {
  std::vector<std::size_t> first(tr.segments.size() + 1, 0);
  for (std::size_t s = 0; s < tr.segments.size(); ++s)
    first[s + 1] = first[s] + tr.segments[s].panels * tr.order;
  std::vector<Complex> out(first.back(), Complex{0.0, 0.0});

  const std::size_t n_e = cg.energy.size();
  // Per energy node: e^{-i E o_q} and e^{-i E h} for both segment kinds.
  std::vector<Complex> table[2];
  std::vector<Complex> step[2];
  for (int kind = 0; kind < 2; ++kind) {
    if (tr.offsets[kind].empty()) continue;
    table[kind].resize(n_e * tr.order);
    step[kind].resize(n_e);
    for (std::size_t j = 0; j < n_e; ++j) {
      for (std::size_t q = 0; q < tr.order; ++q)
        table[kind][j * tr.order + q] = phase(-cg.energy[j] * tr.offsets[kind][q]);
      step[kind][j] = phase(-cg.energy[j] * tr.h[kind]);
    }
  }

  parallel_for(tr.segments.size(), [&](std::size_t s) {
    const auto& seg = tr.segments[s];
    Complex* acc = out.data() + first[s];
    const auto& tab = table[seg.kind];
    const auto& stp = step[seg.kind];
    for (std::size_t j = 0; j < n_e; ++j) {
      Complex ph = cg.weight[j] * phase(-cg.energy[j] * seg.start);
      const Complex* tj = tab.data() + j * tr.order;
      for (std::size_t p = 0; p < seg.panels; ++p) {
        Complex* a = acc + p * tr.order;
        for (std::size_t q = 0; q < tr.order; ++q) a[q] += ph * tj[q];
        ph *= stp[j];
      }
    }
    const double h = tr.h[seg.kind];
    for (const auto& d : cg.discrete) {
      for (std::size_t p = 0; p < seg.panels; ++p) {
        const double t_p = seg.start + static_cast<double>(p) * h;
        for (std::size_t q = 0; q < tr.order; ++q)
          acc[p * tr.order + q] += d.weight * phase(-d.energy * (t_p + tr.offsets[seg.kind][q]));
      }
    }
  });
  return out;
}

struct Recorrelation {
  std::vector<Complex> value;
  std::vector<double> norm_a;  // int g^2 |a_t|^2
  std::vector<double> norm_b;
};

// R(t) = int d eta g g' b_t(eta + eps) a_t(eta)^*, where the continuum
// amplitudes obey a_t(eta) = -i int_0^t e^{-i eta (t - s)} alpha(s) ds.
Recorrelation recorrelation(const ModelParams& p, const TimeRule& tr, const TimeGrid& grid,
                            const std::vector<Complex>& alpha_nodes,
                            const std::vector<Complex>& beta_nodes, double panel_width) {
  const auto edges = quad::uniform_panels(p.eta_min, p.eta_max, panel_width);
  const auto rule = quad::gauss_legendre(edges, 5);
  const std::size_t n = rule.size();
  std::vector<double> wh(n), wga(n), wgb(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ga = p.g.amplitude(rule.nodes[k]);
    const double gb = p.g_prime.amplitude(rule.nodes[k]);
    wh[k] = rule.weights[k] * ga * gb;
    wga[k] = rule.weights[k] * ga * ga;
    wgb[k] = rule.weights[k] * gb * gb;
  }

  const std::size_t n_out = grid.n_points;
  const std::size_t chunks = chunk_count(n);
  std::vector<std::vector<Complex>> part_r(chunks, std::vector<Complex>(n_out));
  std::vector<std::vector<double>> part_a(chunks, std::vector<double>(n_out));
  std::vector<std::vector<double>> part_b(chunks, std::vector<double>(n_out));

  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t k0 = c * kReductionChunk;
    const std::size_t k1 = std::min(n, k0 + kReductionChunk);
    const std::size_t len = k1 - k0;
    std::vector<Complex> acc_a(len), acc_b(len);
    std::vector<Complex> tab_a[2], tab_b[2], stp_a[2], stp_b[2];
    for (int kind = 0; kind < 2; ++kind) {
      if (tr.offsets[kind].empty()) continue;
      tab_a[kind].resize(len * tr.order);
      tab_b[kind].resize(len * tr.order);
      stp_a[kind].resize(len);
      stp_b[kind].resize(len);
      for (std::size_t k = 0; k < len; ++k) {
        const double ea = rule.nodes[k0 + k];
        const double eb = ea + p.epsilon;
        for (std::size_t q = 0; q < tr.order; ++q) {
          const double o = tr.offsets[kind][q];
          tab_a[kind][k * tr.order + q] = tr.weights[kind][q] * phase(ea * o);
          tab_b[kind][k * tr.order + q] = tr.weights[kind][q] * phase(eb * o);
        }
        stp_a[kind][k] = phase(ea * tr.h[kind]);
        stp_b[kind][k] = phase(eb * tr.h[kind]);
      }
    }
    auto emit = [&](std::size_t i) {
      Complex r{0.0, 0.0};
      double na = 0.0, nb = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        r += wh[k0 + k] * acc_b[k] * std::conj(acc_a[k]);
        na += wga[k0 + k] * std::norm(acc_a[k]);
        nb += wgb[k0 + k] * std::norm(acc_b[k]);
      }
      part_r[c][i] = r;
      part_a[c][i] = na;
      part_b[c][i] = nb;
    };

    std::size_t node = 0;
    std::size_t next_out = 0;
    while (next_out < n_out && tr.ends[next_out] < 0) emit(next_out++);
    for (std::size_t s = 0; s < tr.segments.size(); ++s) {
      const auto& seg = tr.segments[s];
      const int kind = seg.kind;
      for (std::size_t k = 0; k < len; ++k) {
        const double ea = rule.nodes[k0 + k];
        Complex pa = phase(ea * seg.start);
        Complex pb = phase((ea + p.epsilon) * seg.start);
        const Complex* ta = tab_a[kind].data() + k * tr.order;
        const Complex* tb = tab_b[kind].data() + k * tr.order;
        Complex sa{0.0, 0.0}, sb{0.0, 0.0};
        std::size_t idx = node;
        for (std::size_t pnl = 0; pnl < seg.panels; ++pnl) {
          Complex la{0.0, 0.0}, lb{0.0, 0.0};
          for (std::size_t q = 0; q < tr.order; ++q, ++idx) {
            la += ta[q] * alpha_nodes[idx];
            lb += tb[q] * beta_nodes[idx];
          }
          sa += pa * la;
          sb += pb * lb;
          pa *= stp_a[kind][k];
          pb *= stp_b[kind][k];
        }
        acc_a[k] += sa;
        acc_b[k] += sb;
      }
      node += seg.panels * tr.order;
      while (next_out < n_out && tr.ends[next_out] == static_cast<long>(s)) emit(next_out++);
    }
  });

  Recorrelation out;
  out.value.assign(n_out, Complex{0.0, 0.0});
  out.norm_a.assign(n_out, 0.0);
  out.norm_b.assign(n_out, 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < n_out; ++i) {
      out.value[i] += part_r[c][i];
      out.norm_a[i] += part_a[c][i];
      out.norm_b[i] += part_b[c][i];
    }
  }
  // The e^{-i eta t} factors of a_t and b_t combine to e^{-i eps t}.
  for (std::size_t i = 0; i < n_out; ++i) out.value[i] *= phase(-p.epsilon * grid.at(i));
  return out;
}

}  // namespace

Trajectory evolve_quadrature(const ModelParams& params, const TimeGrid& grid,
                             QuadratureDiagnostics* diagnostics) {
  require_valid(params);
  grid.check();
  const SpectralSolution sa(params, Channel::A);
  const SpectralSolution sb(params, Channel::B);

  // Panel width <= min(Gamma / 20, pi / (8 t_max)).
  double panel = kPi / (8.0 * std::max(grid.t_end, 1e-300));
  for (const auto* s : {&sa, &sb}) {
    if (s->fano().uncoupled()) continue;
    const double band = s->fano().hi - s->fano().lo;
    const double w = s->has_resonance() && s->width() > 0.0 ? s->width() : band / 4096.0;
    panel = std::min(panel, w / 20.0);
  }
  const double band = params.eta_max - params.eta_min;
  if (band / panel * 5.0 > static_cast<double>(kMaxEnergyNodes)) {
    throw QuadratureFailure(fmt::format(
        "energy grid of {:.3g} nodes exceeds the limit; widths or times out of proportion",
        band / panel * 5.0));
  }

  const ChannelGrid ca = build_channel(sa, panel);
  const ChannelGrid cb = build_channel(sb, panel);

  const std::size_t n = grid.n_points;
  std::vector<Complex> alpha(n), beta(n);
  parallel_for(n, [&](std::size_t i) {
    const double t = grid.at(i);
    alpha[i] = ca.transform(t);
    beta[i] = cb.transform(t);
  });

  std::vector<Complex> rec(n, Complex{0.0, 0.0});
  double norm_defect = 0.0;
  std::size_t time_nodes = 0;
  const bool shared = params.topology == Topology::SingleContinuum && ca.coupled && cb.coupled;
  if (shared) {
    // Largest frequency |c - E| appearing in e^{i c s} alpha(s).
    double spread = band;
    for (const auto* cg : {&ca, &cb}) {
      for (const auto& d : cg->discrete)
        spread = std::max(spread, std::max(std::abs(d.energy - cg->ch.lo), std::abs(d.energy - cg->ch.hi)));
    }
    const TimeRule tr = build_time_rule(grid, 3.0 / spread);
    time_nodes = tr.node_count();
    if (time_nodes > kMaxTimeNodes) {
      throw QuadratureFailure("time grid for the re-correlation term exceeds the node limit");
    }
    const auto alpha_nodes = transform_on_nodes(ca, tr);
    const auto beta_nodes = transform_on_nodes(cb, tr);
    const auto r = recorrelation(params, tr, grid, alpha_nodes, beta_nodes, panel);
    rec = r.value;
    for (std::size_t i = 0; i < n; ++i) {
      norm_defect = std::max(norm_defect, std::abs(1.0 - std::norm(alpha[i]) - r.norm_a[i]));
      norm_defect = std::max(norm_defect, std::abs(1.0 - std::norm(beta[i]) - r.norm_b[i]));
    }
  }

  if (diagnostics) {
    diagnostics->energy_nodes = ca.energy.size() + cb.energy.size();
    diagnostics->time_nodes = time_nodes;
    diagnostics->norm_defect = norm_defect;
    diagnostics->completeness_defect =
        std::max(std::abs(std::abs(ca.transform(0.0)) - 1.0), std::abs(std::abs(cb.transform(0.0)) - 1.0));
  }

  Trajectory out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ReducedDensity rho;
    rho.rho_pp = 0.5 * (1.0 + std::norm(alpha[i]) - std::norm(beta[i]));
    rho.rho_pm = 0.5 * (alpha[i] * std::conj(beta[i]) + rec[i]);
    out.push_back(make_point(grid.at(i), rho));
  }
  return out;
}

Trajectory evolve(const ModelParams& params, const TimeGrid& grid, EvolutionMethod method,
                  const EvolveOptions& options) {
  require_valid(params);
  grid.check();
  switch (method) {
    case EvolutionMethod::ClosedForm: {
      const auto cf = closed_form_params(params);
      Trajectory out;
      out.reserve(grid.n_points);
      for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double t = grid.at(i);
        if (cf.gamma_prime == 0.0) {
          out.push_back(make_point(t, closed_single(cf.gamma, cf.omega, t),
                                   closed_single_rate(cf.gamma, cf.omega, t)));
        } else {
          out.push_back(make_point(t, closed_two(cf.gamma, cf.gamma_prime, cf.omega, t, cf.topology),
                                   closed_two_rate(cf.gamma, cf.gamma_prime, cf.omega, t, cf.topology)));
        }
      }
      return out;
    }
    case EvolutionMethod::Quadrature:
      return evolve_quadrature(params, grid);
    case EvolutionMethod::Oracle:
      return evolve_oracle(discretize(params, options.oracle_bins), grid);
  }
  throw MethodUnavailable("unknown evolution method");
}

}  // namespace fano_tunnel
