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

#include "fano_tunnel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/parallel.hpp"

namespace fano_tunnel {

namespace {

Complex phase(double x) { return {std::cos(x), std::sin(x)}; }

// Secular function f(lambda) = lambda - d0 - sum z^2 / (lambda - q), written
// with lambda = q[o] + tau.
struct Secular {
  double d0;
  std::span<const double> q;
  std::span<const double> z2;

  double operator()(std::size_t o, double tau) const {
    const double origin = q[o];
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) sum += z2[i] / ((origin - q[i]) + tau);
    return origin + tau - d0 - sum;
  }
};

double solve_offset(const Secular& f, std::size_t o, double a, double b) {
  auto fn = [&](double tau) { return f(o, tau); };
  double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw EigenFailure(fmt::format("secular equation lost its bracket near pole {}", o));
  }
  std::uintmax_t iters = 300;
  auto done = [](double x, double y) {
    return std::abs(y - x) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::min(std::abs(x), std::abs(y));
  };
  const auto [lo, hi] = boost::math::tools::toms748_solve(fn, a, b, fa, fb, done, iters);
  return 0.5 * (lo + hi);
}

// Bracket [a, b] for the root of f(o, .) starting from a far end `far` whose
// sign is known and shrinking towards the pole at tau = 0.
std::pair<double, double> bracket_towards_pole(const Secular& f, std::size_t o, double far) {
  const double f_far = f(o, far);
  double prev = far;
  double tau = 0.5 * far;
  for (int k = 0; k < 1100; ++k) {
    const double v = f(o, tau);
    if ((v > 0.0) != (f_far > 0.0) || v == 0.0) return {std::min(tau, prev), std::max(tau, prev)};
    prev = tau;
    tau *= 0.5;
    if (tau == 0.0) break;
  }
  throw EigenFailure(fmt::format("no secular root between pole {} and offset {:.3g}", o, far));
}

}  // namespace

double ArrowheadSpectrum::gap(std::size_t k, std::size_t i, std::span<const double> poles) const {
  if (origin[k] == kNoOrigin) return values[k] - poles[i];
  return (poles[origin[k]] - poles[i]) + offset[k];
}

std::vector<double> DiscretizedModel::shifted_energies() const {
  std::vector<double> out(bin_energies);
  for (double& e : out) e += epsilon;
  return out;
}

namespace {

std::vector<double> dense_block(double d0, std::span<const double> poles,
                                std::span<const double> z) {
  const std::size_t n = poles.size() + 1;
  std::vector<double> m(n * n, 0.0);
  m[0] = d0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    m[(i + 1) * n + (i + 1)] = poles[i];
    m[i + 1] = z[i];
    m[(i + 1) * n] = z[i];
  }
  return m;
}

}  // namespace

std::vector<double> DiscretizedModel::block_a() const {
  return dense_block(level_a, bin_energies, bin_couplings_a);
}

std::vector<double> DiscretizedModel::block_b() const {
  const auto shifted = shifted_energies();
  return dense_block(level_b, shifted, bin_couplings_b);
}

DiscretizedModel discretize(const ModelParams& params, std::size_t n_bins) {
  if (n_bins < 10) throw DomainError("oracle needs at least 10 bins");
  const auto report = validate(params);
  if (!report.valid()) throw DomainError("invalid model parameters: " + report.violations.front());
  DiscretizedModel m;
  m.n_bins = n_bins;
  m.delta = (params.eta_max - params.eta_min) / static_cast<double>(n_bins);
  m.epsilon = params.epsilon;
  m.level_a = params.epsilon + params.e0;
  m.level_b = params.e0;
  m.topology = params.topology;
  const double root_delta = std::sqrt(m.delta);
  m.bin_energies.resize(n_bins);
  m.bin_couplings_a.resize(n_bins);
  m.bin_couplings_b.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    const double eta = params.eta_min + (static_cast<double>(i) + 0.5) * m.delta;
    m.bin_energies[i] = eta;
    m.bin_couplings_a[i] = params.g.amplitude(eta) * root_delta;
    m.bin_couplings_b[i] = params.g_prime.amplitude(eta) * root_delta;
  }
  return m;
}

double recurrence_time(const DiscretizedModel& model) {
  return 2.0 * std::numbers::pi / model.delta;
}

ArrowheadSpectrum solve_arrowhead(double d0, std::span<const double> poles,
                                  std::span<const double> couplings) {
  const std::size_t n = poles.size();
  if (couplings.size() != n) throw EigenFailure("arrowhead: size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(poles[i] > poles[i - 1])) throw EigenFailure("arrowhead: poles must increase strictly");
  }

  ArrowheadSpectrum out;
  // Deflation: uncoupled poles are eigenvalues with zero head.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (couplings[i] != 0.0) {
      active.push_back(i);
    } else {
      out.values.push_back(poles[i]);
      out.head.push_back(0.0);
      out.origin.push_back(i);
      out.offset.push_back(0.0);
    }
  }
  const std::size_t m = active.size();
  if (m == 0) {
    out.values.push_back(d0);
    out.head.push_back(1.0);
    out.origin.push_back(ArrowheadSpectrum::kNoOrigin);
    out.offset.push_back(d0);
    return out;
  }

  std::vector<double> q(m), z2(m);
  double z2_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    q[j] = poles[active[j]];
    z2[j] = couplings[active[j]] * couplings[active[j]];
    z2_sum += z2[j];
  }
  const Secular f{d0, q, z2};
  const double reach = std::abs(d0 - q.front()) + std::abs(d0 - q.back()) + std::sqrt(z2_sum) + 1.0;

  std::vector<double> val(m + 1), off(m + 1), head(m + 1);
  std::vector<std::size_t> org(m + 1);
  parallel_for(m + 1, [&](std::size_t r) {
    std::size_t o = 0;
    double a = 0.0, b = 0.0;
    if (r == 0) {
      o = 0;
      double far = -reach;
      while (f(o, far) >= 0.0) far *= 2.0;
      std::tie(a, b) = bracket_towards_pole(f, o, far);
    } else if (r == m) {
      o = m - 1;
      double far = reach;
      while (f(o, far) <= 0.0) far *= 2.0;
      std::tie(a, b) = bracket_towards_pole(f, o, far);
    } else {
      const std::size_t left = r - 1, right = r;
      const double half = 0.5 * (q[right] - q[left]);
      if (f(left, half) >= 0.0) {
        o = left;
        std::tie(a, b) = bracket_towards_pole(f, o, half);
      } else {
        o = right;
        std::tie(a, b) = bracket_towards_pole(f, o, -half);
      }
    }
    const double tau = solve_offset(f, o, a, b);
    double s = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double gap = (q[o] - q[i]) + tau;
      s += z2[i] / (gap * gap);
    }
    org[r] = o;
    off[r] = tau;
    val[r] = q[o] + tau;
    head[r] = 1.0 / std::sqrt(s);
  });
  for (std::size_t r = 0; r <= m; ++r) {
    out.values.push_back(val[r]);
    out.head.push_back(head[r]);
    out.origin.push_back(active[org[r]]);
    out.offset.push_back(off[r]);
  }
  return out;
}

ArrowheadSpectrum solve_arrowhead_dense(double d0, std::span<const double> poles,
                                        std::span<const double> couplings) {
  const std::size_t n = poles.size() + 1;
  const auto m = dense_block(d0, poles, couplings);
  Eigen::MatrixXd mat = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      m.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
  if (es.info() != Eigen::Success) throw EigenFailure("dense symmetric eigensolver failed");
  ArrowheadSpectrum out;
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(es.eigenvalues()(static_cast<Eigen::Index>(k)));
    out.head.push_back(std::abs(es.eigenvectors()(0, static_cast<Eigen::Index>(k))));
    out.origin.push_back(ArrowheadSpectrum::kNoOrigin);
    out.offset.push_back(out.values.back());
  }
  return out;
}

namespace {

struct BlockSpectrum {
  std::vector<double> poles;
  std::vector<double> z;
  ArrowheadSpectrum spec;
  bool coupled = false;

  Complex survival(double t) const {
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < spec.size(); ++k)
      sum += spec.head[k] * spec.head[k] * phase(-spec.values[k] * t);
    return sum;
  }

  Complex survival_rate(double t) const {
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < spec.size(); ++k)
      sum += spec.head[k] * spec.head[k] * spec.values[k] * phase(-spec.values[k] * t);
    return Complex{0.0, -1.0} * sum;
  }

  // Continuum components phi_i(t) = z_i sum_k h_k^2 e^{-i l_k t} / (l_k - p_i).
  std::vector<Complex> continuum(double t) const {
    std::vector<Complex> c(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k)
      c[k] = spec.head[k] * spec.head[k] * phase(-spec.values[k] * t);
    std::vector<Complex> phi(poles.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < poles.size(); ++i) {
      if (z[i] == 0.0) continue;
      Complex sum{0.0, 0.0};
      for (std::size_t k = 0; k < spec.size(); ++k) {
        if (spec.head[k] == 0.0) continue;
        sum += c[k] / spec.gap(k, i, poles);
      }
      phi[i] = z[i] * sum;
    }
    return phi;
  }
};

BlockSpectrum block(double d0, std::vector<double> poles, std::vector<double> z) {
  BlockSpectrum b;
  b.poles = std::move(poles);
  b.z = std::move(z);
  b.coupled = std::any_of(b.z.begin(), b.z.end(), [](double v) { return v != 0.0; });
  b.spec = solve_arrowhead(d0, b.poles, b.z);
  return b;
}

void check_size(const DiscretizedModel& model) {
  if (model.n_bins > kMaxOracleBins) {
    throw DomainError(fmt::format("oracle limited to {} bins (got {})", kMaxOracleBins, model.n_bins));
  }
}

}  // namespace

Trajectory evolve_oracle(const DiscretizedModel& model, const TimeGrid& grid) {
  check_size(model);
  grid.check();
  const auto a = block(model.level_a, model.bin_energies, model.bin_couplings_a);
  const auto b = block(model.level_b, model.shifted_energies(), model.bin_couplings_b);
  const bool shared = model.topology == Topology::SingleContinuum && a.coupled && b.coupled;

  Trajectory out(grid.n_points);
  parallel_for(grid.n_points, [&](std::size_t i) {
    const double t = grid.at(i);
    const Complex alpha = a.survival(t);
    const Complex beta = b.survival(t);
    // Bin-by-bin inner product of the two blocks' continuum components.
    const Complex d_alpha = a.survival_rate(t);
    const Complex d_beta = b.survival_rate(t);
    Complex rec{0.0, 0.0};
    Complex d_rec{0.0, 0.0};
    if (shared) {
      const auto pa = a.continuum(t);
      const auto pb = b.continuum(t);
      const Complex mi{0.0, -1.0};
      for (std::size_t k = 0; k < pa.size(); ++k) {
        rec += pb[k] * std::conj(pa[k]);
        // Bin equations of motion: i d(phi)/dt = p phi + z * (discrete amplitude).
        const Complex da = mi * (a.poles[k] * pa[k] + a.z[k] * alpha);
        const Complex db = mi * (b.poles[k] * pb[k] + b.z[k] * beta);
        d_rec += db * std::conj(pa[k]) + pb[k] * std::conj(da);
      }
    }
    ReducedDensity rho;
    rho.rho_pp = 0.5 * (1.0 + std::norm(alpha) - std::norm(beta));
    rho.rho_pm = 0.5 * (alpha * std::conj(beta) + rec);
    out[i] = make_point(t, rho);
    out[i].d_rho = DensityRate{std::real(std::conj(alpha) * d_alpha) - std::real(std::conj(beta) * d_beta),
                               0.5 * (d_alpha * std::conj(beta) + alpha * std::conj(d_beta) + d_rec)};
  });
  return out;
}

double oracle_norm_defect(const DiscretizedModel& model, const TimeGrid& grid) {
  check_size(model);
  grid.check();
  const auto a = block(model.level_a, model.bin_energies, model.bin_couplings_a);
  const auto b = block(model.level_b, model.shifted_energies(), model.bin_couplings_b);
  std::vector<double> worst(grid.n_points, 0.0);
  parallel_for(grid.n_points, [&](std::size_t i) {
    const double t = grid.at(i);
    for (const auto* blk : {&a, &b}) {
      double norm = std::norm(blk->survival(t));
      for (const auto& c : blk->continuum(t)) norm += std::norm(c);
      worst[i] = std::max(worst[i], std::abs(1.0 - norm));
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace fano_tunnel
