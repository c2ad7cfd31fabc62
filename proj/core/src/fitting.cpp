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

#include "fano_tunnel/fitting.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "fano_tunnel/errors.hpp"

namespace fano_tunnel {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Sum of exponentials c + sum_j a_j e^{-k_j t}; x = {c, a_1, k_1, a_2, k_2, ...}.
struct ExpModel {
  std::span<const double> t;
  std::span<const double> y;
  int terms = 1;

  int inputs() const { return 1 + 2 * terms; }
  int values() const { return static_cast<int>(t.size()); }

  int operator()(const VectorXd& x, VectorXd& f) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      double v = x[0];
      for (int j = 0; j < terms; ++j) v += x[1 + 2 * j] * std::exp(-x[2 + 2 * j] * t[i]);
      f[static_cast<Eigen::Index>(i)] = v - y[i];
    }
    return 0;
  }

  int df(const VectorXd& x, MatrixXd& jac) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      jac(r, 0) = 1.0;
      for (int j = 0; j < terms; ++j) {
        const double e = std::exp(-x[2 + 2 * j] * t[i]);
        jac(r, 1 + 2 * j) = e;
        jac(r, 2 + 2 * j) = -x[1 + 2 * j] * t[i] * e;
      }
    }
    return 0;
  }
};

double rms_of(const ExpModel& m, const VectorXd& x) {
  VectorXd f(m.values());
  m(x, f);
  return std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
}

// Amplitudes and constant by linear least squares at fixed rates.
VectorXd seed(const ExpModel& m, std::span<const double> rates) {
  const auto n = static_cast<Eigen::Index>(m.t.size());
  MatrixXd a(n, 1 + static_cast<Eigen::Index>(rates.size()));
  VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (std::size_t j = 0; j < rates.size(); ++j)
      a(i, 1 + static_cast<Eigen::Index>(j)) = std::exp(-rates[j] * m.t[static_cast<std::size_t>(i)]);
    b[i] = m.y[static_cast<std::size_t>(i)];
  }
  const VectorXd coef = a.colPivHouseholderQr().solve(b);
  VectorXd x(m.inputs());
  x[0] = coef[0];
  for (std::size_t j = 0; j < rates.size(); ++j) {
    x[1 + 2 * static_cast<Eigen::Index>(j)] = coef[1 + static_cast<Eigen::Index>(j)];
    x[2 + 2 * static_cast<Eigen::Index>(j)] = rates[j];
  }
  return x;
}

ExponentialFit fit(std::span<const double> t, std::span<const double> y, int terms) {
  if (t.size() != y.size()) throw DomainError("fit: sample count mismatch");
  if (t.size() < static_cast<std::size_t>(1 + 2 * terms) + 1) {
    throw DomainError("fit: not enough samples for the model");
  }
  const ExpModel model{t, y, terms};
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw DomainError("fit: samples must span a positive time");

  // Log-spaced rate candidates over the resolvable range.
  std::vector<double> cand;
  for (int i = -8; i <= 12; ++i) cand.push_back(std::pow(2.0, 0.5 * i) / span);

  VectorXd best;
  double best_rms = std::numeric_limits<double>::infinity();
  auto refine = [&](VectorXd x) {
    ExpModel m = model;
    Eigen::LevenbergMarquardt<ExpModel> lm(m);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.gtol = 0.0;
    lm.parameters.maxfev = 4000;
    lm.minimize(x);
    const double r = rms_of(model, x);
    if (std::isfinite(r) && r < best_rms) {
      best_rms = r;
      best = x;
    }
  };
  if (terms == 1) {
    for (double k : cand) refine(seed(model, std::vector<double>{k}));
  } else {
    for (std::size_t i = 0; i < cand.size(); i += 2)
      for (std::size_t j = i + 2; j < cand.size(); j += 2)
        refine(seed(model, std::vector<double>{cand[i], cand[j]}));
  }
  if (!std::isfinite(best_rms)) throw DomainError("fit: no finite solution");
  return {std::vector<double>(best.data(), best.data() + best.size()), best_rms};
}

}  // namespace

ExponentialFit fit_single_exponential(std::span<const double> t, std::span<const double> y) {
  return fit(t, y, 1);
}

ExponentialFit fit_two_exponential(std::span<const double> t, std::span<const double> y) {
  return fit(t, y, 2);
}

}  // namespace fano_tunnel
