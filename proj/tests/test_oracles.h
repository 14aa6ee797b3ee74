// Copyright 2026 The DPJE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference implementations used only by tests. None of them calls into the
// library or reuses Eigen's decompositions, so agreement with production
// code is evidence rather than tautology.

#ifndef DPJE_TESTS_TEST_ORACLES_H_
#define DPJE_TESTS_TEST_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dpje::oracle {

// One-sided (Hestenes) Jacobi SVD; returns singular values in descending
// order.
inline std::vector<double> SingularValues(Eigen::MatrixXd u) {
  const Eigen::Index d = u.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
          const double x = u(i, p);
          const double y = u(i, q);
          u(i, p) = c * x - s * y;
          u(i, q) = s * x + c * y;
        }
      }
    }
    if (off < 1e-15) break;
  }
  std::vector<double> values;
  for (Eigen::Index j = 0; j < d; ++j) {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) norm += u(i, j) * u(i, j);
    values.push_back(std::sqrt(norm));
  }
  std::sort(values.rbegin(), values.rend());
  return values;
}

// Leverage scores h_i = a_i^T (A^T W A)^{-1} a_i via modified Gram-Schmidt on
// W^{1/2} A: h_i = ||q_i||^2 / w_i.
inline Eigen::VectorXd Leverage(const Eigen::MatrixXd& a, const Eigen::VectorXd& w) {
  Eigen::MatrixXd q = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) q.row(i) *= std::sqrt(w(i));
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index k = 0; k < j; ++k) {
      double dot = 0.0;
      for (Eigen::Index i = 0; i < q.rows(); ++i) dot += q(i, k) * q(i, j);
      for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (Eigen::Index i = 0; i < q.rows(); ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (Eigen::Index i = 0; i < q.rows(); ++i) q(i, j) /= norm;
  }
  Eigen::VectorXd h(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double norm = 0.0;
    for (Eigen::Index j = 0; j < q.cols(); ++j) norm += q(i, j) * q(i, j);
    h(i) = norm / w(i);
  }
  return h;
}

// Composite Simpson rule with an even number of panels.
inline double Simpson(const std::function<double(double)>& f, double a, double b,
                      int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double Trapezoid(const std::function<double(double)>& f, double a,
                        double b, int points) {
  const double h = (b - a) / (points - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int k = 1; k < points - 1; ++k) sum += f(a + k * h);
  return sum * h;
}

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// log Phi(x), switching to the asymptotic tail series once erfc underflows.
inline double LogPhi(double x) {
  if (x > -30.0) return std::log(Phi(x));
  const double r = 1.0 / (x * x);
  const double series = 1.0 - r + 3.0 * r * r - 15.0 * r * r * r + 105.0 * r * r * r * r;
  return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

// log(Phi(hi) - Phi(lo)) for lo < hi, using the mirror image when both
// arguments are positive so the subtraction happens in the far tail.
inline double LogPhiDiff(double lo, double hi) {
  if (lo > 0.0) return LogPhiDiff(-hi, -lo);
  const double top = LogPhi(hi);
  return top + std::log1p(-std::exp(LogPhi(lo) - top));
}

// Closed form of the truncated-Gaussian privacy-loss moment, obtained by
// completing the square: each moment integrand is a Gaussian of mean m
// restricted to [-0.5, 0.5].
inline double MomentClosedForm(double beta, double sigma, double lambda) {
  if (beta == 0.0) return 0.0;
  const double log_c0 = LogPhiDiff(-0.5 / sigma, 0.5 / sigma);
  const double log_gamma = log_c0 - LogPhiDiff((-0.5 - beta) / sigma, (0.5 - beta) / sigma);
  auto band = [&](double m) {
    return LogPhiDiff((-0.5 - m) / sigma, (0.5 - m) / sigma) - log_c0;
  };
  const double quad = lambda * (lambda + 1.0) * beta * beta / (2.0 * sigma * sigma);
  const double forward = (lambda + 1.0) * log_gamma + quad + band((lambda + 1.0) * beta);
  const double reverse = -lambda * log_gamma + quad + band(-lambda * beta);
  return std::max(forward, reverse);
}

// A random symmetric positive definite matrix with eigenvalues >= 1.
inline Eigen::MatrixXd RandomSpd(Eigen::Index d, unsigned seed) {
  std::srand(seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(d, d);
  return m * m.transpose() + Eigen::MatrixXd::Identity(d, d);
}

}  // namespace dpje::oracle

#endif  // DPJE_TESTS_TEST_ORACLES_H_
