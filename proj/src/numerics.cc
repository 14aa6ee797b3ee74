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

#include "dpje/numerics.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dpje/errors.h"

namespace dpje {
namespace {

// Absorbs rounding in the evaluated left-hand sides.
bool WithinBound(double lhs, double rhs) {
  return lhs <= rhs * (1.0 + 1e-10) + 1e-14;
}

void CheckWeights(const Eigen::MatrixXd& a, const WeightVector& w) {
  if (w.size() != a.rows()) {
    throw DimensionError("weight vector has " + std::to_string(w.size()) +
                         " entries, expected " + std::to_string(a.rows()));
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w(i)) || w(i) < 0.0) {
      std::ostringstream msg;
      msg << "weight " << i << " is " << w(i) << ", must be finite and >= 0";
      throw DomainError(msg.str());
    }
  }
}

Eigen::MatrixXd PseudoInverse(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const Eigen::VectorXd inv = svd.singularValues().cwiseInverse();
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

void RequirePositiveDefinite(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();
  const double lo = values(0);
  const double hi = values(values.size() - 1);
  if (!(hi > 0.0) || !(lo > kDegeneracyFloor * hi)) {
    std::ostringstream msg;
    msg << "Gram matrix is degenerate (eigenvalues in [" << lo << ", " << hi
        << "])";
    throw SingularError(msg.str());
  }
}

Eigen::MatrixXd Gram(const Eigen::MatrixXd& a, const WeightVector& w) {
  CheckWeights(a, w);
  Eigen::MatrixXd q = a.transpose() * (w.asDiagonal() * a);
  q = 0.5 * (q + q.transpose()).eval();
  RequirePositiveDefinite(q);
  return q;
}

Eigen::MatrixXd Gram(const Polytope& p, const WeightVector& w) {
  return Gram(p.matrix(), w);
}

Eigen::VectorXd QuadraticForms(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& q) {
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) {
    throw SingularError("Cholesky factorization of the Gram matrix failed");
  }
  // Columns of L^{-1} A^T hold L^{-1} a_i, whose squared norms are h_i.
  const Eigen::MatrixXd solved = llt.matrixL().solve(a.transpose());
  return solved.colwise().squaredNorm().transpose();
}

Eigen::VectorXd Leverage(const Eigen::MatrixXd& a, const WeightVector& w) {
  return QuadraticForms(a, Gram(a, w));
}

Eigen::VectorXd Leverage(const Polytope& p, const WeightVector& w) {
  return Leverage(p.matrix(), w);
}

Eigen::MatrixXd InvSqrt(const Eigen::MatrixXd& q) {
  RequirePositiveDefinite(q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
  const Eigen::VectorXd scale = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd m =
      eig.eigenvectors() * scale.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (m + m.transpose());
}

double SpectralNorm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

PerturbReport PerturbBounds(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("perturbation pair has mismatched shapes");
  }
  const Eigen::VectorXd sa = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  const Eigen::VectorXd sb = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues();
  const double smax = sa(0);
  const double smin = sa(sa.size() - 1);

  PerturbReport r;
  r.diff_norm = SpectralNorm(a - b);
  if (r.diff_norm > 0.1 * smin) {
    std::ostringstream msg;
    msg << "||A - B|| = " << r.diff_norm << " exceeds 0.1 sigma_min(A) = "
        << 0.1 * smin;
    throw PreconditionError(msg.str());
  }

  r.weyl_lhs = (sa - sb).cwiseAbs().maxCoeff();
  r.weyl_rhs = r.diff_norm;
  r.weyl_ok = WithinBound(r.weyl_lhs, r.weyl_rhs);

  const Eigen::MatrixXd pa = PseudoInverse(a);
  const Eigen::MatrixXd pb = PseudoInverse(b);
  const double na = SpectralNorm(pa);
  const double nb = SpectralNorm(pb);
  r.wedin_lhs = SpectralNorm(pa - pb);
  r.wedin_rhs = 2.0 * std::max(na * na, nb * nb) * r.diff_norm;
  r.wedin_ok = WithinBound(r.wedin_lhs, r.wedin_rhs);

  const Eigen::MatrixXd ga = a.transpose() * a;
  const Eigen::MatrixXd gb = b.transpose() * b;
  r.gram_lhs = SpectralNorm(ga - gb);
  r.gram_rhs = 2.1 * smax * r.diff_norm;
  r.gram_ok = WithinBound(r.gram_lhs, r.gram_rhs);

  r.inverse_gram_lhs = SpectralNorm(ga.inverse() - gb.inverse());
  r.inverse_gram_rhs = 8.0 * (smax / smin) * std::pow(smin, -3) * r.diff_norm;
  r.inverse_gram_ok = WithinBound(r.inverse_gram_lhs, r.inverse_gram_rhs);
  return r;
}

}  // namespace dpje
