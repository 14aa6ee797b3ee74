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

#ifndef DPJE_NUMERICS_H_
#define DPJE_NUMERICS_H_

#include <Eigen/Dense>

#include "dpje/polytope.h"

namespace dpje {

// Nonnegative per-row weights.
using WeightVector = Eigen::VectorXd;

// Smallest eigenvalue of a Gram matrix, relative to its largest, at or below
// which the matrix is treated as singular.
inline constexpr double kDegeneracyFloor = 1e-12;

// Q = sum_i w_i a_i a_i^T. Throws DimensionError, DomainError (negative or
// non-finite weight) or SingularError.
Eigen::MatrixXd Gram(const Eigen::MatrixXd& a, const WeightVector& w);
Eigen::MatrixXd Gram(const Polytope& p, const WeightVector& w);

// h_i = a_i^T (A^T W A)^{-1} a_i for every row.
Eigen::VectorXd Leverage(const Eigen::MatrixXd& a, const WeightVector& w);
Eigen::VectorXd Leverage(const Polytope& p, const WeightVector& w);

// h_i = a_i^T Q^{-1} a_i for a precomputed positive definite Q.
Eigen::VectorXd QuadraticForms(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& q);

// Symmetric M with M q M = I, via eigendecomposition. Throws SingularError.
Eigen::MatrixXd InvSqrt(const Eigen::MatrixXd& q);

// Throws SingularError unless q is symmetric positive definite above the
// degeneracy floor.
void RequirePositiveDefinite(const Eigen::MatrixXd& q);

double SpectralNorm(const Eigen::MatrixXd& m);

// Both sides of the classical perturbation inequalities for a pair (A, B)
// with ||A - B|| <= 0.1 sigma_min(A). Every `*_ok` flag is expected to hold.
struct PerturbReport {
  double diff_norm = 0.0;  // ||A - B||

  // max_i |sigma_i(A) - sigma_i(B)| <= ||A - B||
  double weyl_lhs = 0.0;
  double weyl_rhs = 0.0;
  bool weyl_ok = false;

  // ||A^+ - B^+|| <= 2 max(||A^+||^2, ||B^+||^2) ||A - B||
  double wedin_lhs = 0.0;
  double wedin_rhs = 0.0;
  bool wedin_ok = false;

  // ||A^T A - B^T B|| <= 2.1 sigma_max(A) ||A - B||
  double gram_lhs = 0.0;
  double gram_rhs = 0.0;
  bool gram_ok = false;

  // ||(A^T A)^{-1} - (B^T B)^{-1}|| <= 8 kappa(A) sigma_min(A)^{-3} ||A - B||
  double inverse_gram_lhs = 0.0;
  double inverse_gram_rhs = 0.0;
  bool inverse_gram_ok = false;

  bool all_ok() const {
    return weyl_ok && wedin_ok && gram_ok && inverse_gram_ok;
  }
};

// Throws DimensionError on shape mismatch, PreconditionError when
// ||A - B|| > 0.1 sigma_min(A).
PerturbReport PerturbBounds(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace dpje

#endif  // DPJE_NUMERICS_H_
