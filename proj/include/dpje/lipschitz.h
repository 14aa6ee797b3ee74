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

#ifndef DPJE_LIPSCHITZ_H_
#define DPJE_LIPSCHITZ_H_

#include <cstdint>

#include <Eigen/Dense>

#include "dpje/numerics.h"
#include "dpje/polytope.h"

namespace dpje {

struct LipschitzBound {
  double lipschitz = 0.0;  // L
  double eps1 = 0.0;       // 8 kappa sigma_min^-3 eps0
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;
};

// Closed-form L with ||f(w, A) - f(w, A')|| <= L eps0 for eps0-close A, A'.
// Throws DomainError for eps0 <= 0 and PreconditionError when
// eps0 > 0.1 sigma_min(A).
LipschitzBound ComputeLipschitzBound(const Polytope& p, double eps0);

// The same expression with sigma_max(A)^2 in the eps0 term replaced by
// sigma_min(W^{1/2} A)^-2, the inverse-Gram norm at weights w.
double StrictLipschitz(const Polytope& p, double eps0, const WeightVector& w);

// f_i = w_i a_i^T (A^T W A)^{-1} a_i.
Eigen::VectorXd WeightedLeverageMap(const Polytope& p, const WeightVector& w);
Eigen::VectorXd WeightedLeverageMap(const Eigen::MatrixXd& a,
                                    const WeightVector& w);

struct AuditReport {
  double lipschitz = 0.0;   // closed-form L
  double max_ratio = 0.0;   // max ||f(w,A) - f(w,A')|| / eps0
  double max_ratio_over_bound = 0.0;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
};

// Random (row, delta on the eps0-sphere, w in [0.1, 1]^n) trials. A trial
// violates when its ratio exceeds max(L, strict L at w).
AuditReport AuditLipschitz(const Polytope& p, double eps0, std::int64_t trials,
                           std::uint64_t seed, int threads = 1);

}  // namespace dpje

#endif  // DPJE_LIPSCHITZ_H_
