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

#ifndef DPJE_EXACT_JE_H_
#define DPJE_EXACT_JE_H_

#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "dpje/numerics.h"
#include "dpje/polytope.h"

namespace dpje {

// Iterates below this value are raised to it so Gram matrices stay PD.
inline constexpr double kWeightFloor = 1e-14;

struct ExactResult {
  WeightVector u;                    // (1/T) sum_{k=1..T} w_k
  WeightVector last;                 // w_T
  std::vector<WeightVector> trace;   // w_1..w_T when requested
  long clamped = 0;                  // number of entries raised to the floor
};

// The deterministic fixed-point map w_{k+1,i} = w_{k,i} h_i(w_k), started at
// w_1 = d/n. Throws PreconditionError for iterations < 1.
ExactResult ExactIterate(const Polytope& p, int iterations,
                         bool keep_trace = false);

// One application of the map; returns the unclamped image.
WeightVector ExactStep(const Polytope& p, const WeightVector& w);

// Iteration count 16/xi log(n/d) + 16/xi^2 log(1/delta0), rounded up.
int ConvergenceIterations(double xi, Eigen::Index n, Eigen::Index d,
                          double delta0);

// sum_i w_i - log det(A^T W A) - d.
double DualObjective(const Polytope& p, const WeightVector& w);

struct OptimalityCertificate {
  double active_residual = 0.0;    // max |h_i - 1| over active rows
  double inactive_residual = 0.0;  // max (h_i - 1) over inactive rows
  double max_leverage = 0.0;       // max_i h_i
  double weight_sum = 0.0;
  Eigen::Index active_rows = 0;
  bool optimal = false;
};

// A row is active when w_i > active_floor. A negative floor selects the
// default tol * d / n, which treats weights driven towards zero by the
// iteration as inactive. Throws PreconditionError when |sum w - d| > tol * d.
OptimalityCertificate CheckOptimality(const Polytope& p, const WeightVector& w,
                                      double tol, double active_floor = -1.0);

// Rescales u so that its entries sum to d.
WeightVector NormalizeToSum(const WeightVector& u, double d);

// CSV with header "iteration,row,weight"; iterations are 1-based.
void WriteTraceCsv(std::ostream& out, const std::vector<WeightVector>& trace);

}  // namespace dpje

#endif  // DPJE_EXACT_JE_H_
