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

#ifndef DPJE_DPJE_H_
#define DPJE_DPJE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpje/accountant.h"
#include "dpje/numerics.h"
#include "dpje/polytope.h"

namespace dpje {

struct RunConfig {
  double xi = 0.1;        // target accuracy, in (0, 0.8] so that xi/8 <= 0.1
  double delta0 = 0.05;   // overall failure probability
  double delta1 = 0.01;   // sampling failure probability
  std::uint64_t seed = 0;

  // Privacy. L <= 0 derives the Lipschitz constant from the polytope.
  bool privacy = false;
  double epsilon = 2.0;
  double delta = 1e-5;
  double eps0 = 1e-6;
  double lipschitz = 0.0;
  AccountantConstants constants;
  bool enforce_budget_range = true;

  // Overrides; zero means derive.
  int s = 0;
  int iterations = 0;
  double xi0 = 0.0;
  double n_target = 0.0;
  double sigma = 0.0;

  // Deterministic stand-ins: D = I and the isometry sketch.
  bool stub_sampling = false;
  bool stub_sketch = false;

  bool keep_trace = false;  // retain per-step weights and telescope terms
  int threads = 1;
};

struct DerivedParams {
  int s = 0;
  int iterations = 0;  // T
  double xi0 = 0.0;
  double n_target = 0.0;  // N
  double sigma = 0.0;     // 0 when privacy is off
  double beta = 0.0;      // L eps0
  double lipschitz = 0.0;
  std::optional<Calibration> calibration;
};

// Weights recorded for step k -> k + 1.
struct StepRecord {
  WeightVector ideal;     // b_i^T (B^T B)^{-1} b_i, the exact map
  WeightVector sampled;   // b_i^T (B^T D B)^{-1} b_i
  WeightVector sketched;  // (1/s) ||S (B^T D B)^{-1/2} b_i||^2
  WeightVector next;      // after noise and the floor
};

struct Trace {
  std::vector<WeightVector> iterates;  // w_1..w_{T+1}
  std::vector<StepRecord> steps;       // steps 1..T
};

// Per-row terms of the telescoping decomposition, each already divided by T.
struct TelescopeTerms {
  Eigen::VectorXd phi;           // log h_i(u)
  Eigen::VectorXd ideal;         // log(w_{T+1,i} / w_{1,i})
  Eigen::VectorXd log_n_over_d;  // log(n / d), constant across rows
  Eigen::VectorXd sampling;      // log(ideal / sampled)
  Eigen::VectorXd sketch;        // log(sampled / sketched)
  Eigen::VectorXd noise;         // log(sketched / next)
  double max_excess = 0.0;       // max_i phi_i - bound_i (<= slack expected)
  bool holds = false;
};

struct Certificate {
  double max_h = 0.0;   // max_i h_i(v)
  double sum_v = 0.0;
  double target = 0.0;  // (1 + xi)^2
  bool ok = false;
};

struct EllipsoidResult {
  WeightVector v;
  Eigen::MatrixXd q;
  Certificate certificate;
  DerivedParams params;
  std::optional<Trace> trace;
  std::optional<TelescopeTerms> telescope;
  std::int64_t clamped = 0;
  std::int64_t resamples = 0;
  double seconds = 0.0;
};

// Throws DomainError on invalid settings, BudgetError/InfeasibleError from
// the accountant.
DerivedParams DeriveParams(const Polytope& p, const RunConfig& cfg);

// 16/xi^2 (log(n/delta0) + (L eps0)^-2), rounded up and capped at INT_MAX.
double PrivateIterations(double xi, Eigen::Index n, double delta0, double beta);

// The randomized fixed-point iteration with optional truncated-Gaussian noise.
EllipsoidResult Run(const Polytope& p, const RunConfig& cfg);

// Throws TraceError unless the trace has T steps and T + 1 iterates.
TelescopeTerms Telescope(const Polytope& p, const Trace& trace,
                         double slack = 1e-9);

struct ContainmentReport {
  double claimed_max_h = 0.0;
  double recomputed_max_h = 0.0;
  double xi_prime = 0.0;
  double sum_v = 0.0;
  std::int64_t inner_points = 0;
  std::int64_t inner_violations = 0;
  std::int64_t outer_samples = 0;
  std::int64_t outer_violations = 0;
  double max_outer_ratio = 0.0;  // max x^T Q x / d
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Inner side: recomputes h(v) against the stored certificate and checks
// points on the boundary of E / sqrt(1 + xi'). Outer side: hit-and-run
// samples x from P and checks x^T Q x <= d.
ContainmentReport ContainmentCheck(const Polytope& p, const EllipsoidResult& res,
                                   std::int64_t samples, std::uint64_t seed);

// Throws ContainmentViolation listing the issues of a failed report.
void RequireContainment(const ContainmentReport& report);

// Hit-and-run over P started at the origin, 10 d chord moves per sample.
std::vector<Eigen::VectorXd> HitAndRun(const Polytope& p, std::int64_t samples,
                                       std::uint64_t seed);

}  // namespace dpje

#endif  // DPJE_DPJE_H_
