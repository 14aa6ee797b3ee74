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

#include "dpje/lipschitz.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "dpje/errors.h"
#include "dpje/parallel.h"
#include "dpje/random.h"

namespace dpje {
namespace {

double CombinedBound(double n, double eps0, double eps1, double sigma_max,
                     double inverse_gram_term) {
  const double spread = eps1 * sigma_max * sigma_max;
  const double own = eps1 * (sigma_max + eps0) * (sigma_max + eps0) +
                     eps0 * inverse_gram_term * (2.0 * sigma_max + eps0);
  return std::sqrt((n - 1.0) * spread * spread + own * own) / eps0;
}

}  // namespace

LipschitzBound ComputeLipschitzBound(const Polytope& p, double eps0) {
  if (!(eps0 > 0.0)) throw DomainError("eps0 must be positive");
  const SpectralStats stats = ComputeSpectralStats(p);
  if (eps0 > 0.1 * stats.sigma_min) {
    std::ostringstream msg;
    msg << "eps0=" << eps0 << " exceeds 0.1 sigma_min(A)=" << 0.1 * stats.sigma_min;
    throw PreconditionError(msg.str());
  }
  LipschitzBound b;
  b.sigma_max = stats.sigma_max;
  b.sigma_min = stats.sigma_min;
  b.kappa = stats.condition;
  b.eps1 = 8.0 * b.kappa * std::pow(b.sigma_min, -3) * eps0;
  b.lipschitz = CombinedBound(static_cast<double>(p.rows()), eps0, b.eps1,
                              b.sigma_max, b.sigma_max * b.sigma_max);
  return b;
}

double StrictLipschitz(const Polytope& p, double eps0, const WeightVector& w) {
  const LipschitzBound b = ComputeLipschitzBound(p, eps0);
  const Eigen::MatrixXd scaled = w.cwiseSqrt().asDiagonal() * p.matrix();
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(scaled).singularValues();
  const double smin = s(s.size() - 1);
  return CombinedBound(static_cast<double>(p.rows()), eps0, b.eps1, b.sigma_max,
                       1.0 / (smin * smin));
}

Eigen::VectorXd WeightedLeverageMap(const Eigen::MatrixXd& a,
                                    const WeightVector& w) {
  return w.cwiseProduct(Leverage(a, w));
}

Eigen::VectorXd WeightedLeverageMap(const Polytope& p, const WeightVector& w) {
  return WeightedLeverageMap(p.matrix(), w);
}

AuditReport AuditLipschitz(const Polytope& p, double eps0, std::int64_t trials,
                           std::uint64_t seed, int threads) {
  const LipschitzBound bound = ComputeLipschitzBound(p, eps0);
  std::vector<double> ratio(trials), allowed(trials);
  ParallelFor(0, trials, threads, [&](std::int64_t t) {
    const auto trial = static_cast<std::uint64_t>(t);
    const NeighborPerturbation pert = RandomNeighborPerturbation(
        p.rows(), p.cols(), eps0, DeriveKey(seed, StreamTag::kAudit, {trial, 0}));
    Stream stream(seed, StreamTag::kAudit, {trial, 1});
    WeightVector w(p.rows());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = 0.1 + 0.9 * stream.Uniform();
    const Polytope neighbor = MakeNeighbor(p, pert);
    ratio[t] = (WeightedLeverageMap(p, w) - WeightedLeverageMap(neighbor, w)).norm() /
               eps0;
    allowed[t] = std::max(bound.lipschitz, StrictLipschitz(p, eps0, w));
  });
  AuditReport report;
  report.lipschitz = bound.lipschitz;
  report.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    report.max_ratio = std::max(report.max_ratio, ratio[t]);
    report.max_ratio_over_bound =
        std::max(report.max_ratio_over_bound, ratio[t] / allowed[t]);
    if (ratio[t] > allowed[t]) ++report.violations;
  }
  return report;
}

}  // namespace dpje
