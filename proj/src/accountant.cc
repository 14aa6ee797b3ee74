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

#include "dpje/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpje/errors.h"
#include "dpje/noise.h"
#include "dpje/quadrature.h"

namespace dpje {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// log of the integral over the support of exp(q(z)) with
// q(z) = -(z^2 - 2 linear z + constant) / (2 sigma^2). The integrand is
// shifted by its maximum, attained at `linear` clipped to the support.
double LogGaussianBand(double linear, double constant, double sigma) {
  auto q = [&](double z) {
    return -(z * z - 2.0 * linear * z + constant) / (2.0 * sigma * sigma);
  };
  const double peak = std::clamp(linear, kSupportLo, kSupportHi);
  const double top = q(peak);
  const double slope = std::abs(peak - linear) / (sigma * sigma);
  const double scale = slope > 0.0 ? std::min(sigma, 1.0 / slope) : sigma;
  // q(z) - q(peak) in factored form, free of cancellation for large orders.
  auto integrand = [&](double z) {
    return std::exp(-(z - peak) * (z + peak - 2.0 * linear) / (2.0 * sigma * sigma));
  };
  const QuadratureResult r = IntegratePiecewise(
      integrand, PeakBreakpoints(kSupportLo, kSupportHi, peak, scale),
      1e-12 * std::min(1.0, scale));
  return top + std::log(r.value);
}

void CheckLambda(std::int64_t lambda) {
  if (lambda < 1) throw DomainError("moment order lambda must be >= 1");
}

}  // namespace

double AlphaBound(double beta, double sigma, std::int64_t lambda,
                  const AccountantConstants& k) {
  CheckLambda(lambda);
  if (!(beta >= 0.0) || !(sigma >= beta) || !(sigma > 0.0)) {
    std::ostringstream msg;
    msg << "AlphaBound needs sigma >= beta >= 0, got beta=" << beta
        << ", sigma=" << sigma;
    throw DomainError(msg.str());
  }
  if (beta == 0.0) return 0.0;
  const double gamma = Constants(beta, sigma).gamma;
  const double l = static_cast<double>(lambda);
  const double r = beta * gamma / sigma;
  return k.c0 * l * (l + 1.0) * r * r + k.c3 * std::pow(l * r, 3);
}

double MomentOracle(double beta, double sigma, std::int64_t lambda) {
  CheckLambda(lambda);
  if (!(sigma > 0.0) || !(beta >= 0.0 && beta < 0.5)) {
    throw DomainError("MomentOracle needs sigma > 0 and 0 <= beta < 0.5");
  }
  if (beta == 0.0) return 0.0;
  const TruncConstants c = Constants(beta, sigma);
  const double l = static_cast<double>(lambda);
  const double log_c0 = std::log(c.c_sigma);
  const double log_gamma = std::log(c.c_sigma) - std::log(c.c_beta_sigma);
  const double base = -std::log(sigma) - kLogSqrt2Pi - log_c0;
  // mu1^(l+1) mu0^(-l): exponent -((l+1)(z-b)^2 - l z^2) / (2 s^2).
  const double forward = base + (l + 1.0) * log_gamma +
                         LogGaussianBand((l + 1.0) * beta,
                                         (l + 1.0) * beta * beta, sigma);
  // mu0^(l+1) mu1^(-l): exponent -((l+1) z^2 - l (z-b)^2) / (2 s^2).
  const double reverse = base - l * log_gamma +
                         LogGaussianBand(-l * beta, -l * beta * beta, sigma);
  return std::max(forward, reverse);
}

std::vector<std::int64_t> AdmissibleLambdas(double gamma) {
  const auto top = static_cast<std::int64_t>(std::floor(1.0 / (4.0 * gamma)));
  std::vector<std::int64_t> lambdas;
  for (std::int64_t l = 1; l <= std::max<std::int64_t>(top, 1); ++l) {
    lambdas.push_back(l);
  }
  return lambdas;
}

std::vector<std::int64_t> VerifyLambdas(double epsilon, double delta,
                                        double beta) {
  std::vector<std::int64_t> lambdas;
  for (std::int64_t l = 1; l <= 64; ++l) lambdas.push_back(l);
  const double shrink = std::max(1e-4, (1.0 - 2.0 * beta) * (1.0 - 2.0 * beta));
  const double target =
      std::min(1e7, 16.0 * std::log(1.0 / delta) / (epsilon * shrink));
  double l = 64.0;
  while (l < target) {
    l = std::ceil(l * 1.25);
    lambdas.push_back(static_cast<std::int64_t>(std::min(l, 1e7)));
  }
  return lambdas;
}

MomentTable OracleTable(double beta, double sigma,
                        const std::vector<std::int64_t>& lambdas) {
  MomentTable table;
  table.beta = beta;
  table.sigma = sigma;
  table.gamma = Constants(beta, sigma).gamma;
  for (std::int64_t l : lambdas) {
    table.entries.push_back({l, MomentOracle(beta, sigma, l)});
  }
  return table;
}

MomentTable BoundTable(double beta, double sigma,
                       const std::vector<std::int64_t>& lambdas,
                       const AccountantConstants& k) {
  MomentTable table;
  table.beta = beta;
  table.sigma = sigma;
  table.gamma = Constants(beta, sigma).gamma;
  for (std::int64_t l : lambdas) {
    table.entries.push_back({l, AlphaBound(beta, sigma, l, k)});
  }
  return table;
}

MomentTable Compose(const MomentTable& per_step, std::int64_t steps) {
  if (steps < 1) throw DomainError("composition needs at least one step");
  MomentTable total = per_step;
  total.steps = per_step.steps * steps;
  for (MomentEntry& e : total.entries) e.alpha *= static_cast<double>(steps);
  return total;
}

TailBound TailToDelta(const MomentTable& table, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  TailBound best;
  for (const MomentEntry& e : table.entries) {
    const double log_delta = e.alpha - static_cast<double>(e.lambda) * epsilon;
    if (log_delta < best.log_delta) {
      best.log_delta = log_delta;
      best.lambda = e.lambda;
    }
  }
  best.delta = std::exp(best.log_delta);
  return best;
}

void ValidatePrivacySpec(const PrivacySpec& spec) {
  std::ostringstream msg;
  if (!(spec.epsilon > 0.0)) msg << "epsilon must be > 0; ";
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) msg << "delta must lie in (0, 1); ";
  if (!(spec.eps0 > 0.0)) msg << "eps0 must be > 0; ";
  if (!(spec.lipschitz > 0.0)) msg << "L must be > 0; ";
  if (spec.steps < 1) msg << "T must be >= 1; ";
  if (!(2.0 * spec.lipschitz * spec.eps0 < 1.0)) msg << "need 2 L eps0 < 1; ";
  const std::string problems = msg.str();
  if (!problems.empty()) {
    throw DomainError(problems.substr(0, problems.size() - 2));
  }
}

Calibration VerifySigma(const PrivacySpec& spec, double sigma) {
  ValidatePrivacySpec(spec);
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  Calibration cal;
  cal.sigma = sigma;
  cal.beta = spec.lipschitz * spec.eps0;
  cal.gamma = Constants(cal.beta, sigma).gamma;
  cal.epsilon_limit = spec.constants.c1 * static_cast<double>(spec.steps) *
                      cal.beta * cal.beta / (1.0 - 2.0 * cal.beta);
  cal.in_range = spec.epsilon <= cal.epsilon_limit;

  const std::vector<std::int64_t> lambdas =
      VerifyLambdas(spec.epsilon, spec.delta, cal.beta);
  cal.oracle = TailToDelta(
      Compose(OracleTable(cal.beta, sigma, lambdas), spec.steps), spec.epsilon);
  if (sigma >= cal.beta) {
    std::vector<std::int64_t> small;
    for (std::int64_t l : lambdas) {
      if (l <= 256) small.push_back(l);
    }
    cal.closed_form = TailToDelta(
        Compose(BoundTable(cal.beta, sigma, small, spec.constants), spec.steps),
        spec.epsilon);
  }
  cal.verified = cal.oracle.delta <= spec.delta;
  return cal;
}

Calibration CalibrateSigma(const PrivacySpec& spec) {
  ValidatePrivacySpec(spec);
  const double beta = spec.lipschitz * spec.eps0;
  const double limit = spec.constants.c1 * static_cast<double>(spec.steps) *
                       beta * beta / (1.0 - 2.0 * beta);
  if (spec.enforce_range && spec.epsilon > limit) {
    std::ostringstream msg;
    msg << "epsilon=" << spec.epsilon << " exceeds the admissible range "
        << "c1 T (L eps0)^2 / (1 - 2 L eps0) = " << limit;
    throw BudgetError(msg.str());
  }
  const double sigma = spec.constants.c2 * beta *
                       std::sqrt(static_cast<double>(spec.steps) *
                                 std::log(1.0 / spec.delta)) /
                       ((1.0 - 2.0 * beta) * spec.epsilon);
  Calibration cal = VerifySigma(spec, sigma);
  if (!cal.verified) {
    std::ostringstream msg;
    msg << "sigma=" << sigma << " certifies only delta'=" << cal.oracle.delta
        << " > delta=" << spec.delta;
    throw InfeasibleError(msg.str());
  }
  return cal;
}

MomentGridReport ValidateMomentGrid(const AccountantConstants& k,
                                    const std::vector<std::int64_t>& extra_lambdas) {
  MomentGridReport report;
  for (double sigma : {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.45}) {
    for (int step = 1; step <= 10; ++step) {
      const double beta = 0.1 * step * sigma;
      std::vector<std::int64_t> lambdas =
          AdmissibleLambdas(Constants(beta, sigma).gamma);
      lambdas.insert(lambdas.end(), extra_lambdas.begin(), extra_lambdas.end());
      std::sort(lambdas.begin(), lambdas.end());
      lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
      for (std::int64_t l : lambdas) {
        MomentGridPoint point{beta, sigma, l, AlphaBound(beta, sigma, l, k),
                              MomentOracle(beta, sigma, l)};
        if (point.oracle > point.bound) ++report.violations;
        report.points.push_back(point);
      }
    }
  }
  return report;
}

void WriteMomentCsv(std::ostream& out, const MomentTable& table) {
  out << "lambda,alpha\n";
  out.precision(17);
  for (const MomentEntry& e : table.entries) out << e.lambda << ',' << e.alpha << '\n';
}

}  // namespace dpje
