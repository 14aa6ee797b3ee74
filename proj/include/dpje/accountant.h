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

#ifndef DPJE_ACCOUNTANT_H_
#define DPJE_ACCOUNTANT_H_

#include <cstdint>
#include <ostream>
#include <vector>

namespace dpje {

// Constants that the privacy analysis only asserts to exist. c0 and c3 were
// calibrated against MomentOracle with 10% headroom.
struct AccountantConstants {
  double c0 = 0.55;  // second-order coefficient of AlphaBound
  double c1 = 1.0;   // admissible epsilon range
  double c2 = 2.0;   // sigma calibration
  double c3 = 1.0;   // third-order coefficient of AlphaBound
};

struct MomentEntry {
  std::int64_t lambda = 1;
  double alpha = 0.0;
};

// alpha(lambda) for a mechanism, possibly composed over `steps` rounds.
struct MomentTable {
  std::vector<MomentEntry> entries;
  double beta = 0.0;
  double sigma = 0.0;
  double gamma = 1.0;
  std::int64_t steps = 1;
};

// C0 l (l+1) beta^2 gamma^2 / sigma^2 + c3 beta^3 l^3 gamma^3 / sigma^3.
// Throws DomainError when sigma < beta or beta < 0; beta == 0 yields 0.
double AlphaBound(double beta, double sigma, std::int64_t lambda,
                  const AccountantConstants& k = {});

// The exact log-moment of the privacy loss of z -> beta + z against z, with z
// truncated normal on [-0.5, 0.5]: log max(E_0[(mu1/mu0)^(l+1)],
// E_0[(mu0/mu1)^l]). Computed by quadrature in log space.
double MomentOracle(double beta, double sigma, std::int64_t lambda);

// Positive integers l <= 1/(4 gamma); {1} when that set is empty.
std::vector<std::int64_t> AdmissibleLambdas(double gamma);

// 1..64 followed by a geometric grid reaching past the optimal order for
// (epsilon, delta) at sensitivity beta, capped at 1e7.
std::vector<std::int64_t> VerifyLambdas(double epsilon, double delta,
                                        double beta = 0.0);

MomentTable OracleTable(double beta, double sigma,
                        const std::vector<std::int64_t>& lambdas);
MomentTable BoundTable(double beta, double sigma,
                       const std::vector<std::int64_t>& lambdas,
                       const AccountantConstants& k = {});

// alpha_total = steps * alpha_step, pointwise. Throws DomainError for
// steps < 1.
MomentTable Compose(const MomentTable& per_step, std::int64_t steps);

struct TailBound {
  double delta = 1.0;
  double log_delta = 0.0;
  std::int64_t lambda = 0;  // minimiser, 0 when clamped at 1
};

// min_l exp(alpha(l) - l epsilon), clamped to <= 1.
TailBound TailToDelta(const MomentTable& table, double epsilon);

struct PrivacySpec {
  double epsilon = 1.0;
  double delta = 1e-5;
  double eps0 = 1e-6;       // neighbor closeness
  double lipschitz = 1.0;   // L
  std::int64_t steps = 1;   // T
  AccountantConstants constants;
  // When false, epsilon above the analysed range is accepted and privacy
  // rests on the quadrature verification alone.
  bool enforce_range = true;
};

struct Calibration {
  double sigma = 0.0;
  double beta = 0.0;            // L * eps0
  double gamma = 1.0;
  double epsilon_limit = 0.0;   // c1 T beta^2 / (1 - 2 beta)
  bool in_range = true;
  TailBound oracle;             // from MomentOracle, composed over T
  TailBound closed_form;        // from AlphaBound, composed over T
  bool verified = false;        // oracle.delta <= delta
};

// Throws DomainError on invalid specs.
void ValidatePrivacySpec(const PrivacySpec& spec);

// sigma = c2 beta sqrt(T log(1/delta)) / ((1 - 2 beta) epsilon), followed by
// the accounting round trip. Throws BudgetError when epsilon is outside the
// analysed range (and the range is enforced) and InfeasibleError when the
// round trip does not certify delta.
Calibration CalibrateSigma(const PrivacySpec& spec);

// The accounting round trip for a given sigma.
Calibration VerifySigma(const PrivacySpec& spec, double sigma);

struct MomentGridPoint {
  double beta = 0.0;
  double sigma = 0.0;
  std::int64_t lambda = 1;
  double bound = 0.0;
  double oracle = 0.0;
};

struct MomentGridReport {
  std::vector<MomentGridPoint> points;
  std::int64_t violations = 0;
};

// AlphaBound versus MomentOracle on beta/sigma in {0.1, ..., 1.0} for a
// fixed set of sigma, at the admissible orders plus `extra_lambdas`.
MomentGridReport ValidateMomentGrid(const AccountantConstants& k = {},
                                    const std::vector<std::int64_t>& extra_lambdas = {});

// CSV with header "lambda,alpha".
void WriteMomentCsv(std::ostream& out, const MomentTable& table);

}  // namespace dpje

#endif  // DPJE_ACCOUNTANT_H_
