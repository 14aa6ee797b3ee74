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

#ifndef DPJE_NOISE_H_
#define DPJE_NOISE_H_

#include "dpje/random.h"

namespace dpje {

// Truncation interval of the mechanism's noise.
inline constexpr double kSupportLo = -0.5;
inline constexpr double kSupportHi = 0.5;

// N^T(mean, sigma^2, [-0.5, 0.5]).
struct NoiseSpec {
  double mean = 0.0;
  double sigma = 0.1;
};

struct TruncConstants {
  double c_sigma = 1.0;       // Phi(0.5/sigma) - Phi(-0.5/sigma)
  double c_beta_sigma = 1.0;  // Phi((0.5-beta)/sigma) - Phi((-0.5-beta)/sigma)
  double gamma = 1.0;         // c_sigma / c_beta_sigma
};

// Standard normal cdf and its complement, accurate in both tails.
double NormalCdf(double x);
double NormalSf(double x);
double NormalPdf(double x);

// Throws DomainError for sigma <= 0.
TruncConstants Constants(double beta, double sigma);

// Density and cdf of the truncated normal. Throw DomainError for sigma <= 0
// or |mean| >= 0.5.
double Pdf(const NoiseSpec& spec, double z);
double Cdf(const NoiseSpec& spec, double z);

// Inverse cdf at u in (0, 1), evaluated on whichever tail of the
// untruncated normal keeps the probability band well conditioned.
double Quantile(const NoiseSpec& spec, double u);

double Sample(const NoiseSpec& spec, Stream& stream);

// The per-(step, row) draw used by the mechanism: one uniform derived from
// the key, pushed through Quantile.
double SampleKeyed(const NoiseSpec& spec, std::uint64_t seed,
                   std::uint64_t iteration, std::uint64_t row);

// E|Z| for mean 0 by quadrature. Requires sigma in (0, 0.1], the range in
// which E|Z| <= sigma is guaranteed; throws DomainError otherwise.
double AbsMoment(const NoiseSpec& spec);

}  // namespace dpje

#endif  // DPJE_NOISE_H_
