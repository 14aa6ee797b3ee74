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

#include "dpje/noise.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "dpje/errors.h"
#include "dpje/quadrature.h"

namespace dpje {
namespace {

constexpr double kSqrt2 = boost::math::constants::root_two<double>();

void Validate(const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    std::ostringstream msg;
    msg << "sigma must be positive and finite, got " << spec.sigma;
    throw DomainError(msg.str());
  }
  if (!(std::abs(spec.mean) < 0.5)) {
    std::ostringstream msg;
    msg << "mean must lie in (-0.5, 0.5), got " << spec.mean;
    throw DomainError(msg.str());
  }
}

}  // namespace

double NormalCdf(double x) { return 0.5 * boost::math::erfc(-x / kSqrt2); }
double NormalSf(double x) { return 0.5 * boost::math::erfc(x / kSqrt2); }
double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) *
         boost::math::constants::one_div_root_two_pi<double>();
}

TruncConstants Constants(double beta, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const double scale = 1.0 / (sigma * kSqrt2);
  TruncConstants c;
  c.c_sigma = boost::math::erf(0.5 * scale);
  c.c_beta_sigma = 0.5 * (boost::math::erf((0.5 - beta) * scale) +
                          boost::math::erf((0.5 + beta) * scale));
  c.gamma = c.c_sigma / c.c_beta_sigma;
  return c;
}

double Pdf(const NoiseSpec& spec, double z) {
  Validate(spec);
  if (z < kSupportLo || z > kSupportHi) return 0.0;
  const TruncConstants c = Constants(spec.mean, spec.sigma);
  return NormalPdf((z - spec.mean) / spec.sigma) / (spec.sigma * c.c_beta_sigma);
}

double Cdf(const NoiseSpec& spec, double z) {
  Validate(spec);
  if (z <= kSupportLo) return 0.0;
  if (z >= kSupportHi) return 1.0;
  const double a = (kSupportLo - spec.mean) / spec.sigma;
  const double b = (kSupportHi - spec.mean) / spec.sigma;
  const double x = (z - spec.mean) / spec.sigma;
  // Differences of upper-tail probabilities stay accurate to the right of
  // the mean, lower-tail ones to the left.
  const double value = x > 0.0 ? (NormalSf(a) - NormalSf(x)) / (NormalSf(a) - NormalSf(b))
                               : (NormalCdf(x) - NormalCdf(a)) / (NormalCdf(b) - NormalCdf(a));
  return std::clamp(value, 0.0, 1.0);
}

double Quantile(const NoiseSpec& spec, double u) {
  Validate(spec);
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  const double a = (kSupportLo - spec.mean) / spec.sigma;
  const double b = (kSupportHi - spec.mean) / spec.sigma;
  double x;
  const double lower = NormalCdf(a) + u * (NormalCdf(b) - NormalCdf(a));
  if (lower <= 0.5) {
    x = -kSqrt2 * boost::math::erfc_inv(2.0 * lower);
  } else {
    // 1 - u is exact for u > 0.5, and upper tails keep full precision.
    const double upper = NormalSf(b) + (1.0 - u) * (NormalSf(a) - NormalSf(b));
    x = kSqrt2 * boost::math::erfc_inv(2.0 * upper);
  }
  return std::clamp(spec.mean + spec.sigma * x, kSupportLo, kSupportHi);
}

double Sample(const NoiseSpec& spec, Stream& stream) {
  return Quantile(spec, stream.Uniform());
}

double SampleKeyed(const NoiseSpec& spec, std::uint64_t seed,
                   std::uint64_t iteration, std::uint64_t row) {
  return Quantile(spec,
                  BitsToUnit(DeriveKey(seed, StreamTag::kNoise, {iteration, row})));
}

double AbsMoment(const NoiseSpec& spec) {
  Validate(spec);
  if (spec.mean != 0.0) throw DomainError("AbsMoment requires mean 0");
  if (spec.sigma > 0.1) {
    throw DomainError("AbsMoment requires sigma <= 0.1");
  }
  const TruncConstants c = Constants(0.0, spec.sigma);
  const double sigma = spec.sigma;
  auto integrand = [sigma](double z) { return z * NormalPdf(z / sigma) / sigma; };
  const double half = IntegratePiecewise(
      integrand, PeakBreakpoints(0.0, kSupportHi, 0.0, sigma)).value;
  return 2.0 * half / c.c_sigma;
}

}  // namespace dpje
