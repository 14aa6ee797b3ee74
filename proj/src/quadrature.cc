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

#include "dpje/quadrature.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpje/errors.h"

namespace dpje {

QuadratureResult Integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol) {
  QuadratureResult r;
  if (a == b) return r;
  // Deep bisection with a tolerance near machine precision piles up
  // roundoff in the error estimate, so refine in stages, stop early and
  // keep the best estimate seen.
  QuadratureResult best;
  best.error = std::numeric_limits<double>::infinity();
  for (unsigned depth : {0u, 4u, 8u, 12u}) {
    double l1 = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, depth, 1e-14, &r.error, &l1);
    if (!std::isfinite(r.value)) break;
    // Boost reports the error on the reference interval [-1, 1].
    r.error *= 0.5 * std::abs(b - a);
    if (r.error < best.error) best = r;
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * l1;
    if (r.error <= std::max(abs_tol, roundoff)) return best;
  }
  r = best;
  std::ostringstream msg;
  msg << "quadrature on [" << a << ", " << b << "] reached error " << r.error
      << " > tolerance " << abs_tol;
  throw QuadratureError(msg.str());
}

QuadratureResult IntegratePiecewise(const std::function<double(double)>& f,
                                    std::vector<double> points,
                                    double abs_tol) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  QuadratureResult total;
  const double pieces = std::max<double>(1.0, points.size() - 1.0);
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const QuadratureResult piece =
        Integrate(f, points[k], points[k + 1], abs_tol / pieces);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

std::vector<double> PeakBreakpoints(double lo, double hi, double center,
                                    double scale) {
  std::vector<double> points = {lo, hi};
  for (double offset : {-32.0, -8.0, -2.0, -0.5, 0.0, 0.5, 2.0, 8.0, 32.0}) {
    const double x = center + offset * scale;
    if (x > lo && x < hi) points.push_back(x);
  }
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace dpje
