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

#ifndef DPJE_QUADRATURE_H_
#define DPJE_QUADRATURE_H_

#include <functional>
#include <vector>

namespace dpje {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Gauss-Kronrod error estimate
};

// Adaptive 61-point Gauss-Kronrod integral of f over [a, b]. Throws
// QuadratureError when the error estimate exceeds abs_tol and is also above
// the roundoff level of the integrand's L1 norm.
QuadratureResult Integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12);

// Splits [points.front(), points.back()] at every interior point, which
// helps when f is sharply peaked at a known location.
QuadratureResult IntegratePiecewise(const std::function<double(double)>& f,
                                    std::vector<double> points,
                                    double abs_tol = 1e-12);

// Breakpoints for a Gaussian-like bump centred at `center` with width
// `scale`, clipped to [lo, hi].
std::vector<double> PeakBreakpoints(double lo, double hi, double center,
                                    double scale);

}  // namespace dpje

#endif  // DPJE_QUADRATURE_H_
