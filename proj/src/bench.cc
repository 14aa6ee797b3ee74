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

#include "dpje/bench.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpje/dpje.h"
#include "dpje/polytope.h"

namespace dpje {

BenchPoint TimeRun(std::int64_t n, std::int64_t d, int iterations, double xi,
                   int repeats, std::uint64_t seed) {
  const Polytope p = RandomGaussianPolytope(n, d, seed);
  RunConfig cfg;
  cfg.xi = xi;
  cfg.iterations = iterations;
  cfg.seed = seed;
  BenchPoint point;
  point.n = n;
  point.d = d;
  point.iterations = iterations;
  point.nnz = static_cast<std::int64_t>(ComputeSpectralStats(p).nnz);
  point.seconds = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, repeats); ++r) {
    point.seconds = std::min(point.seconds, Run(p, cfg).seconds);
  }
  return point;
}

ScalingCheck CheckNScaling(const std::vector<BenchPoint>& points) {
  std::vector<BenchPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(),
            [](const BenchPoint& a, const BenchPoint& b) { return a.n < b.n; });
  ScalingCheck check;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const double time_ratio = sorted[k].seconds / sorted[k - 1].seconds;
    const double nnz_ratio =
        static_cast<double>(sorted[k].nnz) / static_cast<double>(sorted[k - 1].nnz);
    check.worst_ratio = std::max(check.worst_ratio, time_ratio / (1.5 * nnz_ratio));
  }
  check.ok = check.worst_ratio <= 1.0;
  return check;
}

ScalingCheck CheckTScaling(const std::vector<BenchPoint>& points) {
  std::vector<BenchPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const BenchPoint& a, const BenchPoint& b) {
    return a.iterations < b.iterations;
  });
  ScalingCheck check;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const double time_ratio = sorted[k].seconds / sorted[k - 1].seconds;
    const double t_ratio = static_cast<double>(sorted[k].iterations) /
                           static_cast<double>(sorted[k - 1].iterations);
    const double relative = time_ratio / t_ratio;
    check.worst_ratio = std::max(check.worst_ratio, std::abs(relative - 1.0) / 0.2);
  }
  check.ok = check.worst_ratio <= 1.0;
  return check;
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchPoint>& points) {
  out << "n,d,T,nnz,seconds\n";
  out.precision(6);
  for (const BenchPoint& p : points) {
    out << p.n << ',' << p.d << ',' << p.iterations << ',' << p.nnz << ','
        << p.seconds << '\n';
  }
}

}  // namespace dpje
