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

#ifndef DPJE_BENCH_H_
#define DPJE_BENCH_H_

#include <cstdint>
#include <ostream>
#include <vector>

namespace dpje {

struct BenchPoint {
  std::int64_t n = 0;
  std::int64_t d = 0;
  int iterations = 0;
  std::int64_t nnz = 0;
  double seconds = 0.0;  // minimum over repeats
};

// Times the privacy-off iteration on a Gaussian polytope, keeping the
// fastest of `repeats` runs.
BenchPoint TimeRun(std::int64_t n, std::int64_t d, int iterations, double xi,
                   int repeats, std::uint64_t seed);

struct ScalingCheck {
  double worst_ratio = 0.0;  // time ratio / (1.5 * nnz ratio), <= 1 passes
  bool ok = true;
};

// Consecutive points sorted by n: time(n2)/time(n1) <= 1.5 nnz(n2)/nnz(n1).
ScalingCheck CheckNScaling(const std::vector<BenchPoint>& points);

// Consecutive points sorted by T: the time ratio is within +-20% of the T
// ratio.
ScalingCheck CheckTScaling(const std::vector<BenchPoint>& points);

void WriteBenchCsv(std::ostream& out, const std::vector<BenchPoint>& points);

}  // namespace dpje

#endif  // DPJE_BENCH_H_
