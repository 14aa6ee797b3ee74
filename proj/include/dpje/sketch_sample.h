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

#ifndef DPJE_SKETCH_SAMPLE_H_
#define DPJE_SKETCH_SAMPLE_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace dpje {

struct SketchSpec {
  int s = 1;                    // sketch rows
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;  // selects an independent stream per step
};

struct SampleSpec {
  double n_target = 1.0;        // expected sample count N
  double delta1 = 0.01;
  double xi0 = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  bool force_full = false;      // p_i = 1 for every row, so D = I
};

// Diagonal sampling matrix stored as a dense scale vector (zero for rows not
// sampled) together with the sampled indices.
struct SamplingMatrix {
  Eigen::VectorXd scale;
  std::vector<Eigen::Index> rows;
  bool resampled = false;

  bool is_identity() const {
    return static_cast<Eigen::Index>(rows.size()) == scale.size() &&
           (scale.array() == 1.0).all();
  }
};

// ceil(8 / xi).
int SketchRows(double xi);

// ceil(8 xi0^-2 d log(n d / delta1)).
double SampleTarget(double xi0, Eigen::Index n, Eigen::Index d, double delta1);

// s x d matrix of i.i.d. N(0, 1) entries from the (seed, iteration) stream.
Eigen::MatrixXd DrawSketch(const SketchSpec& spec, Eigen::Index d);

// sqrt(d) I_d: a deterministic sketch with S^T S = s I, so sketched weights
// equal exact ones.
Eigen::MatrixXd IsometrySketch(Eigen::Index d);

// O(1)-approximate leverage scores of B from a 4d x n Gaussian sketch: QR of
// Pi B gives R, and l_i = ||b_i^T R^{-1}||^2.
Eigen::VectorXd ApproxLeverage(const Eigen::MatrixXd& b, std::uint64_t seed,
                               std::uint64_t iteration);

// Bernoulli row sampling with p_i = min(1, N l_i / sum l) and scale 1 / p_i.
// A singular B^T D B triggers one resample with fresh randomness; a second
// failure throws RankError.
SamplingMatrix SampleRows(const Eigen::MatrixXd& b, const SampleSpec& spec);

// B^T D B.
Eigen::MatrixXd SampledGram(const Eigen::MatrixXd& b, const SamplingMatrix& dm);

// (1/s) ||S (B^T D B)^{-1/2} b_i||^2 for every row i of B.
Eigen::VectorXd SketchedWeights(const Eigen::MatrixXd& b,
                                const SamplingMatrix& dm,
                                const Eigen::MatrixXd& sketch);

// Single-row form of SketchedWeights.
double SketchedWeight(const Eigen::MatrixXd& b, const SamplingMatrix& dm,
                      const Eigen::MatrixXd& sketch, Eigen::Index i);

}  // namespace dpje

#endif  // DPJE_SKETCH_SAMPLE_H_
