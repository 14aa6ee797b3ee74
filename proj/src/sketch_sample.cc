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

#include "dpje/sketch_sample.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dpje/errors.h"
#include "dpje/numerics.h"
#include "dpje/random.h"

namespace dpje {
namespace {

Eigen::MatrixXd GaussianMatrix(Stream& stream, Eigen::Index rows,
                               Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill keeps the draw order independent of the layout of any
  // later product.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = stream.Normal();
  }
  return m;
}

SamplingMatrix DrawSample(const Eigen::VectorXd& probability,
                          std::uint64_t seed, std::uint64_t iteration,
                          std::uint64_t attempt) {
  Stream stream(seed, StreamTag::kRowSample, {iteration, attempt});
  SamplingMatrix dm;
  dm.scale = Eigen::VectorXd::Zero(probability.size());
  for (Eigen::Index i = 0; i < probability.size(); ++i) {
    const double u = stream.Uniform();
    if (probability(i) >= 1.0 || u < probability(i)) {
      dm.scale(i) = probability(i) >= 1.0 ? 1.0 : 1.0 / probability(i);
      dm.rows.push_back(i);
    }
  }
  return dm;
}

bool IsPositiveDefinite(const Eigen::MatrixXd& q) {
  try {
    RequirePositiveDefinite(q);
    return true;
  } catch (const SingularError&) {
    return false;
  }
}

}  // namespace

int SketchRows(double xi) {
  if (!(xi > 0.0)) throw DomainError("xi must be positive");
  return static_cast<int>(std::ceil(8.0 / xi));
}

double SampleTarget(double xi0, Eigen::Index n, Eigen::Index d, double delta1) {
  if (!(xi0 > 0.0 && xi0 <= 0.1)) {
    throw DomainError("sampling accuracy xi0 must lie in (0, 0.1]");
  }
  if (!(delta1 > 0.0 && delta1 < 1.0)) {
    throw DomainError("sampling failure probability must lie in (0, 1)");
  }
  const double nd = static_cast<double>(n) * static_cast<double>(d);
  return std::ceil(8.0 / (xi0 * xi0) * static_cast<double>(d) *
                   std::log(nd / delta1));
}

Eigen::MatrixXd DrawSketch(const SketchSpec& spec, Eigen::Index d) {
  if (spec.s < 1 || d < 1) throw DimensionError("sketch needs s >= 1, d >= 1");
  Stream stream(spec.seed, StreamTag::kSketch, {spec.iteration});
  return GaussianMatrix(stream, spec.s, d);
}

Eigen::MatrixXd IsometrySketch(Eigen::Index d) {
  return std::sqrt(static_cast<double>(d)) *
         Eigen::MatrixXd::Identity(d, d);
}

Eigen::VectorXd ApproxLeverage(const Eigen::MatrixXd& b, std::uint64_t seed,
                               std::uint64_t iteration) {
  const Eigen::Index d = b.cols();
  Stream stream(seed, StreamTag::kLeverageSketch, {iteration});
  const Eigen::MatrixXd pi = GaussianMatrix(stream, 4 * d, b.rows());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(pi * b);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  // Rows of B R^{-1}, obtained by solving R^T X^T = B^T.
  const Eigen::MatrixXd x = r.transpose().triangularView<Eigen::Lower>().solve(
      b.transpose());
  return x.colwise().squaredNorm().transpose();
}

SamplingMatrix SampleRows(const Eigen::MatrixXd& b, const SampleSpec& spec) {
  if (spec.force_full) {
    SamplingMatrix dm;
    dm.scale = Eigen::VectorXd::Ones(b.rows());
    dm.rows.resize(b.rows());
    for (Eigen::Index i = 0; i < b.rows(); ++i) dm.rows[i] = i;
    return dm;
  }
  if (spec.n_target < static_cast<double>(b.cols())) {
    throw DomainError("sample target N must be at least d");
  }
  const Eigen::VectorXd lev = ApproxLeverage(b, spec.seed, spec.iteration);
  const double total = lev.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw RankError("approximate leverage scores are degenerate");
  }
  const Eigen::VectorXd probability =
      (spec.n_target * lev / total).cwiseMin(1.0);
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    SamplingMatrix dm = DrawSample(probability, spec.seed, spec.iteration, attempt);
    dm.resampled = attempt > 0;
    if (IsPositiveDefinite(SampledGram(b, dm))) return dm;
  }
  throw RankError("sampled Gram matrix singular after one resample");
}

Eigen::MatrixXd SampledGram(const Eigen::MatrixXd& b, const SamplingMatrix& dm) {
  Eigen::MatrixXd q = b.transpose() * (dm.scale.asDiagonal() * b);
  return 0.5 * (q + q.transpose());
}

Eigen::VectorXd SketchedWeights(const Eigen::MatrixXd& b,
                                const SamplingMatrix& dm,
                                const Eigen::MatrixXd& sketch) {
  if (sketch.cols() != b.cols()) {
    throw DimensionError("sketch has " + std::to_string(sketch.cols()) +
                         " columns, expected d=" + std::to_string(b.cols()));
  }
  const Eigen::MatrixXd projector = sketch * InvSqrt(SampledGram(b, dm));
  const Eigen::MatrixXd image = projector * b.transpose();
  return image.colwise().squaredNorm().transpose() /
         static_cast<double>(sketch.rows());
}

double SketchedWeight(const Eigen::MatrixXd& b, const SamplingMatrix& dm,
                      const Eigen::MatrixXd& sketch, Eigen::Index i) {
  if (i < 0 || i >= b.rows()) throw IndexError("row index out of range");
  const Eigen::MatrixXd projector = sketch * InvSqrt(SampledGram(b, dm));
  return (projector * b.row(i).transpose()).squaredNorm() /
         static_cast<double>(sketch.rows());
}

}  // namespace dpje
