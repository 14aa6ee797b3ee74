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

#include <cmath>

#include <gtest/gtest.h>

#include "dpje/errors.h"
#include "dpje/numerics.h"
#include "dpje/polytope.h"
#include "test_oracles.h"

namespace dpje {
namespace {

// Eigenvalues of (B^T B)^{-1/2} (B^T D B) (B^T B)^{-1/2}.
Eigen::VectorXd RelativeSpectrum(const Eigen::MatrixXd& b, const SamplingMatrix& dm) {
  const Eigen::MatrixXd root = InvSqrt(b.transpose() * b);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(root * SampledGram(b, dm) * root)
      .eigenvalues();
}

TEST(DrawSketchTest, ShapeAndDeterminism) {
  const Eigen::MatrixXd s = DrawSketch({2, 5, 0}, 3);
  EXPECT_EQ(s.rows(), 2);
  EXPECT_EQ(s.cols(), 3);
  EXPECT_EQ(s, DrawSketch({2, 5, 0}, 3));
  EXPECT_NE(s, DrawSketch({2, 5, 1}, 3));
  EXPECT_NE(s, DrawSketch({2, 6, 0}, 3));
}

TEST(DrawSketchTest, StandardNormalMoments) {
  const Eigen::MatrixXd s = DrawSketch({10000, 42, 0}, 1);
  const double mean = s.mean();
  const double var = (s.array() - mean).square().sum() / (s.size() - 1);
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(SketchRowsTest, Constants) {
  EXPECT_EQ(SketchRows(0.1), 80);
  EXPECT_EQ(SketchRows(0.2), 40);
  // 8 * 100 * 10 * log(500 * 10 / 0.01)
  EXPECT_DOUBLE_EQ(SampleTarget(0.1, 500, 10, 0.01), std::ceil(8000.0 * std::log(5e5)));
  EXPECT_THROW(SampleTarget(0.2, 500, 10, 0.01), DomainError);
}

TEST(SampleRowsTest, ForcedFullSamplingIsIdentity) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(50, 4, 1).matrix();
  SampleSpec spec;
  spec.force_full = true;
  const SamplingMatrix dm = SampleRows(b, spec);
  EXPECT_TRUE(dm.is_identity());
  EXPECT_EQ(SampledGram(b, dm), 0.5 * (b.transpose() * b + (b.transpose() * b).transpose()));
}

TEST(SampleRowsTest, IdentityBasisSampledWhenTargetIsLarge) {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(6, 6);
  SampleSpec spec;
  spec.n_target = 600;
  spec.seed = 3;
  const SamplingMatrix dm = SampleRows(b, spec);
  EXPECT_TRUE(dm.is_identity());
  EXPECT_LE((SampledGram(b, dm) - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-12);
}

TEST(SampleRowsTest, DerivedTargetOnModerateInstance) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(500, 10, 2).matrix();
  SampleSpec spec;
  spec.xi0 = 0.1;
  spec.delta1 = 0.01;
  spec.n_target = SampleTarget(0.1, 500, 10, 0.01);
  int good = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    spec.seed = trial;
    const Eigen::VectorXd ev = RelativeSpectrum(b, SampleRows(b, spec));
    if (ev.minCoeff() >= 0.9 && ev.maxCoeff() <= 1.1) ++good;
  }
  EXPECT_GE(good, 99);
}

// With a target well below n the sampler actually drops rows, so the
// spectral guarantee is exercised rather than met trivially.
TEST(SampleRowsTest, SpectralApproximationWhenSubsampling) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(20000, 5, 4).matrix();
  SampleSpec spec;
  spec.n_target = 5000;
  int good = 0;
  double kept = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    spec.seed = trial;
    const SamplingMatrix dm = SampleRows(b, spec);
    kept += static_cast<double>(dm.rows.size());
    const Eigen::VectorXd ev = RelativeSpectrum(b, dm);
    if (ev.minCoeff() >= 0.9 && ev.maxCoeff() <= 1.1) ++good;
  }
  EXPECT_LT(kept / 100.0, 7000.0);
  EXPECT_GE(good, 99);
}

TEST(SampleRowsTest, ScalesAreUnbiased) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(200, 4, 5).matrix();
  SampleSpec spec;
  spec.n_target = 50;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(200);
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    spec.seed = static_cast<std::uint64_t>(trial);
    mean += SampleRows(b, spec).scale;
  }
  mean /= trials;
  EXPECT_NEAR(mean.mean(), 1.0, 0.015);
}

TEST(SampleRowsTest, Deterministic) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(300, 3, 6).matrix();
  SampleSpec spec;
  spec.n_target = 60;
  spec.seed = 77;
  spec.iteration = 4;
  const SamplingMatrix a = SampleRows(b, spec);
  const SamplingMatrix c = SampleRows(b, spec);
  EXPECT_EQ(a.scale, c.scale);
  EXPECT_EQ(a.rows, c.rows);
}

TEST(SampleRowsTest, ResamplesOnceThenFails) {
  // Rows alternate between e1 and e2, so a tiny target often misses one
  // direction entirely.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(1000, 2);
  for (Eigen::Index i = 0; i < 1000; ++i) b(i, i % 2) = 1.0;
  SampleSpec spec;
  spec.n_target = 2;
  int failures = 0, recovered = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    spec.seed = seed;
    try {
      if (SampleRows(b, spec).resampled) ++recovered;
    } catch (const RankError&) {
      ++failures;
    }
  }
  EXPECT_GT(failures, 0);
  EXPECT_GT(recovered, 0);
}

TEST(ApproxLeverageTest, ConstantFactorApproximation) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(400, 8, 9).matrix();
  const Eigen::VectorXd exact = oracle::Leverage(b, Eigen::VectorXd::Ones(400));
  const Eigen::VectorXd approx = ApproxLeverage(b, 1, 0);
  const Eigen::ArrayXd ratio = approx.array() / exact.array();
  EXPECT_LE(ratio.maxCoeff() / ratio.minCoeff(), 16.0);
}

TEST(SketchedWeightTest, IsometryStubIsExact) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(30, 4, 10).matrix();
  SampleSpec spec;
  spec.force_full = true;
  const SamplingMatrix dm = SampleRows(b, spec);
  const Eigen::VectorXd exact = oracle::Leverage(b, Eigen::VectorXd::Ones(30));
  const Eigen::VectorXd sketched = SketchedWeights(b, dm, IsometrySketch(4));
  EXPECT_LE((sketched - exact).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(SketchedWeight(b, dm, IsometrySketch(4), 7), exact(7), 1e-12);
}

TEST(SketchedWeightTest, ZeroRowGivesZero) {
  Eigen::MatrixXd b = RandomGaussianPolytope(10, 3, 11).matrix();
  b.row(4).setZero();
  SampleSpec spec;
  spec.force_full = true;
  EXPECT_EQ(SketchedWeight(b, SampleRows(b, spec), DrawSketch({8, 1, 0}, 3), 4), 0.0);
}

TEST(SketchedWeightTest, UnbiasedOverSketches) {
  const Eigen::MatrixXd b = RandomGaussianPolytope(40, 5, 12).matrix();
  SampleSpec spec;
  spec.force_full = true;
  const SamplingMatrix dm = SampleRows(b, spec);
  const double exact = oracle::Leverage(b, Eigen::VectorXd::Ones(40))(3);
  const int trials = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double x =
        SketchedWeight(b, dm, DrawSketch({8, 99, static_cast<std::uint64_t>(t)}, 5), 3);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
  EXPECT_LE(std::abs(mean - exact), 3.0 * se);
}

}  // namespace
}  // namespace dpje
