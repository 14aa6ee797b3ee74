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

#include "dpje/numerics.h"

#include <gtest/gtest.h>

#include "dpje/errors.h"
#include "dpje/random.h"
#include "test_oracles.h"

namespace dpje {
namespace {

Polytope Identity(Eigen::Index d) { return Polytope(Eigen::MatrixXd::Identity(d, d)); }

TEST(GramTest, IdentityWeights) {
  EXPECT_EQ(Gram(Identity(2), Eigen::Vector2d(1, 1)), Eigen::MatrixXd::Identity(2, 2));
}

TEST(GramTest, Diagonal) {
  const Eigen::MatrixXd q = Gram(Identity(2), Eigen::Vector2d(2, 3));
  EXPECT_EQ(q, Eigen::Vector2d(2, 3).asDiagonal().toDenseMatrix());
}

TEST(GramTest, Errors) {
  EXPECT_THROW(Gram(Identity(2), Eigen::Vector2d(0, 0)), SingularError);
  EXPECT_THROW(Gram(Identity(2), Eigen::Vector2d(1, -1)), DomainError);
  EXPECT_THROW(Gram(Identity(2), Eigen::Vector3d(1, 1, 1)), DimensionError);
}

TEST(GramTest, LinearInWeights) {
  const Polytope p = RandomGaussianPolytope(25, 4, 2);
  Stream stream(1, StreamTag::kUser);
  Eigen::VectorXd w1(25), w2(25);
  for (int i = 0; i < 25; ++i) {
    w1(i) = stream.Uniform();
    w2(i) = stream.Uniform();
  }
  const Eigen::MatrixXd lhs = Gram(p, 0.3 * w1 + 1.7 * w2);
  const Eigen::MatrixXd rhs = 0.3 * Gram(p, w1) + 1.7 * Gram(p, w2);
  EXPECT_LE((lhs - rhs).norm(), 1e-12 * lhs.norm());
}

TEST(LeverageTest, SquareIdentity) {
  const Eigen::VectorXd h = Leverage(Identity(4), Eigen::VectorXd::Ones(4));
  EXPECT_TRUE(h.isApprox(Eigen::VectorXd::Ones(4), 1e-15));
}

TEST(LeverageTest, Diagonal) {
  const Eigen::VectorXd h = Leverage(Identity(2), Eigen::Vector2d(2, 3));
  EXPECT_NEAR(h(0), 0.5, 1e-15);
  EXPECT_NEAR(h(1), 1.0 / 3.0, 1e-15);
}

TEST(LeverageTest, TraceIdentityAndOracle) {
  const Polytope p = RandomGaussianPolytope(30, 4, 8);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(30);
  const Eigen::VectorXd h = Leverage(p, ones);
  const Eigen::VectorXd ref = oracle::Leverage(p.matrix(), ones);
  EXPECT_NEAR(ref.sum(), 4.0, 1e-12);
  EXPECT_NEAR(h.sum(), 4.0, 1e-12);
  EXPECT_LE((h - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LeverageTest, WeightedTraceIsDimension) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Polytope p = RandomGaussianPolytope(40, 6, seed);
    Stream stream(seed, StreamTag::kUser);
    Eigen::VectorXd w(40);
    for (int i = 0; i < 40; ++i) w(i) = 0.05 + stream.Uniform();
    const Eigen::VectorXd h = Leverage(p, w);
    EXPECT_NEAR(w.dot(h), 6.0, 1e-10);
    EXPECT_GE(h.minCoeff(), 0.0);
    EXPECT_LE((h - oracle::Leverage(p.matrix(), w)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(InvSqrtTest, Identity) {
  EXPECT_TRUE(InvSqrt(Eigen::MatrixXd::Identity(3, 3))
                  .isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-15));
}

TEST(InvSqrtTest, Diagonal) {
  const Eigen::MatrixXd m = InvSqrt(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix());
  EXPECT_NEAR(m(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(m(1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m(0, 1), 0.0, 1e-15);
}

TEST(InvSqrtTest, ResidualAndCommutation) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const Eigen::MatrixXd q = oracle::RandomSpd(5, seed);
    const Eigen::MatrixXd m = InvSqrt(q);
    EXPECT_LE((m * q * m - Eigen::MatrixXd::Identity(5, 5)).norm(), 1e-8);
    EXPECT_LE((m * q - q * m).norm(), 1e-8 * q.norm());
    EXPECT_EQ(m, m.transpose());
  }
}

TEST(InvSqrtTest, Singular) {
  EXPECT_THROW(InvSqrt(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()),
               SingularError);
}

TEST(PerturbBoundsTest, EqualMatrices) {
  const Eigen::MatrixXd a = RandomGaussianPolytope(10, 3, 4).matrix();
  const PerturbReport r = PerturbBounds(a, a);
  EXPECT_TRUE(r.all_ok());
  EXPECT_EQ(r.diff_norm, 0.0);
  EXPECT_EQ(r.weyl_lhs, 0.0);
}

TEST(PerturbBoundsTest, RankOneDiagonalShift) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2);
  b(0, 0) += 1e-3;
  const PerturbReport r = PerturbBounds(Eigen::MatrixXd::Identity(2, 2), b);
  EXPECT_NEAR(r.weyl_lhs, 1e-3, 1e-15);
  EXPECT_NEAR(r.diff_norm, 1e-3, 1e-15);
  EXPECT_TRUE(r.all_ok());
}

TEST(PerturbBoundsTest, RandomPairsWithinPrecondition) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::MatrixXd a = RandomGaussianPolytope(12, 4, seed).matrix();
    const double smin = oracle::SingularValues(a).back();
    Stream stream(seed, StreamTag::kUser);
    Eigen::MatrixXd e(12, 4);
    for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = stream.Normal();
    const double scale = 0.1 * smin * stream.Uniform() / oracle::SingularValues(e).front();
    const PerturbReport r = PerturbBounds(a, a + scale * e);
    EXPECT_TRUE(r.all_ok()) << "seed " << seed;
  }
}

TEST(PerturbBoundsTest, PreconditionAndShape) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(PerturbBounds(a, 1.5 * a), PreconditionError);
  EXPECT_THROW(PerturbBounds(a, Eigen::MatrixXd::Identity(3, 2)), DimensionError);
}

}  // namespace
}  // namespace dpje
