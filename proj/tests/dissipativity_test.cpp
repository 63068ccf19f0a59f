/*
 * Copyright (c) 2026 The dissynth authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "dissipativity.hpp"
#include "generators.hpp"
#include "test_util.hpp"

namespace dissynth::dissipativity {
namespace {

using testing::randomSupply;

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

TEST(SupplyTest, PassiveAndGain) {
  const SupplyRate p1 = passiveSupply(1);
  EXPECT_EQ(p1.s.matrix(), (Matrix(2, 2) << 0, 1, 1, 0).finished());
  EXPECT_EQ(matcore::inertia(p1.s), (Inertia{1, 0, 1}));
  EXPECT_EQ(matcore::inertia(passiveSupply(2).s), (Inertia{2, 0, 2}));

  const SupplyRate g = l2GainSupply(2, 1, 2.0);
  EXPECT_EQ(g.s.matrix(), Matrix(Eigen::Vector3d(4, 4, -1).asDiagonal()));
  EXPECT_TRUE(hasSynthesisInertia(g));
  EXPECT_THROW(l2GainSupply(1, 1, 0.0), ValidationError);
  EXPECT_THROW(l2GainSupply(1, 1, -1.0), ValidationError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(hasSynthesisInertia(l2GainSupply(1 + i % 3, 1 + i % 2, u(rng))));
  }
}

TEST(SupplyTest, StateStrictPassive) {
  const StateStrictSupply s = stateStrictPassiveSupply(2, 1, 0.335);
  EXPECT_EQ(matcore::inertia(s.base.s), (Inertia{3, 0, 1}));
  EXPECT_TRUE(hasSynthesisInertia(s.base));
  const StateStrictSupply one = stateStrictPassiveSupply(1, 1, 1.0);
  const Vector ev = matcore::eigenvalues(one.base.s);
  EXPECT_NEAR(ev(0), -1.0, 1e-12);
  EXPECT_NEAR(ev(1), -1.0, 1e-12);
  EXPECT_NEAR(ev(2), 1.0, 1e-12);
  EXPECT_THROW(stateStrictPassiveSupply(1, 1, 0.0), ValidationError);

  // 2 u'y - eps |x|^2 on (u, x, y).
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vector uu = testing::randn(rng, 1, 1);
    const Vector x = testing::randn(rng, 2, 1);
    const Vector y = testing::randn(rng, 1, 1);
    Vector w(4);
    w << uu, x, y;
    EXPECT_NEAR(w.dot(s.base.s.matrix() * w),
                2.0 * uu.dot(y) - 0.335 * x.squaredNorm(), 1e-12);
  }
}

TEST(SupplyTest, WrongInertiaIsHypothesisFailure) {
  const SupplyRate bad = customSupply(SymMatrix::identity(2), 1);
  EXPECT_FALSE(hasSynthesisInertia(bad));
  try {
    requireSynthesisInertia(bad);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.hypothesis(), "supply inertia");
  }
}

TEST(DissipationMatrixTest, Examples) {
  const SymMatrix feed = dissipationMatrix(m1(0), m1(0), m1(0), m1(1),
                                           passiveSupply(1), SymMatrix::zero(1));
  EXPECT_EQ(feed.matrix(), (Matrix(2, 2) << 0, 0, 0, 2).finished());

  const SymMatrix delay = dissipationMatrix(m1(0), m1(1), m1(1), m1(0),
                                            l2GainSupply(1, 1, 1.0),
                                            SymMatrix(m1(1)));
  EXPECT_TRUE(delay.matrix().isZero(1e-15));

  std::mt19937_64 rng(3);
  const SupplyRate zeroS{SymMatrix::zero(3), 1, 2};
  const SymMatrix z = dissipationMatrix(testing::randn(rng, 2, 2),
                                        testing::randn(rng, 2, 1),
                                        testing::randn(rng, 2, 2),
                                        testing::randn(rng, 2, 1), zeroS,
                                        SymMatrix::zero(2));
  EXPECT_TRUE(z.matrix().isZero());

  EXPECT_THROW(dissipationMatrix(m1(0), m1(0), m1(0), Matrix::Zero(2, 1),
                                 passiveSupply(1), SymMatrix::zero(1)),
               DimensionError);
}

TEST(AnalysisTest, Examples) {
  const AnalysisResult feed =
      analyzeDissipativity(m1(0), m1(0), m1(0), m1(1), passiveSupply(1));
  EXPECT_EQ(feed.status, sdp::Status::Feasible) << feed.message;

  const AnalysisResult delay =
      analyzeDissipativity(m1(0), m1(1), m1(1), m1(0), l2GainSupply(1, 1, 1.0));
  ASSERT_EQ(delay.status, sdp::Status::Feasible) << delay.message;
  EXPECT_NEAR((*delay.p)(0, 0), 1.0, 1e-6);
  const SymMatrix dm = dissipationMatrix(m1(0), m1(1), m1(1), m1(0),
                                         l2GainSupply(1, 1, 1.0), *delay.p);
  EXPECT_GE(matcore::minEigenvalue(dm), -1e-9);
  EXPECT_GE(matcore::minEigenvalue(*delay.p), -1e-9);

  const AnalysisResult tight =
      analyzeDissipativity(m1(0), m1(1), m1(1), m1(0), l2GainSupply(1, 1, 0.9));
  EXPECT_EQ(tight.status, sdp::Status::Infeasible) << tight.message;
  ASSERT_TRUE(tight.certificateBound.has_value());
  EXPECT_LT(*tight.certificateBound, 0.0);

  const AnalysisResult unstable =
      analyzeDissipativity(m1(2), m1(1), m1(1), m1(0), l2GainSupply(1, 1, 0.1));
  EXPECT_EQ(unstable.status, sdp::Status::Infeasible) << unstable.message;
}

TEST(AnalysisTest, StrictStorageToggle) {
  // The unit delay admits only P = 1, which is also strictly positive.
  const AnalysisOptions strict{.strictStorage = true};
  const AnalysisResult res = analyzeDissipativity(
      m1(0), m1(1), m1(1), m1(0), l2GainSupply(1, 1, 1.0), strict);
  ASSERT_EQ(res.status, sdp::Status::Feasible) << res.message;
  EXPECT_GE((*res.p)(0, 0), 1e-6 - 1e-9);
}

// Random stable systems with generous gain bound; returned P is certified and
// satisfies the dissipation inequality along trajectories.
TEST(AnalysisTest, CertificateAndTrajectoryDissipation) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  int certified = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = 0.4 * testing::randOrthogonal(rng, 3);
    const Matrix b = testing::randn(rng, 3, 1);
    const Matrix c = testing::randn(rng, 2, 3);
    const Matrix d = testing::randn(rng, 2, 1);
    const SupplyRate s = l2GainSupply(1, 2, 20.0);
    const AnalysisResult res = analyzeDissipativity(a, b, c, d, s);
    ASSERT_EQ(res.status, sdp::Status::Feasible) << res.message;
    ++certified;
    const SymMatrix& p = *res.p;
    EXPECT_GE(matcore::minEigenvalue(dissipationMatrix(a, b, c, d, s, p)),
              -1e-8 * std::max(1.0, matcore::scaleOf(p)));
    EXPECT_GE(matcore::minEigenvalue(p), -1e-8);
    for (int traj = 0; traj < 10; ++traj) {
      Vector x = testing::randn(rng, 3, 1);
      for (int t = 0; t < 20; ++t) {
        const Vector u = testing::randn(rng, 1, 1);
        const Vector y = c * x + d * u;
        const Vector xn = a * x + b * u;
        Vector w(3);
        w << u, y;
        const double supply = w.dot(s.s.matrix() * w);
        const double storageGain =
            xn.dot(p.matrix() * xn) - x.dot(p.matrix() * x);
        const double scale = 1.0 + std::abs(supply) + x.squaredNorm() *
                                                          matcore::scaleOf(p);
        EXPECT_LE(storageGain, supply + 1e-9 * scale);
        x = xn;
      }
    }
  }
  EXPECT_EQ(certified, 10);
}

TEST(DualizeTest, Examples) {
  const SupplyRate p = passiveSupply(1);
  EXPECT_TRUE(dualize(p).s.matrix().isApprox(p.s.matrix()));
  const SupplyRate g = dualize(l2GainSupply(1, 1, 2.0));
  EXPECT_NEAR(g.s(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(g.s(1, 1), -0.25, 1e-14);
  EXPECT_NEAR(g.s(0, 1), 0.0, 1e-14);
  EXPECT_THROW(dualize(SupplyRate{SymMatrix::zero(2), 1, 1}), ValidationError);
  EXPECT_THROW(dualDissipationMatrix(m1(0), m1(0), m1(0), m1(1), p,
                                     SymMatrix(m1(-1))),
               ValidationError);
}

TEST(DualizeTest, InertiaSwaps) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const int in = 1 + i % 3, out = 1 + (i / 3) % 3;
    const SupplyRate s = randomSupply(rng, in, out);
    ASSERT_TRUE(hasSynthesisInertia(s));
    const SupplyRate h = dualize(s);
    EXPECT_EQ(matcore::inertia(h.s), (Inertia{in, 0, out}));
    EXPECT_TRUE(hasSynthesisInertia(h));
  }
}

TEST(DualizeTest, StateStrictPencil) {
  for (double eps : {0.1, 0.335, 2.0}) {
    const StateStrictSupply s = stateStrictPassiveSupply(2, 1, eps);
    const SupplyPencil pen = dualStateStrictPencil(2, 1);
    const Matrix expect = pen.constant.matrix() + (1.0 / eps) * pen.slope.matrix();
    EXPECT_TRUE(dualize(s.base).s.matrix().isApprox(expect, 1e-12));
  }
}

TEST(DualizeTest, PrimalDualEquivalence) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> shrink(0.1, 1.2);
  int positive = 0, negative = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 3, m = 1 + (trial / 3) % 2, p = 1 + (trial / 6) % 2;
    const SupplyRate s = randomSupply(rng, m, p);
    const Matrix a = shrink(rng) * testing::randOrthogonal(rng, n);
    const Matrix b = 0.5 * testing::randn(rng, n, m);
    const Matrix c = 0.5 * testing::randn(rng, p, n);
    const Matrix d = 0.3 * testing::randn(rng, p, m);
    const SymMatrix pm(testing::randPd(rng, n, 1.0));
    const double primal =
        matcore::minEigenvalue(dissipationMatrix(a, b, c, d, s, pm));
    const SymMatrix q = SymMatrix::symmetrize(pm.matrix().inverse());
    const double dual =
        matcore::minEigenvalue(dualDissipationMatrix(a, b, c, d, dualize(s), q));
    if (std::abs(primal) < 1e-9 || std::abs(dual) < 1e-9) continue;
    EXPECT_EQ(primal > 0, dual > 0) << "trial " << trial << ": " << primal
                                    << " vs " << dual;
    (primal > 0 ? positive : negative)++;
  }
  EXPECT_GT(positive, 20);
  EXPECT_GT(negative, 20);
}

}  // namespace
}  // namespace dissynth::dissipativity
