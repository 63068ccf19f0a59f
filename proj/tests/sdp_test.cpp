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

#include "sdp/solve.hpp"
#include "test_util.hpp"

namespace dissynth::sdp {
namespace {

Matrix scalarMat(double v) { return Matrix::Constant(1, 1, v); }

// [q - lo] >= 0 and [hi - q] >= 0 for a 1x1 symmetric variable.
LmiProblem interval(double lo, double hi, VarHandle* out = nullptr) {
  LmiProblem p;
  const VarHandle q = p.addSymmetric("Q", 1);
  AffineExpr below(1);
  below.var(0, 0, q).constant(0, 0, scalarMat(-lo));
  AffineExpr above(1);
  above.constant(0, 0, scalarMat(hi)).term(0, 0, scalarMat(-1.0), q, scalarMat(1.0));
  p.addConstraint("lower", below);
  p.addConstraint("upper", above);
  if (out) *out = q;
  return p;
}

class BackendTest : public ::testing::TestWithParam<std::string> {
 protected:
  SolveOptions options() const {
    SolveOptions o;
    o.backend = GetParam();
    return o;
  }
};

TEST_P(BackendTest, ScalarNonnegative) {
  LmiProblem p;
  const VarHandle x = p.addScalar("x");
  AffineExpr e(1);
  e.var(0, 0, x);
  p.addConstraint("x>=0", e);
  const SolveOutcome out = solve(p, options());
  ASSERT_EQ(out.status, Status::Feasible) << out.message;
  EXPECT_GE(out.assignment.scalar(x), -1e-7);
}

TEST_P(BackendTest, IntervalFeasible) {
  VarHandle q;
  const LmiProblem p = interval(2.0, 3.0, &q);
  const SolveOutcome out = solve(p, options());
  ASSERT_EQ(out.status, Status::Feasible) << out.message;
  const double v = out.assignment[q](0, 0);
  EXPECT_GE(v, 2.0 - 1e-7);
  EXPECT_LE(v, 3.0 + 1e-7);
  EXPECT_NEAR(out.margin, 0.5, 1e-6);
}

TEST_P(BackendTest, IntervalInfeasibleWithCertificate) {
  const LmiProblem p = interval(2.0, 1.0);
  const SolveOutcome out = solve(p, options());
  ASSERT_EQ(out.status, Status::Infeasible) << out.message;
  ASSERT_TRUE(out.certificate.has_value());
  // max_t min(Q - 2, 1 - Q) = -0.5; the bound is valid from above. The
  // barrier dual point is only approximately feasible, hence looser.
  const double slack = GetParam() == "ipm" ? 1e-6 : 1e-3;
  EXPECT_GE(out.certificate->bound, -0.5 - 1e-9);
  EXPECT_LE(out.certificate->bound, -0.5 + slack);
  for (const Matrix& xb : out.certificate->blocks) {
    EXPECT_GE(testing::minEig(xb), -1e-12);
  }
}

TEST_P(BackendTest, DiscreteLyapunov) {
  // P >= I, P - A^T P A >= I.
  for (double rho : {0.9, 1.1}) {
    Matrix a(2, 2);
    a << rho, 0.3, 0.0, 0.5;
    LmiProblem p;
    const VarHandle pv = p.addSymmetric("P", 2);
    AffineExpr pos(2);
    pos.var(0, 0, pv).constant(0, 0, -Matrix::Identity(2, 2));
    AffineExpr lyap(2);
    lyap.var(0, 0, pv)
        .term(0, 0, -a.transpose(), pv, a)
        .constant(0, 0, -Matrix::Identity(2, 2));
    p.addConstraint("P>=I", pos);
    p.addConstraint("lyapunov", lyap);
    const SolveOutcome out = solve(p, options());
    if (rho < 1.0) {
      ASSERT_EQ(out.status, Status::Feasible) << out.message;
      const Matrix pm = out.assignment[pv];
      EXPECT_GE(testing::minEig(pm - a.transpose() * pm * a), 1.0 - 1e-6);
    } else {
      EXPECT_EQ(out.status, Status::Infeasible) << out.message;
    }
  }
}

TEST_P(BackendTest, ObjectivePhaseKeepsFeasibility) {
  // maximise x subject to [[1, x], [x, 1]] >= 0  (|x| <= 1).
  LmiProblem p;
  const VarHandle x = p.addScalar("x");
  AffineExpr e(2);
  e.constant(0, 0, Matrix::Identity(2, 2)).scalarTimes(0, 1, x, scalarMat(1.0));
  p.addConstraint("norm", e);
  p.maximize(x);
  const SolveOutcome out = solve(p, options());
  ASSERT_EQ(out.status, Status::Feasible) << out.message;
  // Feasibility margin is 1 at x = 0; half of it is kept: 1 - |x| >= 0.5.
  EXPECT_NEAR(out.assignment.scalar(x), 0.5, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Backends, BackendTest,
                         ::testing::Values("ipm", "barrier"));

TEST(RecheckTest, EmptyConstraintListPasses) {
  LmiProblem p;
  p.addScalar("unused");
  Assignment a{{Matrix::Zero(1, 1)}};
  EXPECT_TRUE(recheck(p, a, 1e-7));
}

TEST(RecheckTest, PerturbationOnTightInstanceFails) {
  VarHandle q;
  const LmiProblem p = interval(2.0, 2.0, &q);
  const SolveOutcome out = solve(p, SolveOptions{});
  ASSERT_EQ(out.status, Status::Feasible) << out.message;
  EXPECT_NEAR(out.assignment[q](0, 0), 2.0, 1e-7);
  Assignment perturbed = out.assignment;
  perturbed.values[q.id](0, 0) += 1e-2;
  EXPECT_FALSE(recheck(p, perturbed, 1e-7));
}

TEST(LmiProblemTest, SymmetricCoordinatesPreserveInnerProducts) {
  std::mt19937_64 rng(2);
  LmiProblem p;
  const VarHandle s = p.addSymmetric("S", 4);
  const VarHandle r = p.addRectangular("R", 2, 3);
  const VarHandle x = p.addScalar("x");
  EXPECT_EQ(p.numCoordinates(), 10 + 6 + 1);
  const Matrix sv = testing::randSym(rng, 4);
  const Matrix sw = testing::randSym(rng, 4);
  std::vector<Matrix> vals{sv, testing::randn(rng, 2, 3), scalarMat(0.7)};
  const Vector y = p.coordinatesFromValues(vals);
  const auto back = p.valuesFromCoordinates(y);
  EXPECT_TRUE(back[s.id].isApprox(sv));
  EXPECT_TRUE(back[r.id].isApprox(vals[1]));
  EXPECT_DOUBLE_EQ(back[x.id](0, 0), 0.7);
  std::vector<Matrix> vals2{sw, Matrix::Zero(2, 3), scalarMat(0.0)};
  const Vector y2 = p.coordinatesFromValues(vals2);
  EXPECT_NEAR(y.head(10).dot(y2.head(10)), sv.cwiseProduct(sw).sum(), 1e-12);
}

TEST(LmiProblemTest, RejectsMisplacedBlocks) {
  LmiProblem p;
  const VarHandle q = p.addSymmetric("Q", 3);
  AffineExpr e(2);
  EXPECT_THROW(e.var(0, 0, q), DimensionError);
  EXPECT_THROW(e.constant(1, 1, Matrix::Identity(2, 2)), DimensionError);
}

TEST(LmiProblemTest, AsymmetricDiagonalTermIsRejectedAtCompile) {
  LmiProblem p;
  const VarHandle l = p.addRectangular("L", 2, 2);
  AffineExpr e(2);
  e.var(0, 0, l);
  p.addConstraint("bad", e);
  EXPECT_THROW(compileFeasibility(p, SolveOptions{}), SymmetryError);
}

// Claims convergence at a point that violates the constraints and returns a
// matrix that certifies nothing.
class LyingBackend final : public Backend {
 public:
  std::string name() const override { return "liar"; }
  ConicSolution solve(const ConicProgram& prog,
                      const BackendSettings&) const override {
    ConicSolution s;
    s.converged = true;
    s.y = Vector::Constant(prog.numCoordinates(), 123.0);
    for (auto size : prog.blockSizes) s.x.push_back(Matrix::Identity(size, size));
    return s;
  }
};

TEST(FaultInjectionTest, NoFeasibleVerdictWithoutRecheck) {
  const LmiProblem p = interval(2.0, 3.0);
  const SolveOutcome out = solve(p, SolveOptions{}, LyingBackend{});
  EXPECT_NE(out.status, Status::Feasible);
  // The identity matrix gives a valid but useless upper bound, so no
  // infeasibility claim can be made either.
  EXPECT_EQ(out.status, Status::Undecided);
}

// Random LMIs sum_i y_i F_i + F_0 >= 0 with |y_i| <= 1.
LmiProblem randomLmi(std::mt19937_64& rng) {
  LmiProblem p;
  std::uniform_int_distribution<int> nv(1, 4), sz(2, 4);
  const int nvars = nv(rng);
  std::vector<VarHandle> vars;
  for (int i = 0; i < nvars; ++i) {
    vars.push_back(p.addScalar("y" + std::to_string(i), -1.0, 1.0));
  }
  const int ncons = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int c = 0; c < ncons; ++c) {
    const int n = sz(rng);
    AffineExpr e(n);
    const double shift = std::uniform_real_distribution<double>(-3.0, 1.0)(rng);
    e.constant(0, 0, testing::randSym(rng, n) + shift * Matrix::Identity(n, n));
    for (const VarHandle& v : vars) e.scalarTimes(0, 0, v, testing::randSym(rng, n));
    p.addConstraint("c" + std::to_string(c), e);
  }
  return p;
}

TEST(AdapterAgreementTest, GoldenSetVerdictsMatch) {
  std::mt19937_64 rng(99);
  int used = 0, feasible = 0, infeasible = 0;
  const auto ipm = makeBackend("ipm");
  const auto barrier = makeBackend("barrier");
  for (int attempt = 0; attempt < 400 && used < 20; ++attempt) {
    const LmiProblem p = randomLmi(rng);
    const SolveOutcome a = solve(p, SolveOptions{}, *ipm);
    if (std::abs(a.margin) < 1e-4 && a.status != Status::Infeasible) continue;
    if (a.status == Status::Infeasible && a.certificate->bound > -1e-4) continue;
    const SolveOutcome b = solve(p, SolveOptions{}, *barrier);
    ++used;
    EXPECT_EQ(a.status, b.status) << "attempt " << attempt << ": " << a.message
                                  << " / " << b.message;
    EXPECT_NE(a.status, Status::Undecided);
    if (a.status == Status::Feasible) {
      ++feasible;
      EXPECT_NEAR(a.margin, b.margin, 1e-6);
    } else {
      ++infeasible;
    }
  }
  EXPECT_EQ(used, 20);
  EXPECT_GT(feasible, 0);
  EXPECT_GT(infeasible, 0);
}

}  // namespace
}  // namespace dissynth::sdp
