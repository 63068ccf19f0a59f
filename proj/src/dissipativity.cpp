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

#include "dissipativity.hpp"

#include <string>

namespace dissynth::dissipativity {

namespace {

void checkQuadruple(const Matrix& a, const Matrix& b, const Matrix& c,
                    const Matrix& d) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || c.cols() != n ||
      d.rows() != c.rows() || d.cols() != b.cols()) {
    throw DimensionError("inconsistent quadruple: A " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", B " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ", C " +
                         std::to_string(c.rows()) + "x" +
                         std::to_string(c.cols()) + ", D " +
                         std::to_string(d.rows()) + "x" +
                         std::to_string(d.cols()));
  }
}

void checkSupply(const SupplyRate& supply, Eigen::Index in, Eigen::Index out) {
  if (supply.inDim != in || supply.outDim != out) {
    throw DimensionError("supply acts on " + std::to_string(supply.inDim) +
                         " inputs and " + std::to_string(supply.outDim) +
                         " outputs, system has " + std::to_string(in) +
                         " and " + std::to_string(out));
  }
}

// [0 I; C D] as a map from (x, u) to (u, y).
Matrix supplyFactor(const Matrix& c, const Matrix& d) {
  const auto n = c.cols();
  const auto m = d.cols();
  const auto p = c.rows();
  Matrix g = Matrix::Zero(m + p, n + m);
  g.block(0, n, m, m).setIdentity();
  g.block(m, 0, p, n) = c;
  g.block(m, n, p, m) = d;
  return g;
}

}  // namespace

SupplyRate passiveSupply(Eigen::Index d) {
  if (d < 1) throw ValidationError("passive supply needs d >= 1");
  Matrix s = Matrix::Zero(2 * d, 2 * d);
  s.topRightCorner(d, d).setIdentity();
  s.bottomLeftCorner(d, d).setIdentity();
  return {SymMatrix(s), d, d};
}

SupplyRate l2GainSupply(Eigen::Index d, Eigen::Index p, double gamma) {
  if (!(gamma > 0.0)) {
    throw ValidationError("l2-gain supply needs gamma > 0, got " +
                          std::to_string(gamma));
  }
  if (d < 1 || p < 1) throw ValidationError("l2-gain supply needs d, p >= 1");
  Matrix s = Matrix::Zero(d + p, d + p);
  s.topLeftCorner(d, d) = gamma * gamma * Matrix::Identity(d, d);
  s.bottomRightCorner(p, p) = -Matrix::Identity(p, p);
  return {SymMatrix(s), d, p};
}

StateStrictSupply stateStrictPassiveSupply(Eigen::Index n, Eigen::Index m,
                                           double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("state-strict supply needs epsilon > 0, got " +
                          std::to_string(epsilon));
  }
  if (n < 1 || m < 1) throw ValidationError("state-strict supply needs n, m >= 1");
  const auto k = 2 * m + n;
  Matrix s = Matrix::Zero(k, k);
  s.block(0, m + n, m, m).setIdentity();
  s.block(m + n, 0, m, m).setIdentity();
  s.block(m, m, n, n) = -epsilon * Matrix::Identity(n, n);
  return {{SymMatrix(s), m, n + m}, epsilon, n, m};
}

SupplyRate customSupply(const SymMatrix& s, Eigen::Index inDim) {
  if (inDim < 1 || inDim >= s.dim()) {
    throw ValidationError("custom supply: input dimension " +
                          std::to_string(inDim) + " does not fit S of size " +
                          std::to_string(s.dim()));
  }
  return {s, inDim, s.dim() - inDim};
}

bool hasSynthesisInertia(const SupplyRate& supply) {
  const Inertia in = matcore::inertia(supply.s);
  return in == Inertia{static_cast<int>(supply.outDim), 0, static_cast<int>(supply.inDim)};
}

void requireSynthesisInertia(const SupplyRate& supply) {
  if (!hasSynthesisInertia(supply)) {
    const Inertia in = matcore::inertia(supply.s);
    throw HypothesisError(
        "supply inertia",
        "S must have " + std::to_string(supply.outDim) + " negative, 0 zero and " +
            std::to_string(supply.inDim) + " positive eigenvalues; found (" +
            std::to_string(in.negCount) + ", " + std::to_string(in.zeroCount) +
            ", " + std::to_string(in.posCount) + ")");
  }
}

SymMatrix dissipationMatrix(const Matrix& a, const Matrix& b, const Matrix& c,
                            const Matrix& d, const SupplyRate& supply,
                            const SymMatrix& p) {
  checkQuadruple(a, b, c, d);
  checkSupply(supply, b.cols(), c.rows());
  const auto n = a.rows();
  const auto m = b.cols();
  if (p.dim() != n) throw DimensionError("P must be " + std::to_string(n) + "x" + std::to_string(n));
  Matrix ab(n, n + m);
  ab << a, b;
  Matrix out = -ab.transpose() * p.matrix() * ab;
  out.topLeftCorner(n, n) += p.matrix();
  const Matrix g = supplyFactor(c, d);
  out += g.transpose() * supply.s.matrix() * g;
  return SymMatrix::symmetrize(out);
}

AnalysisResult analyzeDissipativity(const Matrix& a, const Matrix& b,
                                    const Matrix& c, const Matrix& d,
                                    const SupplyRate& supply,
                                    const AnalysisOptions& opts) {
  checkQuadruple(a, b, c, d);
  checkSupply(supply, b.cols(), c.rows());
  const auto n = a.rows();
  const auto m = b.cols();

  sdp::LmiProblem prob;
  const sdp::VarHandle p = prob.addSymmetric("P", n);
  sdp::AffineExpr storage(n);
  storage.var(0, 0, p);
  if (opts.strictStorage) {
    storage.constant(0, 0, -opts.strictDelta * Matrix::Identity(n, n));
  }
  Matrix top = Matrix::Zero(n, n + m);
  top.leftCols(n).setIdentity();
  Matrix ab(n, n + m);
  ab << a, b;
  const Matrix g = supplyFactor(c, d);
  sdp::AffineExpr lmi(n + m);
  lmi.term(0, 0, top.transpose(), p, top)
      .term(0, 0, -ab.transpose(), p, ab)
      .constant(0, 0, g.transpose() * supply.s.matrix() * g);
  prob.addConstraint("storage", storage);
  prob.addConstraint("dissipation", lmi);

  const sdp::SolveOutcome out = sdp::solve(prob, opts.solve);
  AnalysisResult res;
  res.status = out.status;
  res.margin = out.margin;
  res.message = out.message;
  if (out.status == sdp::Status::Feasible) {
    res.p = SymMatrix::symmetrize(out.assignment[p]);
    res.recheckMinEig = out.recheckMinEig;
  }
  if (out.certificate) res.certificateBound = out.certificate->bound;
  return res;
}

SupplyRate dualize(const SupplyRate& supply) {
  const auto in = supply.inDim;
  const auto out = supply.outDim;
  if (matcore::numericalRank(supply.s.matrix()) != in + out) {
    throw ValidationError("dualize: S is singular");
  }
  const Matrix inv = supply.s.matrix().inverse();
  Matrix hat(out + in, out + in);
  hat.topLeftCorner(out, out) = -inv.bottomRightCorner(out, out);
  hat.topRightCorner(out, in) = inv.bottomLeftCorner(out, in);
  hat.bottomLeftCorner(in, out) = inv.topRightCorner(in, out);
  hat.bottomRightCorner(in, in) = -inv.topLeftCorner(in, in);
  return {SymMatrix::symmetrize(hat), out, in};
}

SupplyPencil dualStateStrictPencil(Eigen::Index n, Eigen::Index m) {
  const auto k = n + 2 * m;
  Matrix s0 = Matrix::Zero(k, k);
  s0.block(n, n + m, m, m).setIdentity();
  s0.block(n + m, n, m, m).setIdentity();
  Matrix s1 = Matrix::Zero(k, k);
  s1.topLeftCorner(n, n).setIdentity();
  return {SymMatrix(s0), SymMatrix(s1)};
}

SymMatrix dualDissipationMatrix(const Matrix& a, const Matrix& b,
                                const Matrix& c, const Matrix& d,
                                const SupplyRate& dual, const SymMatrix& q) {
  checkQuadruple(a, b, c, d);
  if (!matcore::isPd(q)) {
    throw ValidationError("dual dissipation matrix needs Q > 0");
  }
  // The dual system is (A', C', B', D').
  return dissipationMatrix(a.transpose(), c.transpose(), b.transpose(),
                           d.transpose(), dual, q);
}

}  // namespace dissynth::dissipativity
