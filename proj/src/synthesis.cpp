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

#include "synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmi.hpp"

namespace dissynth::synthesis {

namespace {

using datamodel::ExperimentData;
using dissipativity::SupplyRate;

double maxAbs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double spectral(const Matrix& m) {
  return m.size() == 0 ? 0.0 : Eigen::BDCSVD<Matrix>(m).singularValues()(0);
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

// The problem as seen by the LMIs: for state-strict passivity the output is
// z = (x, y) and the supply depends on eta = 1 / epsilon.
struct Setup {
  Eigen::Index n = 0, m = 0, d = 0, p = 0;
  bool strict = false;
  StateStrictSpec strictSpec;
  std::optional<SupplyRate> fixed;
  SymMatrix s0, s1;
  Matrix e, fz;
  std::optional<Matrix> cz, dz;
  ExperimentData data;
};

Matrix augmentC(const Matrix& c) {
  return vstack(Matrix::Identity(c.cols(), c.cols()), c);
}
Matrix augmentD(const Matrix& d, Eigen::Index n) {
  return vstack(Matrix::Zero(n, d.cols()), d);
}

Setup makeSetup(const SynthesisProblem& prob, Diagnostics& diag) {
  prob.data.validate();
  Setup s;
  s.n = prob.data.n();
  s.m = prob.data.m();
  s.d = prob.e.cols();
  s.data = prob.data;
  s.e = prob.e;
  if (prob.e.rows() != s.n) {
    throw DimensionError("E must have " + std::to_string(s.n) + " rows");
  }
  if (prob.f.cols() != s.d) {
    throw DimensionError("F must have " + std::to_string(s.d) + " columns");
  }
  const auto py = prob.f.rows();
  if (prob.outputs) {
    const KnownOutputs& o = *prob.outputs;
    if (o.cs.rows() != py || o.cs.cols() != s.n || o.ds.rows() != py ||
        o.ds.cols() != s.m) {
      throw DimensionError("C_s must be " + std::to_string(py) + "x" +
                           std::to_string(s.n) + " and D_s " +
                           std::to_string(py) + "x" + std::to_string(s.m));
    }
  } else {
    if (!prob.data.yMinus) {
      throw ValidationError("unknown-output synthesis needs Y_minus");
    }
    if (prob.data.yMinus->rows() != py) {
      throw DimensionError("Y_minus must have " + std::to_string(py) + " rows");
    }
  }

  if (const auto* spec = std::get_if<StateStrictSpec>(&prob.supply)) {
    if (py != s.d) {
      throw ValidationError(
          "state-strict passivity needs as many outputs as noise inputs");
    }
    if (!(spec->epsilonMin > 0.0) || !(spec->epsilonMax >= spec->epsilonMin)) {
      throw ValidationError("state-strict passivity needs 0 < epsilonMin <= epsilonMax");
    }
    s.strict = true;
    s.strictSpec = *spec;
    s.p = s.n + py;
    const dissipativity::SupplyPencil pen =
        dissipativity::dualStateStrictPencil(s.n, s.d);
    s.s0 = pen.constant;
    s.s1 = pen.slope;
    s.fz = vstack(Matrix::Zero(s.n, s.d), prob.f);
    if (prob.outputs) {
      s.cz = augmentC(prob.outputs->cs);
      s.dz = augmentD(prob.outputs->ds, s.n);
    } else {
      s.data.yMinus = vstack(prob.data.xMinus(), *prob.data.yMinus);
    }
    diag.supplyInertia = true;
  } else {
    const SupplyRate& sr = std::get<SupplyRate>(prob.supply);
    if (sr.inDim != s.d || sr.outDim != py) {
      throw DimensionError("supply acts on " + std::to_string(sr.inDim) +
                           " inputs and " + std::to_string(sr.outDim) +
                           " outputs, expected " + std::to_string(s.d) +
                           " and " + std::to_string(py));
    }
    diag.supplyInertia = dissipativity::hasSynthesisInertia(sr);
    dissipativity::requireSynthesisInertia(sr);
    s.fixed = sr;
    s.p = py;
    s.s0 = dissipativity::dualize(sr).s;
    s.s1 = SymMatrix::zero(s.s0.dim());
    s.fz = prob.f;
    if (prob.outputs) {
      s.cz = prob.outputs->cs;
      s.dz = prob.outputs->ds;
    }
  }
  return s;
}

SupplyRate supplyAt(const Setup& s, std::optional<double> epsilon) {
  if (s.strict) {
    return dissipativity::stateStrictPassiveSupply(s.n, s.d, *epsilon).base;
  }
  return *s.fixed;
}

void requirePiClass(const PartitionedForm& nbar, Diagnostics& diag) {
  const qmi::PiClassReport rep = qmi::validatePiClass(nbar);
  diag.piClass = rep.inPiClass;
  if (!rep.inPiClass) {
    throw HypothesisError("Pi-class",
                          "the consistency form fails the Pi-class check "
                          "(Pi22 <= 0: " + std::string(rep.pi22Nsd ? "yes" : "no") +
                          ", Schur complement >= 0: " +
                          std::string(rep.schurPsd ? "yes" : "no") +
                          ", kernel inclusion: " +
                          std::string(rep.kernelOk ? "yes" : "no") + ")");
  }
}

// [0 I; E' F'] mapping (x, z) to the dual supply arguments.
Matrix supplyFactor(const Setup& s) {
  Matrix g = Matrix::Zero(s.p + s.d, s.n + s.p);
  g.block(0, s.n, s.p, s.p).setIdentity();
  g.block(s.p, 0, s.d, s.n) = s.e.transpose();
  g.block(s.p, s.n, s.d, s.p) = s.fz.transpose();
  return g;
}

SymMatrix dualSupplyAt(const Setup& s, std::optional<double> epsilon) {
  return dissipativity::dualize(supplyAt(s, epsilon)).s;
}

SymMatrix rebuiltHatM(const Setup& s, const SymMatrix& q, const Matrix& l,
                      const SymMatrix& sHat) {
  if (s.cz) {
    return datamodel::buildHatMk(q, l, *s.cz, *s.dz, s.e, s.fz, sHat);
  }
  return datamodel::buildHatMu(q, l, s.e, s.fz, sHat);
}

SymMatrix hatN(const Setup& s, const datamodel::NoiseModel& noise) {
  if (s.cz) return datamodel::buildHatNk(s.data, s.e, noise, s.p);
  return datamodel::buildHatNu(s.data, s.e, s.fz, noise);
}

double liftedMinEig(const Setup& s, const SymMatrix& q, const Matrix& l,
                    double alpha, std::optional<double> epsilon,
                    const SymMatrix& nHat) {
  const SymMatrix mHat = rebuiltHatM(s, q, l, dualSupplyAt(s, epsilon));
  const double scale = std::max(
      {1.0, maxAbs(mHat.matrix()), alpha * maxAbs(nHat.matrix())});
  const Matrix diff = mHat.matrix() - alpha * nHat.matrix();
  return matcore::minEigenvalue(SymMatrix::symmetrize(diff)) / scale;
}

// Solves M-hat - alpha N-hat >= 0 over (Q, L, alpha[, eta]).
SynthesisResult solveLifted(const Setup& s, const SymMatrix& nHat,
                            const SynthesisOptions& opts, Branch branch) {
  const auto n = s.n, m = s.m, p = s.p;
  const double nMax = maxAbs(nHat.matrix());
  const Matrix nNorm = nHat.matrix() / nMax;

  sdp::LmiProblem lp;
  const sdp::VarHandle q = lp.addSymmetric("Q", n);
  const sdp::VarHandle l = lp.addRectangular("L", m, n);
  const sdp::VarHandle alpha = lp.addScalar("alpha", 0.0);
  std::optional<sdp::VarHandle> eta;
  if (s.strict) {
    eta = lp.addScalar("eta", 1.0 / s.strictSpec.epsilonMax,
                       1.0 / s.strictSpec.epsilonMin);
    if (s.strictSpec.maximizeEpsilon) lp.minimize(*eta);
  }

  sdp::AffineExpr qpos(n);
  qpos.var(0, 0, q).constant(0, 0, -opts.delta * Matrix::Identity(n, n));
  lp.addConstraint("Q", qpos);

  const auto c2 = n + p;
  const auto c3 = 2 * n + p + m;
  const Matrix g = supplyFactor(s);
  sdp::AffineExpr main(3 * n + p + m);
  main.var(0, 0, q)
      .constant(0, 0, g.transpose() * s.s0.matrix() * g)
      .var(c2, c3, q)
      .var(c2 + n, c3, l)
      .var(c3, c3, q)
      .scalarTimes(0, 0, alpha, -nNorm);
  if (eta) main.scalarTimes(0, 0, *eta, g.transpose() * s.s1.matrix() * g);
  if (s.cz) {
    const Matrix& cz = *s.cz;
    const Matrix& dz = *s.dz;
    main.term(n, n, -cz, q, cz.transpose())
        .termPlusTranspose(n, -dz, l, cz.transpose())
        .term(n, c2, -cz, q, Matrix::Identity(n, n))
        .term(n, c2 + n, -cz, l, Matrix::Identity(m, m), true)
        .term(n, c3, dz, l, Matrix::Identity(n, n));
  }
  lp.addConstraint("dissipation", main);

  const sdp::SolveOutcome out = sdp::solve(lp, opts.solve);
  SynthesisResult res;
  res.status = out.status;
  res.feasibilityMargin = out.margin;
  res.message = out.message;
  if (out.certificate) res.certificateBound = out.certificate->bound;
  if (out.status != sdp::Status::Feasible) return res;

  const SymMatrix qv = SymMatrix::symmetrize(out.assignment[q]);
  const Matrix lv = out.assignment[l];
  const Eigen::LLT<Matrix> llt(qv.matrix());
  if (llt.info() != Eigen::Success) {
    res.status = sdp::Status::Undecided;
    res.message = "returned Q is not positive definite";
    return res;
  }
  res.branch = branch;
  res.alpha = out.assignment.scalar(alpha) / nMax;
  if (eta) res.epsilon = 1.0 / out.assignment.scalar(*eta);
  res.k = llt.solve(lv.transpose()).transpose();
  res.p = SymMatrix::symmetrize(llt.solve(Matrix::Identity(n, n)));

  // Independent recheck from (P, K) alone: Q = P^-1, L = K Q.
  const SymMatrix qr = SymMatrix::symmetrize(res.p.matrix().inverse());
  res.recheckMinEig =
      liftedMinEig(s, qr, res.k * qr.matrix(), res.alpha, res.epsilon, nHat);
  if (res.recheckMinEig < -opts.recheckTol) {
    res.status = sdp::Status::Undecided;
    res.branch.reset();
    res.message = "rebuilt LMI fails the recheck (lambda_min " +
                  std::to_string(res.recheckMinEig) + ")";
  }
  return res;
}

}  // namespace

const char* toString(Branch b) {
  switch (b) {
    case Branch::UnknownOutput:
      return "unknownOutput";
    case Branch::KnownOutputStrict:
      return "knownOutputStrict";
    case Branch::KnownOutputDegenerate:
      return "knownOutputDegenerate";
  }
  return "?";
}

SynthesisResult synthesizeUnknownOutput(const SynthesisProblem& prob,
                                        const SynthesisOptions& opts) {
  if (prob.outputs) {
    throw ValidationError("unknown-output synthesis called with known outputs");
  }
  Diagnostics diag;
  const Setup s = makeSetup(prob, diag);
  diag.rank = datamodel::checkRank(s.data);
  const SymMatrix nHat = hatN(s, prob.noise);
  diag.positiveEigenvalue = datamodel::checkPositiveEigenvalue(nHat);
  if (!*diag.positiveEigenvalue) {
    throw HypothesisError("positive eigenvalue",
                          "N-hat_u has no positive eigenvalue");
  }
  const PartitionedForm nu = datamodel::buildNu(s.data, s.e, s.fz, prob.noise);
  requirePiClass(nu, diag);
  diag.interiorSufficient = datamodel::checkInteriorSufficient(nu);

  SynthesisResult res = solveLifted(s, nHat, opts, Branch::UnknownOutput);
  res.diagnostics = diag;
  return res;
}

SynthesisResult synthesizeKnownOutput(const SynthesisProblem& prob,
                                      const SynthesisOptions& opts) {
  if (!prob.outputs) {
    throw ValidationError("known-output synthesis needs C_s and D_s");
  }
  Diagnostics diag;
  const Setup s = makeSetup(prob, diag);
  diag.rank = datamodel::checkRank(s.data);
  if (!*diag.rank) {
    throw HypothesisError("rank", "[X-; U-] does not have full row rank " +
                                      std::to_string(s.n + s.m));
  }
  const SymMatrix nHat = hatN(s, prob.noise);
  diag.positiveEigenvalue = datamodel::checkPositiveEigenvalue(nHat);
  if (!*diag.positiveEigenvalue) {
    throw HypothesisError("positive eigenvalue",
                          "N-hat_k has no positive eigenvalue");
  }
  requirePiClass(datamodel::buildBarNk(s.data, s.e, prob.noise, s.p), diag);
  diag.interiorSufficient = datamodel::checkInteriorSufficient(
      datamodel::buildNk(s.data, s.e, prob.noise));

  SynthesisResult res = solveLifted(s, nHat, opts, Branch::KnownOutputStrict);
  res.diagnostics = diag;
  if (res.status == sdp::Status::Feasible) return res;

  // Degenerate branch: C + D K = 0 and [I; F]' S [I; F] >= 0 with P = 0.
  const Matrix& cz = *s.cz;
  const Matrix& dz = *s.dz;
  Matrix dc(dz.rows(), dz.cols() + cz.cols());
  dc << dz, cz;
  const bool imageOk =
      matcore::numericalRank(dc) == matcore::numericalRank(dz);
  if (!imageOk) return res;
  const SupplyRate sr = supplyAt(s, s.strict ? std::optional<double>(s.strictSpec.epsilonMin)
                                             : std::nullopt);
  const Matrix iF = vstack(Matrix::Identity(s.d, s.d), s.fz);
  const SymMatrix outer =
      SymMatrix::symmetrize(iF.transpose() * sr.s.matrix() * iF);
  if (!matcore::isPsd(outer)) return res;

  const Matrix k = -matcore::pseudoInverse(dz) * cz;
  const double resid = spectral(cz + dz * k);
  if (resid > 1e-9 * (1.0 + spectral(cz))) {
    res.message = "degenerate branch: C + D K residual " + std::to_string(resid);
    return res;
  }
  SynthesisResult deg;
  deg.status = sdp::Status::Feasible;
  deg.branch = Branch::KnownOutputDegenerate;
  deg.k = k;
  deg.p = SymMatrix::zero(s.n);
  deg.recheckMinEig = matcore::minEigenvalue(outer) /
                      std::max(1.0, matcore::scaleOf(outer));
  deg.diagnostics = diag;
  deg.notes.push_back(std::string("strict branch ") +
                      sdp::toString(res.status) + ": " + res.message);
  return deg;
}

SynthesisResult synthesize(const SynthesisProblem& prob,
                           const SynthesisOptions& opts) {
  return prob.outputs ? synthesizeKnownOutput(prob, opts)
                      : synthesizeUnknownOutput(prob, opts);
}

double roundTripMinEig(const SynthesisProblem& prob,
                       const SynthesisResult& result) {
  Diagnostics diag;
  const Setup s = makeSetup(prob, diag);
  const SymMatrix q = SymMatrix::symmetrize(result.p.matrix().inverse());
  return liftedMinEig(s, q, result.k * q.matrix(), result.alpha,
                      result.epsilon, hatN(s, prob.noise));
}

double closedLoopMinEig(const SynthesisResult& result,
                        const SynthesisProblem& prob,
                        const datamodel::PlantModel& plant) {
  Diagnostics diag;
  const Setup s = makeSetup(prob, diag);
  const SupplyRate sr = supplyAt(s, result.epsilon);
  Matrix c = plant.c, d = plant.d, f = plant.f;
  if (s.strict) {
    c = augmentC(plant.c);
    d = augmentD(plant.d, s.n);
    f = vstack(Matrix::Zero(s.n, s.d), plant.f);
  }
  const Matrix acl = plant.a + plant.b * result.k;
  const Matrix ccl = c + d * result.k;
  const SymMatrix dm = dissipativity::dissipationMatrix(acl, plant.e, ccl, f,
                                                        sr, result.p);
  const double left = 1.0 + spectral(acl) + spectral(plant.e);
  const double right = 1.0 + spectral(ccl) + spectral(f);
  const double scale =
      std::max(1.0, spectral(result.p.matrix()) * left * left +
                        spectral(sr.s.matrix()) * right * right);
  return matcore::minEigenvalue(dm) / scale;
}

VerificationReport verifyClosedLoop(const SynthesisResult& result,
                                    const SynthesisProblem& prob,
                                    int sampleCount, std::uint64_t seed,
                                    double tol) {
  VerificationReport rep;
  const int boundary = std::min(10, std::max(0, sampleCount - 1));
  std::vector<datamodel::PlantModel> plants;
  if (prob.outputs) {
    plants = datamodel::sampleConsistentKnown(
        prob.data, prob.e, prob.f, prob.outputs->cs, prob.outputs->ds,
        prob.noise, sampleCount, seed, boundary);
  } else {
    plants = datamodel::sampleConsistentUnknown(prob.data, prob.e, prob.f,
                                                prob.noise, sampleCount, seed,
                                                boundary);
  }
  rep.samples = static_cast<int>(plants.size());
  rep.minEig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < plants.size(); ++i) {
    const double v = closedLoopMinEig(result, prob, plants[i]);
    if (v < rep.minEig) {
      rep.minEig = v;
      rep.worstSample = static_cast<int>(i);
    }
  }
  rep.pass = rep.samples > 0 && rep.minEig >= -tol;
  return rep;
}

}  // namespace dissynth::synthesis
