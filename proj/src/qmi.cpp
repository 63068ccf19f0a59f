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

#include "qmi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace dissynth::qmi {

namespace {

double spectralNorm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::BDCSVD<Matrix>(a).singularValues()(0);
}

bool psdAtScale(const SymMatrix& a, double tol, double scale) {
  return a.dim() == 0 || matcore::minEigenvalue(a) >= -tol * scale;
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

}  // namespace

PiClassReport validatePiClass(const PartitionedForm& pi, double tol) {
  const double scale = matcore::scaleOf(pi.sym());
  const SymMatrix p22 = SymMatrix::symmetrize(pi.block22());
  const Vector ev22 = matcore::eigenvalues(p22);
  const double max22 = ev22.size() == 0 ? -1.0 : ev22.maxCoeff();

  PiClassReport rep;
  rep.pi22Nsd = max22 <= tol * scale;
  rep.pi22Nd = ev22.size() > 0 && max22 < -tol * scale;
  rep.schurPsd = psdAtScale(matcore::schurComplement(pi), tol, scale);
  rep.kernelOk = matcore::kernelContained(p22, pi.block12(), tol * scale);
  rep.inPiClass = rep.pi22Nsd && rep.schurPsd && rep.kernelOk;
  return rep;
}

SymMatrix qmiValue(const PartitionedForm& pi, const Matrix& z) {
  if (z.rows() != pi.r() || z.cols() != pi.q()) {
    throw DimensionError("Z must be " + std::to_string(pi.r()) + "x" +
                         std::to_string(pi.q()) + ", got " +
                         std::to_string(z.rows()) + "x" +
                         std::to_string(z.cols()));
  }
  const Matrix iz = stack(Matrix::Identity(pi.q(), pi.q()), z);
  return SymMatrix::symmetrize(iz.transpose() * pi.matrix() * iz);
}

double membershipScale(const PartitionedForm& pi, const Matrix& z) {
  const double zn = 1.0 + spectralNorm(z);
  return std::max(1.0, spectralNorm(pi.matrix()) * zn * zn);
}

bool zMembership(const PartitionedForm& pi, const Matrix& z, double tol) {
  return psdAtScale(qmiValue(pi, z), tol, membershipScale(pi, z));
}

bool isBounded(const PartitionedForm& pi, double tol) {
  const PiClassReport rep = validatePiClass(pi, tol);
  if (!rep.inPiClass) {
    throw HypothesisError("Pi-class",
                          "boundedness is only characterised for forms in the "
                          "Pi-class");
  }
  return rep.pi22Nd;
}

PartitionedForm transformW(const PartitionedForm& pi, const Matrix& w) {
  if (w.rows() != pi.q()) {
    throw DimensionError("transformW: W must have " + std::to_string(pi.q()) +
                         " rows, got " + std::to_string(w.rows()));
  }
  const bool fullColumnRank = matcore::numericalRank(w) == w.cols();
  const bool pi22Nonsingular =
      matcore::numericalRank(pi.block22()) == pi.r();
  if (!fullColumnRank && !pi22Nonsingular) {
    throw HypothesisError(
        "projection",
        "W does not have full column rank and Pi22 is singular");
  }
  const Matrix t = matcore::blockDiag(w, Matrix::Identity(pi.r(), pi.r()));
  return PartitionedForm(
      SymMatrix::symmetrize(t.transpose() * pi.matrix() * t), w.cols(),
      pi.r());
}

Matrix center(const PartitionedForm& pi) {
  const Matrix p22 = pi.block22();
  return -p22.ldlt().solve(pi.block21());
}

std::vector<Matrix> sampleZ(const PartitionedForm& pi, int count,
                            std::uint64_t seed, int boundaryCount) {
  std::vector<Matrix> out;
  if (count <= 0) return out;
  const PiClassReport rep = validatePiClass(pi);
  if (!rep.inPiClass || !rep.pi22Nd) {
    throw HypothesisError("bounded Pi-class",
                          "sampling needs Pi in the Pi-class with Pi22 < 0");
  }
  const Matrix zc = center(pi);
  out.push_back(zc);

  const SymMatrix schur = matcore::schurComplement(pi);
  const double scale = matcore::scaleOf(pi.sym());
  if (matcore::maxEigenvalue(schur) <= matcore::kZeroTol * scale) {
    return out;
  }
  const Matrix left =
      matcore::pdInvSqrt(SymMatrix::symmetrize(-pi.block22()));
  const Matrix right = matcore::psdSqrt(schur);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto r = pi.r();
  const auto q = pi.q();
  for (int k = 1; k < count; ++k) {
    Matrix v(r, q);
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = gauss(rng);
    const double norm = spectralNorm(v);
    if (norm == 0.0) continue;
    const double target = k <= boundaryCount ? 1.0 : unit(rng);
    v *= target / norm;
    out.push_back(zc + left * v * right);
  }
  return out;
}

SlemmaOutcome slemma(const PartitionedForm& m, const PartitionedForm& n,
                     const SlemmaOptions& opts) {
  if (m.q() != n.q() || m.r() != n.r()) {
    throw DimensionError("slemma: M and N must share the same split");
  }
  const PiClassReport rep = validatePiClass(n);
  if (!rep.inPiClass) {
    throw HypothesisError("Pi-class", "N is not in the Pi-class");
  }
  const double nScaleEig = matcore::scaleOf(n.sym());
  if (matcore::maxEigenvalue(n.sym()) <= matcore::kZeroTol * nScaleEig) {
    throw HypothesisError("positive eigenvalue",
                          "N has no positive eigenvalue");
  }

  const double mMax = m.matrix().cwiseAbs().maxCoeff();
  const double nMax = n.matrix().cwiseAbs().maxCoeff();
  const double mScale = mMax > 0.0 ? mMax : 1.0;
  const Matrix mn = m.matrix() / mScale;
  const Matrix nn = n.matrix() / nMax;
  auto g = [&](double a) {
    return matcore::minEigenvalue(SymMatrix::symmetrize(mn - a * nn));
  };

  double lo = 0.0;
  double hi = opts.alphaMax;
  for (int i = 0; i < opts.maxExpansions; ++i) {
    if (g(hi) <= g(hi * (1.0 - 1e-6))) break;
    lo = hi * 0.5;
    hi *= 2.0;
  }

  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - invPhi * (b - a);
  double d = a + invPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < opts.maxIterations; ++it) {
    if (b - a <= 1e-15 * std::max(1.0, std::abs(b))) break;
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invPhi * (b - a);
      gd = g(d);
    }
  }

  double bestAlpha = gc >= gd ? c : d;
  double bestValue = std::max(gc, gd);
  for (double cand : {0.0, lo, hi, 0.5 * (a + b)}) {
    const double v = g(cand);
    if (v > bestValue) {
      bestValue = v;
      bestAlpha = cand;
    }
  }

  SlemmaOutcome out;
  out.best.alpha = bestAlpha * mScale / nMax;
  out.best.residualMinEig = bestValue;
  out.feasible = bestValue >= -opts.psdTol;
  return out;
}

}  // namespace dissynth::qmi
