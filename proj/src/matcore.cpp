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

#include "matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dissynth {

SymMatrix::SymMatrix(const Matrix& a, double symTol) {
  if (a.rows() != a.cols()) {
    throw DimensionError("symmetric matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  const double maxAbs = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double asym =
      a.size() == 0 ? 0.0 : (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > symTol * (1.0 + maxAbs)) {
    throw SymmetryError("matrix is not symmetric (max |A_ij - A_ji| = " +
                        std::to_string(asym) + ")");
  }
  m_ = 0.5 * (a + a.transpose());
}

SymMatrix::SymMatrix(const Matrix& a, Unchecked)
    : m_(0.5 * (a + a.transpose())) {}

SymMatrix SymMatrix::symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("cannot symmetrize a non-square matrix");
  }
  return SymMatrix(a, Unchecked{});
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Matrix::Identity(n, n), Unchecked{});
}

SymMatrix SymMatrix::zero(Eigen::Index n) {
  return SymMatrix(Matrix::Zero(n, n), Unchecked{});
}

PartitionedForm::PartitionedForm(SymMatrix matrix, Eigen::Index q,
                                 Eigen::Index r)
    : matrix_(std::move(matrix)), q_(q), r_(r) {
  if (q < 0 || r < 0 || matrix_.dim() != q + r) {
    throw DimensionError("partitioned form of size " +
                         std::to_string(matrix_.dim()) +
                         " does not match split (" + std::to_string(q) + ", " +
                         std::to_string(r) + ")");
  }
}

namespace matcore {

namespace {

Vector singularValues(const Matrix& a) {
  if (a.size() == 0) return Vector();
  return Eigen::BDCSVD<Matrix>(a).singularValues();
}

}  // namespace

Vector eigenvalues(const SymMatrix& a) {
  if (a.dim() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double minEigenvalue(const SymMatrix& a) {
  const Vector ev = eigenvalues(a);
  return ev.size() == 0 ? 0.0 : ev.minCoeff();
}

double maxEigenvalue(const SymMatrix& a) {
  const Vector ev = eigenvalues(a);
  return ev.size() == 0 ? 0.0 : ev.maxCoeff();
}

double scaleOf(const SymMatrix& a) {
  const Vector ev = eigenvalues(a);
  const double radius = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  return std::max(1.0, radius);
}

Inertia inertia(const SymMatrix& a, double zeroTol) {
  const Vector ev = eigenvalues(a);
  const double s =
      std::max(1.0, ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff());
  Inertia in;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -zeroTol * s) {
      ++in.negCount;
    } else if (ev(i) > zeroTol * s) {
      ++in.posCount;
    } else {
      ++in.zeroCount;
    }
  }
  return in;
}

bool isPsd(const SymMatrix& a, double tol) {
  const Vector ev = eigenvalues(a);
  if (ev.size() == 0) return true;
  const double s = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() >= -tol * s;
}

bool isPd(const SymMatrix& a, double tol) {
  const Vector ev = eigenvalues(a);
  if (ev.size() == 0) return true;
  const double s = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() > tol * s;
}

bool isNsd(const SymMatrix& a, double tol) {
  return isPsd(SymMatrix::symmetrize(-a.matrix()), tol);
}

bool isNd(const SymMatrix& a, double tol) {
  return isPd(SymMatrix::symmetrize(-a.matrix()), tol);
}

Matrix pseudoInverse(const Matrix& a, double rankTol) {
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  if (a.size() == 0) return out;
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = rankTol * (s.size() > 0 ? s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      out += svd.matrixV().col(i) * (1.0 / s(i)) *
             svd.matrixU().col(i).transpose();
    }
  }
  return out;
}

int numericalRank(const Matrix& a, double rankTol) {
  const Vector s = singularValues(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rankTol * s(0)) ++rank;
  }
  return rank;
}

Matrix kernelBasis(const Matrix& a, double rankTol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  int rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > rankTol * s(0)) ++rank;
    }
  }
  return svd.matrixV().rightCols(n - rank);
}

SymMatrix schurComplement(const PartitionedForm& pi) {
  const Matrix p12 = pi.block12();
  return SymMatrix::symmetrize(pi.block11() -
                               p12 * pseudoInverse(pi.block22()) *
                                   p12.transpose());
}

bool kernelContained(const SymMatrix& pi22, const Matrix& pi12, double tol) {
  if (pi12.cols() != pi22.dim()) {
    throw DimensionError("kernelContained: Pi12 has " +
                         std::to_string(pi12.cols()) +
                         " columns but Pi22 is " + std::to_string(pi22.dim()) +
                         "x" + std::to_string(pi22.dim()));
  }
  const Matrix basis = kernelBasis(pi22.matrix());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    if ((pi12 * basis.col(j)).norm() > tol) return false;
  }
  return true;
}

bool inertiaLowerBound(const SymMatrix& h, const Matrix& m, double tol) {
  if (m.rows() != h.dim()) {
    throw DimensionError("inertiaLowerBound: M must have " +
                         std::to_string(h.dim()) + " rows");
  }
  const auto n = static_cast<int>(h.dim());
  const auto cols = static_cast<int>(m.cols());
  const int nu = inertia(h, tol).negCount;
  const int nuHat =
      inertia(SymMatrix::symmetrize(m.transpose() * h.matrix() * m), tol)
          .negCount;
  const int kernelDim = cols - numericalRank(m);
  return nu + (cols - n) - kernelDim <= nuHat;
}

Matrix psdSqrt(const SymMatrix& a) {
  if (a.dim() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  const Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix pdInvSqrt(const SymMatrix& a) {
  if (a.dim() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error("pdInvSqrt: matrix is not positive definite");
  }
  const Vector d = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix blockDiag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace matcore
}  // namespace dissynth
