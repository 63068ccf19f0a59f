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

#pragma once

#include <Eigen/Dense>

#include "errors.hpp"

namespace dissynth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix.
///
/// Construction from an arbitrary matrix checks symmetry against
/// symTol * (1 + max|A_ij|) and stores (A + A^T) / 2; anything further from
/// symmetric raises SymmetryError. Results of arithmetic that are symmetric
/// by construction go through symmetrize(), which skips the check.
class SymMatrix {
 public:
  static constexpr double kDefaultSymTol = 1e-9;

  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a, double symTol = kDefaultSymTol);

  static SymMatrix symmetrize(const Matrix& a);
  static SymMatrix identity(Eigen::Index n);
  static SymMatrix zero(Eigen::Index n);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  struct Unchecked {};
  SymMatrix(const Matrix& a, Unchecked);

  Matrix m_;
};

/// Counts of negative, zero and positive eigenvalues.
struct Inertia {
  int negCount = 0;
  int zeroCount = 0;
  int posCount = 0;

  int dim() const { return negCount + zeroCount + posCount; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// A symmetric (q+r)x(q+r) matrix with a declared block split
///
///     [ P11  P12 ]
///     [ P21  P22 ]   with P11 q x q and P22 r x r.
class PartitionedForm {
 public:
  PartitionedForm() = default;
  PartitionedForm(SymMatrix matrix, Eigen::Index q, Eigen::Index r);
  PartitionedForm(const Matrix& matrix, Eigen::Index q, Eigen::Index r)
      : PartitionedForm(SymMatrix(matrix), q, r) {}

  const SymMatrix& sym() const { return matrix_; }
  const Matrix& matrix() const { return matrix_.matrix(); }
  Eigen::Index q() const { return q_; }
  Eigen::Index r() const { return r_; }

  Matrix block11() const { return matrix().topLeftCorner(q_, q_); }
  Matrix block12() const { return matrix().topRightCorner(q_, r_); }
  Matrix block21() const { return matrix().bottomLeftCorner(r_, q_); }
  Matrix block22() const { return matrix().bottomRightCorner(r_, r_); }

 private:
  SymMatrix matrix_;
  Eigen::Index q_ = 0;
  Eigen::Index r_ = 0;
};

namespace matcore {

inline constexpr double kZeroTol = 1e-9;
inline constexpr double kRankTol = 1e-10;

/// max(1, spectral norm) of a symmetric matrix; the scale used by the
/// tolerance-relative tests below.
double scaleOf(const SymMatrix& a);

Vector eigenvalues(const SymMatrix& a);
double minEigenvalue(const SymMatrix& a);
double maxEigenvalue(const SymMatrix& a);

/// Eigenvalues below -zeroTol*s are negative, above +zeroTol*s positive, the
/// rest zero, where s = max(1, spectral radius).
Inertia inertia(const SymMatrix& a, double zeroTol = kZeroTol);

bool isPsd(const SymMatrix& a, double tol = kZeroTol);
bool isPd(const SymMatrix& a, double tol = kZeroTol);
bool isNsd(const SymMatrix& a, double tol = kZeroTol);
bool isNd(const SymMatrix& a, double tol = kZeroTol);

/// Moore-Penrose pseudo-inverse. Singular values below rankTol * sigma_max
/// are treated as zero.
Matrix pseudoInverse(const Matrix& a, double rankTol = kRankTol);

int numericalRank(const Matrix& a, double rankTol = kRankTol);

/// Orthonormal basis (as columns) of ker(a), decided by the same cutoff.
Matrix kernelBasis(const Matrix& a, double rankTol = kRankTol);

/// Generalised Schur complement P11 - P12 P22^+ P21.
SymMatrix schurComplement(const PartitionedForm& pi);

/// ker(pi22) is contained in ker(pi12): every unit kernel vector v of pi22
/// has |pi12 v| <= tol.
bool kernelContained(const SymMatrix& pi22, const Matrix& pi12, double tol);

/// Checks nu + (m - n) - dim ker M <= nu_hat, where nu and nu_hat count the
/// negative eigenvalues of H and M^T H M. This is a theorem; a false return
/// points at a tolerance problem.
bool inertiaLowerBound(const SymMatrix& h, const Matrix& m,
                       double tol = kZeroTol);

/// Symmetric PSD square root with tiny negative eigenvalues clamped to zero.
Matrix psdSqrt(const SymMatrix& a);

/// Inverse square root of a positive definite matrix.
Matrix pdInvSqrt(const SymMatrix& a);

/// Block-diagonal assembly of two matrices.
Matrix blockDiag(const Matrix& a, const Matrix& b);

}  // namespace matcore
}  // namespace dissynth
