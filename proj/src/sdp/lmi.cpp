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

#include "lmi.hpp"

#include <cmath>
#include <string>

namespace dissynth::sdp {

namespace {

Matrix varShape(const VarHandle& v) { return Matrix::Zero(v.rows, v.cols); }

}  // namespace

AffineExpr::AffineExpr(Eigen::Index dim) : constant_(Matrix::Zero(dim, dim)) {}

void AffineExpr::checkFits(Eigen::Index row, Eigen::Index col,
                           Eigen::Index rows, Eigen::Index cols) const {
  if (row < 0 || col < 0 || row + rows > dim() || col + cols > dim()) {
    throw DimensionError("block of size " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " at (" + std::to_string(row) +
                         ", " + std::to_string(col) +
                         ") does not fit an expression of size " +
                         std::to_string(dim()));
  }
}

AffineExpr& AffineExpr::constant(Eigen::Index row, Eigen::Index col,
                                 const Matrix& m) {
  checkFits(row, col, m.rows(), m.cols());
  constant_.block(row, col, m.rows(), m.cols()) += m;
  if (row != col) {
    checkFits(col, row, m.cols(), m.rows());
    constant_.block(col, row, m.cols(), m.rows()) += m.transpose();
  }
  return *this;
}

AffineExpr& AffineExpr::term(Eigen::Index row, Eigen::Index col,
                             const Matrix& left, VarHandle v,
                             const Matrix& right, bool transposed) {
  Term t{row, col, left, v, right, transposed, Mode::Plain};
  const Matrix probe = termValue(t, varShape(v));
  checkFits(row, col, probe.rows(), probe.cols());
  if (row != col) checkFits(col, row, probe.cols(), probe.rows());
  terms_.push_back(std::move(t));
  return *this;
}

AffineExpr& AffineExpr::var(Eigen::Index row, Eigen::Index col, VarHandle v,
                            bool transposed) {
  const Eigen::Index outRows = transposed ? v.cols : v.rows;
  const Eigen::Index outCols = transposed ? v.rows : v.cols;
  if (v.kind == VarKind::Scalar) {
    return term(row, col, Matrix::Identity(1, 1), v, Matrix::Identity(1, 1));
  }
  return term(row, col, Matrix::Identity(outRows, outRows), v,
              Matrix::Identity(outCols, outCols), transposed);
}

AffineExpr& AffineExpr::termPlusTranspose(Eigen::Index at, const Matrix& left,
                                          VarHandle v, const Matrix& right,
                                          bool transposed) {
  Term t{at, at, left, v, right, transposed, Mode::PlusTranspose};
  const Matrix probe = termValue(t, varShape(v));
  if (probe.rows() != probe.cols()) {
    throw DimensionError("termPlusTranspose needs a square term");
  }
  checkFits(at, at, probe.rows(), probe.cols());
  terms_.push_back(std::move(t));
  return *this;
}

AffineExpr& AffineExpr::scalarTimes(Eigen::Index row, Eigen::Index col,
                                    VarHandle s, const Matrix& m) {
  if (s.kind != VarKind::Scalar) {
    throw DimensionError("scalarTimes needs a scalar variable");
  }
  return term(row, col, m, s, Matrix::Identity(m.cols(), m.cols()));
}

Matrix AffineExpr::termValue(const Term& t, const Matrix& v) const {
  if (t.var.kind == VarKind::Scalar) {
    if (t.left.cols() != t.right.rows()) {
      throw DimensionError("scalar term factors do not conform");
    }
    return v(0, 0) * t.left * t.right;
  }
  const Matrix& vv = v;
  const Eigen::Index vr = t.transposed ? vv.cols() : vv.rows();
  const Eigen::Index vc = t.transposed ? vv.rows() : vv.cols();
  if (t.left.cols() != vr || t.right.rows() != vc) {
    throw DimensionError("term factors do not conform with variable of size " +
                         std::to_string(vv.rows()) + "x" +
                         std::to_string(vv.cols()));
  }
  if (t.transposed) return t.left * vv.transpose() * t.right;
  return t.left * vv * t.right;
}

void AffineExpr::place(Matrix& out, const Term& t, const Matrix& block) const {
  if (t.mode == Mode::PlusTranspose) {
    out.block(t.row, t.col, block.rows(), block.cols()) +=
        block + block.transpose();
    return;
  }
  out.block(t.row, t.col, block.rows(), block.cols()) += block;
  if (t.row != t.col) {
    out.block(t.col, t.row, block.cols(), block.rows()) += block.transpose();
  }
}

Matrix AffineExpr::evaluate(const std::vector<Matrix>& values) const {
  Matrix out = constant_;
  for (const Term& t : terms_) {
    place(out, t, termValue(t, values.at(t.var.id)));
  }
  return out;
}

Matrix AffineExpr::evaluateLinear(int varId, const Matrix& value) const {
  Matrix out = Matrix::Zero(dim(), dim());
  for (const Term& t : terms_) {
    if (t.var.id == varId) place(out, t, termValue(t, value));
  }
  return out;
}

VarHandle LmiProblem::add(std::string name, VarKind kind, Eigen::Index rows,
                          Eigen::Index cols, int count,
                          std::optional<double> lower,
                          std::optional<double> upper) {
  VarHandle h{static_cast<int>(vars_.size()), kind, rows, cols};
  vars_.push_back({std::move(name), h, numCoords_, count, lower, upper});
  numCoords_ += count;
  return h;
}

VarHandle LmiProblem::addSymmetric(std::string name, Eigen::Index n) {
  return add(std::move(name), VarKind::Symmetric, n, n,
             static_cast<int>(n * (n + 1) / 2), {}, {});
}

VarHandle LmiProblem::addRectangular(std::string name, Eigen::Index rows,
                                     Eigen::Index cols) {
  return add(std::move(name), VarKind::Rectangular, rows, cols,
             static_cast<int>(rows * cols), {}, {});
}

VarHandle LmiProblem::addScalar(std::string name, std::optional<double> lower,
                                std::optional<double> upper) {
  if (lower && upper && *lower > *upper) {
    throw ValidationError("scalar variable '" + name +
                          "' has lower bound above upper bound");
  }
  return add(std::move(name), VarKind::Scalar, 1, 1, 1, lower, upper);
}

void LmiProblem::addConstraint(std::string name, AffineExpr expr) {
  cons_.push_back({std::move(name), std::move(expr)});
}

void LmiProblem::maximize(VarHandle scalar, double weight) {
  if (scalar.kind != VarKind::Scalar) {
    throw ValidationError("objective terms must be scalar variables");
  }
  objective_.emplace_back(scalar.id, weight);
}

Matrix LmiProblem::basis(const VarHandle& v, int local) {
  Matrix e = Matrix::Zero(v.rows, v.cols);
  switch (v.kind) {
    case VarKind::Scalar:
      e(0, 0) = 1.0;
      break;
    case VarKind::Rectangular:
      e.data()[local] = 1.0;
      break;
    case VarKind::Symmetric: {
      // Upper triangle, column by column: (0,0), (0,1), (1,1), (0,2), ...
      Eigen::Index j = 0;
      int remaining = local;
      while (remaining > j) {
        remaining -= static_cast<int>(j + 1);
        ++j;
      }
      const Eigen::Index i = remaining;
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
      }
      break;
    }
  }
  return e;
}

std::vector<Matrix> LmiProblem::valuesFromCoordinates(const Vector& y) const {
  std::vector<Matrix> out;
  out.reserve(vars_.size());
  for (const VariableInfo& info : vars_) {
    Matrix v = Matrix::Zero(info.handle.rows, info.handle.cols);
    for (int k = 0; k < info.count; ++k) {
      v += y(info.offset + k) * basis(info.handle, k);
    }
    out.push_back(std::move(v));
  }
  return out;
}

Vector LmiProblem::coordinatesFromValues(
    const std::vector<Matrix>& values) const {
  Vector y(numCoords_);
  for (const VariableInfo& info : vars_) {
    for (int k = 0; k < info.count; ++k) {
      y(info.offset + k) =
          (basis(info.handle, k).cwiseProduct(values.at(info.handle.id)))
              .sum();
    }
  }
  return y;
}

}  // namespace dissynth::sdp
