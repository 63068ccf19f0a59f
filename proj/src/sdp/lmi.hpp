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

#include <optional>
#include <string>
#include <vector>

#include "../matcore.hpp"

namespace dissynth::sdp {

enum class VarKind { Symmetric, Rectangular, Scalar };

/// Handle to a decision variable of an LmiProblem. Carries the variable's
/// shape so expressions can be checked as they are built.
struct VarHandle {
  int id = -1;
  VarKind kind = VarKind::Scalar;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// Symmetric matrix expression, affine in the decision variables.
///
/// Blocks are addressed by their top-left corner. A placement off the
/// diagonal (row != col) also adds the transpose at the mirrored position; a
/// placement on the diagonal is added once and must itself be symmetric.
class AffineExpr {
 public:
  explicit AffineExpr(Eigen::Index dim);

  Eigen::Index dim() const { return constant_.rows(); }

  AffineExpr& constant(Eigen::Index row, Eigen::Index col, const Matrix& m);

  /// left * V * right (V^T when transposed) at block (row, col). For a
  /// scalar variable s the term is s * left * right.
  AffineExpr& term(Eigen::Index row, Eigen::Index col, const Matrix& left,
                   VarHandle v, const Matrix& right, bool transposed = false);

  AffineExpr& var(Eigen::Index row, Eigen::Index col, VarHandle v,
                  bool transposed = false);

  /// T + T^T with T = left * V * right, on the diagonal block at `at`.
  AffineExpr& termPlusTranspose(Eigen::Index at, const Matrix& left,
                                VarHandle v, const Matrix& right,
                                bool transposed = false);

  /// s * m at block (row, col) for a scalar variable s.
  AffineExpr& scalarTimes(Eigen::Index row, Eigen::Index col, VarHandle s,
                          const Matrix& m);

  /// Value of the expression for the given per-variable values (indexed by
  /// VarHandle::id).
  Matrix evaluate(const std::vector<Matrix>& values) const;

  /// Linear part applied to a single variable value, all other variables
  /// zero and no constant.
  Matrix evaluateLinear(int varId, const Matrix& value) const;

  const Matrix& constantPart() const { return constant_; }

 private:
  enum class Mode { Plain, PlusTranspose };
  struct Term {
    Eigen::Index row;
    Eigen::Index col;
    Matrix left;
    VarHandle var;
    Matrix right;
    bool transposed;
    Mode mode;
  };

  Matrix termValue(const Term& t, const Matrix& v) const;
  void place(Matrix& out, const Term& t, const Matrix& block) const;
  void checkFits(Eigen::Index row, Eigen::Index col, Eigen::Index rows,
                 Eigen::Index cols) const;

  Matrix constant_;
  std::vector<Term> terms_;
};

struct VariableInfo {
  std::string name;
  VarHandle handle;
  int offset = 0;  // first coordinate in the stacked decision vector
  int count = 0;   // number of coordinates
  std::optional<double> lower;  // scalars only
  std::optional<double> upper;
};

struct Constraint {
  std::string name;
  AffineExpr expr;
};

/// A semidefinite feasibility / optimisation problem: find variable values
/// such that every constraint expression is positive semidefinite,
/// optionally maximising a linear functional of the scalar variables.
///
/// Symmetric variables are vectorised over their upper triangle with
/// off-diagonal coordinates scaled by 1/sqrt(2), so the Euclidean inner
/// product of coordinates equals the Frobenius inner product of matrices.
class LmiProblem {
 public:
  VarHandle addSymmetric(std::string name, Eigen::Index n);
  VarHandle addRectangular(std::string name, Eigen::Index rows,
                           Eigen::Index cols);
  VarHandle addScalar(std::string name, std::optional<double> lower = {},
                      std::optional<double> upper = {});

  void addConstraint(std::string name, AffineExpr expr);

  /// Objective: maximise sum_i weight_i * s_i over scalar variables.
  void maximize(VarHandle scalar, double weight = 1.0);
  void minimize(VarHandle scalar, double weight = 1.0) {
    maximize(scalar, -weight);
  }
  bool hasObjective() const { return !objective_.empty(); }

  const std::vector<VariableInfo>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const std::vector<std::pair<int, double>>& objective() const {
    return objective_;
  }
  int numCoordinates() const { return numCoords_; }

  /// Basis matrix of a coordinate local to a variable.
  static Matrix basis(const VarHandle& v, int local);

  std::vector<Matrix> valuesFromCoordinates(const Vector& y) const;
  Vector coordinatesFromValues(const std::vector<Matrix>& values) const;

 private:
  VarHandle add(std::string name, VarKind kind, Eigen::Index rows,
                Eigen::Index cols, int count, std::optional<double> lower,
                std::optional<double> upper);

  std::vector<VariableInfo> vars_;
  std::vector<Constraint> cons_;
  std::vector<std::pair<int, double>> objective_;
  int numCoords_ = 0;
};

/// Variable values of a solved problem.
struct Assignment {
  std::vector<Matrix> values;

  const Matrix& operator[](const VarHandle& v) const { return values.at(v.id); }
  double scalar(const VarHandle& v) const { return values.at(v.id)(0, 0); }
};

}  // namespace dissynth::sdp
