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

#include "solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dissynth::sdp {

namespace {

struct Box {
  double lo;
  double hi;
};

std::vector<Box> coordinateBoxes(const LmiProblem& problem, double bound) {
  std::vector<Box> boxes(problem.numCoordinates());
  for (const VariableInfo& info : problem.variables()) {
    for (int k = 0; k < info.count; ++k) {
      Box b{-bound, bound};
      if (info.handle.kind == VarKind::Scalar) {
        if (info.lower) b.lo = *info.lower;
        if (info.upper) b.hi = *info.upper;
        if (info.lower && !info.upper) b.hi = std::max(bound, *info.lower + bound);
        if (info.upper && !info.lower) b.lo = std::min(-bound, *info.upper - bound);
      }
      boxes[info.offset + k] = b;
    }
  }
  return boxes;
}

Matrix projectPsd(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.transpose()));
  const Vector d = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Shared assembly for both phases. With withMargin the last coordinate is the
// margin t entering every constraint as -t I.
ConicProgram assemble(const LmiProblem& problem, const SolveOptions& opts,
                      bool withMargin, double keep, Box marginBox,
                      const Vector& objective) {
  const int m0 = problem.numCoordinates();
  const int m = m0 + (withMargin ? 1 : 0);
  const std::vector<Box> boxes = coordinateBoxes(problem, opts.variableBound);

  ConicProgram prog;
  prog.a.resize(m);
  prog.b = Vector::Zero(m);
  prog.coordinateBound = Vector::Zero(m);

  const auto& cons = problem.constraints();
  for (std::size_t j = 0; j < cons.size(); ++j) {
    const AffineExpr& e = cons[j].expr;
    const auto blk = static_cast<int>(j);
    prog.blockSizes.push_back(e.dim());
    prog.c.push_back(e.constantPart() - keep * Matrix::Identity(e.dim(), e.dim()));
    for (const VariableInfo& info : problem.variables()) {
      for (int k = 0; k < info.count; ++k) {
        const Matrix f =
            e.evaluateLinear(info.handle.id, LmiProblem::basis(info.handle, k));
        if (f.cwiseAbs().maxCoeff() == 0.0) continue;
        const double asym = (f - f.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * (1.0 + f.cwiseAbs().maxCoeff())) {
          throw SymmetryError("constraint '" + cons[j].name +
                              "' is not symmetric in variable '" + info.name +
                              "'");
        }
        prog.a[info.offset + k].emplace_back(blk, -0.5 * (f + f.transpose()));
      }
    }
    if (withMargin) {
      prog.a[m0].emplace_back(blk, Matrix::Identity(e.dim(), e.dim()));
    }
  }

  // Bounds as one diagonal block: rows y_k - lo >= 0 and hi - y_k >= 0.
  const int lpBlock = static_cast<int>(cons.size());
  const Eigen::Index lpSize = 2 * m;
  prog.blockSizes.push_back(lpSize);
  Matrix lpC = Matrix::Zero(lpSize, lpSize);
  for (int k = 0; k < m; ++k) {
    const Box b = k < m0 ? boxes[k] : marginBox;
    lpC(2 * k, 2 * k) = -b.lo;
    lpC(2 * k + 1, 2 * k + 1) = b.hi;
    Matrix ak = Matrix::Zero(lpSize, lpSize);
    ak(2 * k, 2 * k) = -1.0;
    ak(2 * k + 1, 2 * k + 1) = 1.0;
    prog.a[k].emplace_back(lpBlock, std::move(ak));
    prog.coordinateBound(k) = std::max(std::abs(b.lo), std::abs(b.hi));
  }
  prog.c.push_back(std::move(lpC));
  prog.b.head(objective.size()) = objective;
  return prog;
}

Vector objectiveVector(const LmiProblem& problem) {
  Vector b = Vector::Zero(problem.numCoordinates());
  for (const auto& [id, w] : problem.objective()) {
    b(problem.variables().at(id).offset) += w;
  }
  return b;
}

Vector interiorStart(const std::vector<Box>& boxes) {
  Vector y(static_cast<Eigen::Index>(boxes.size()));
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const Box& b = boxes[k];
    const double delta = std::min(1.0, 0.01 * (b.hi - b.lo));
    y(static_cast<Eigen::Index>(k)) = std::clamp(0.0, b.lo + delta, b.hi - delta);
  }
  return y;
}

double constraintMinEig(const LmiProblem& problem,
                        const std::vector<Matrix>& values) {
  double worst = std::numeric_limits<double>::infinity();
  for (const Constraint& c : problem.constraints()) {
    const Matrix f = c.expr.evaluate(values);
    worst = std::min(worst,
                     matcore::minEigenvalue(SymMatrix::symmetrize(f)));
  }
  return worst;
}

// Margin box for the feasibility phase, wide enough that the interior start
// is strictly inside.
Box marginBoxFor(const SolveOptions& opts,
                 double t0) {
  return {-std::max(opts.variableBound, 2.0 * std::abs(t0) + 1.0),
          opts.marginCap};
}

double startMargin(const LmiProblem& problem, const SolveOptions& opts,
                   const Vector& y0) {
  const double worst =
      problem.constraints().empty()
          ? opts.marginCap
          : constraintMinEig(problem, problem.valuesFromCoordinates(y0));
  return std::min(worst, opts.marginCap) - 1.0;
}

}  // namespace

const char* toString(Status s) {
  switch (s) {
    case Status::Feasible:
      return "feasible";
    case Status::Infeasible:
      return "infeasible";
    case Status::Undecided:
      return "undecided";
  }
  return "undecided";
}

ConicProgram compileFeasibility(const LmiProblem& problem,
                                const SolveOptions& opts) {
  const std::vector<Box> boxes = coordinateBoxes(problem, opts.variableBound);
  const Vector y0 = interiorStart(boxes);
  const double t0 = startMargin(problem, opts, y0);
  const int m0 = problem.numCoordinates();
  Vector b = Vector::Zero(m0 + 1);
  b(m0) = 1.0;
  ConicProgram prog =
      assemble(problem, opts, true, 0.0, marginBoxFor(opts, t0), b);
  Vector hint(m0 + 1);
  hint << y0, t0;
  prog.interiorHint = hint;
  return prog;
}

ConicProgram compileObjective(const LmiProblem& problem,
                              const SolveOptions& opts, double keep) {
  return assemble(problem, opts, false, keep, Box{0.0, 0.0},
                  objectiveVector(problem));
}

double recheckMargin(const LmiProblem& problem, const Assignment& assignment) {
  double worst = std::numeric_limits<double>::infinity();
  for (const Constraint& c : problem.constraints()) {
    const SymMatrix f = SymMatrix::symmetrize(c.expr.evaluate(assignment.values));
    worst = std::min(worst, matcore::minEigenvalue(f) / matcore::scaleOf(f));
  }
  return worst;
}

bool recheck(const LmiProblem& problem, const Assignment& assignment,
             double tol) {
  if (assignment.values.size() != problem.variables().size()) return false;
  for (const VariableInfo& info : problem.variables()) {
    const Matrix& v = assignment.values[info.handle.id];
    if (v.rows() != info.handle.rows || v.cols() != info.handle.cols) {
      return false;
    }
    if (!v.allFinite()) return false;
    if (info.handle.kind == VarKind::Scalar) {
      const double s = v(0, 0);
      if (info.lower && s < *info.lower - tol * std::max(1.0, std::abs(*info.lower))) {
        return false;
      }
      if (info.upper && s > *info.upper + tol * std::max(1.0, std::abs(*info.upper))) {
        return false;
      }
    }
  }
  return recheckMargin(problem, assignment) >= -tol;
}

SolveOutcome solve(const LmiProblem& problem, const SolveOptions& opts) {
  const std::string name =
      opts.backend.empty() ? defaultBackendName() : opts.backend;
  const auto backend = makeBackend(name);
  return solve(problem, opts, *backend);
}

SolveOutcome solve(const LmiProblem& problem, const SolveOptions& opts,
                   const Backend& backend) {
  SolveOutcome out;
  out.backend = backend.name();
  const int m0 = problem.numCoordinates();

  const ConicProgram feas = compileFeasibility(problem, opts);
  const ConicSolution sol = backend.solve(feas, opts.backendSettings);
  out.iterations = sol.iterations;
  out.message = sol.message;
  if (sol.y.size() != m0 + 1 || !sol.y.allFinite()) {
    out.status = Status::Undecided;
    if (out.message.empty()) out.message = "backend returned no point";
    return out;
  }
  out.assignment.values = problem.valuesFromCoordinates(sol.y.head(m0));
  out.margin = sol.y(m0);
  out.recheckMinEig = recheckMargin(problem, out.assignment);

  if (recheck(problem, out.assignment, opts.recheckTol)) {
    out.status = Status::Feasible;
    // Backend remarks such as early termination do not matter once the
    // point passes the recheck.
    out.message.clear();
  } else {
    DualCertificate cert;
    bool valid = sol.x.size() == feas.c.size();
    if (valid) {
      for (const Matrix& xb : sol.x) {
        if (!xb.allFinite()) valid = false;
        cert.blocks.push_back(projectPsd(xb));
      }
    }
    if (valid) {
      const Vector r = feas.applyA(cert.blocks) - feas.b;
      cert.bound = feas.objectiveC(cert.blocks) +
                   feas.coordinateBound.dot(r.cwiseAbs());
    }
    if (valid && cert.bound < -opts.undecidedBand) {
      out.status = Status::Infeasible;
      out.certificate = std::move(cert);
    } else {
      out.status = Status::Undecided;
      if (out.message.empty()) {
        out.message = "no recheck-valid point and no infeasibility certificate";
      }
    }
    return out;
  }

  if (!problem.hasObjective()) return out;
  if (out.margin <= 0.0) {
    out.message = "objective not optimised: feasible with zero margin";
    return out;
  }
  const double keep = opts.objectiveMarginFraction * out.margin;
  ConicProgram obj = compileObjective(problem, opts, keep);
  obj.interiorHint = Vector(sol.y.head(m0));
  const ConicSolution sol2 = backend.solve(obj, opts.backendSettings);
  out.iterations += sol2.iterations;
  if (sol2.y.size() == m0 && sol2.y.allFinite()) {
    Assignment candidate{problem.valuesFromCoordinates(sol2.y)};
    if (recheck(problem, candidate, opts.recheckTol)) {
      out.assignment = std::move(candidate);
      out.recheckMinEig = recheckMargin(problem, out.assignment);
      return out;
    }
  }
  out.message = "objective phase failed recheck; returning feasibility point";
  return out;
}

}  // namespace dissynth::sdp
