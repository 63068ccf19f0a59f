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

#include "conic.hpp"
#include "lmi.hpp"

namespace dissynth::sdp {

enum class Status { Feasible, Infeasible, Undecided };

const char* toString(Status s);

struct SolveOptions {
  // Backend name; empty selects defaultBackendName().
  std::string backend;
  // Box bound on every matrix-variable coordinate and on unbounded scalars.
  double variableBound = 1e4;
  // Upper bound on the margin t of the feasibility phase.
  double marginCap = 1.0;
  // Tolerance of the independent PSD recheck, relative to max(1, |F|).
  double recheckTol = 1e-7;
  // Certified margin bounds inside (-band, 0] are not reported infeasible.
  double undecidedBand = 1e-9;
  // Fraction of the feasibility margin kept while optimising an objective.
  double objectiveMarginFraction = 0.5;
  BackendSettings backendSettings;
};

/// Positive semidefinite matrix X of the conic dual together with the upper
/// bound it proves on the achievable margin.
struct DualCertificate {
  std::vector<Matrix> blocks;
  double bound = 0.0;
};

struct SolveOutcome {
  Status status = Status::Undecided;
  Assignment assignment;
  // Largest t with every constraint >= t I found in the feasibility phase.
  double margin = 0.0;
  // Smallest lambda_min(F_j) / max(1, |F_j|) over constraints at the
  // returned assignment.
  double recheckMinEig = 0.0;
  std::optional<DualCertificate> certificate;
  std::string backend;
  int iterations = 0;
  std::string message;
};

/// Compiles the feasibility phase: every constraint F_j(y) - t I >= 0,
/// maximise t <= marginCap, all coordinates boxed. The margin variable is
/// the last coordinate.
ConicProgram compileFeasibility(const LmiProblem& problem,
                                const SolveOptions& opts);

/// Compiles the objective phase: every constraint F_j(y) >= keep I.
ConicProgram compileObjective(const LmiProblem& problem,
                              const SolveOptions& opts, double keep);

/// Decides feasibility by margin maximisation, then (for problems with an
/// objective and a positive margin) optimises the objective while keeping a
/// fraction of the margin. A feasible status is only returned after the
/// assignment passes recheck(); an infeasible status only with a dual
/// certificate bounding the margin below -undecidedBand.
SolveOutcome solve(const LmiProblem& problem, const SolveOptions& opts = {});
SolveOutcome solve(const LmiProblem& problem, const SolveOptions& opts,
                   const Backend& backend);

/// Evaluates every constraint from the variable values (not from the
/// compiled program) and checks PSD-ness and scalar bounds.
bool recheck(const LmiProblem& problem, const Assignment& assignment,
             double tol);

/// min_j lambda_min(F_j) / max(1, |F_j|_2); +inf for no constraints.
double recheckMargin(const LmiProblem& problem, const Assignment& assignment);

}  // namespace dissynth::sdp
