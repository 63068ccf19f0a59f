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

#include "matcore.hpp"
#include "sdp/solve.hpp"

namespace dissynth::dissipativity {

/// Quadratic supply s(w, y) = [w; y]' S [w; y] with input block first.
struct SupplyRate {
  SymMatrix s;
  Eigen::Index inDim = 0;
  Eigen::Index outDim = 0;
};

struct StateStrictSupply {
  // Supply over (u, z) with z = (x, y).
  SupplyRate base;
  double epsilon = 0.0;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
};

SupplyRate passiveSupply(Eigen::Index d);
SupplyRate l2GainSupply(Eigen::Index d, Eigen::Index p, double gamma);
StateStrictSupply stateStrictPassiveSupply(Eigen::Index n, Eigen::Index m,
                                           double epsilon);
SupplyRate customSupply(const SymMatrix& s, Eigen::Index inDim);

/// True when S has outDim negative and inDim positive eigenvalues.
bool hasSynthesisInertia(const SupplyRate& supply);
/// Throws HypothesisError("supply inertia") otherwise.
void requireSynthesisInertia(const SupplyRate& supply);

/// [I 0; A B]' diag(P, -P) [I 0; A B] + [0 I; C D]' S [0 I; C D].
SymMatrix dissipationMatrix(const Matrix& a, const Matrix& b, const Matrix& c,
                            const Matrix& d, const SupplyRate& supply,
                            const SymMatrix& p);

struct AnalysisOptions {
  // Require P > 0 instead of P >= 0.
  bool strictStorage = false;
  double strictDelta = 1e-6;
  sdp::SolveOptions solve;
};

struct AnalysisResult {
  sdp::Status status = sdp::Status::Undecided;
  std::optional<SymMatrix> p;
  double margin = 0.0;
  double recheckMinEig = 0.0;
  std::optional<double> certificateBound;
  std::string message;
};

AnalysisResult analyzeDissipativity(const Matrix& a, const Matrix& b,
                                    const Matrix& c, const Matrix& d,
                                    const SupplyRate& supply,
                                    const AnalysisOptions& opts = {});

/// Dual supply over (y, w): inDim and outDim swap roles.
SupplyRate dualize(const SupplyRate& supply);

/// Dual of the state-strict passive supply as S0 + eta * S1 with
/// eta = 1 / epsilon.
struct SupplyPencil {
  SymMatrix constant;
  SymMatrix slope;
};
SupplyPencil dualStateStrictPencil(Eigen::Index n, Eigen::Index m);

/// [I 0; A' C']' diag(Q, -Q) [I 0; A' C'] + [0 I; B' D']' Shat [0 I; B' D'].
SymMatrix dualDissipationMatrix(const Matrix& a, const Matrix& b,
                                const Matrix& c, const Matrix& d,
                                const SupplyRate& dual, const SymMatrix& q);

}  // namespace dissynth::dissipativity
