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

#include <cstdint>
#include <vector>

#include "matcore.hpp"

// Sets of matrices described by quadratic matrix inequalities,
//
//   Z_r(Pi) = { Z in R^{r x q} : [I; Z]^T Pi [I; Z] >= 0 },
//
// the projection rule Z_r(Pi) W = Z_r(Pi_W), and the matrix S-lemma test
// for Z_r(N) being contained in Z_r(M).
namespace dissynth::qmi {

struct PiClassReport {
  bool pi22Nsd = false;
  bool schurPsd = false;
  bool kernelOk = false;
  bool pi22Nd = false;
  bool inPiClass = false;
};

/// Checks Pi22 <= 0, Pi|Pi22 >= 0 and ker Pi22 in ker Pi12 (plus strict
/// Pi22 < 0). All tolerances are relative to max(1, |Pi|).
PiClassReport validatePiClass(const PartitionedForm& pi,
                              double tol = matcore::kZeroTol);

/// [I; Z]^T Pi [I; Z] for an r x q matrix Z.
SymMatrix qmiValue(const PartitionedForm& pi, const Matrix& z);

/// Scale used by zMembership: max(1, |Pi|_2 (1 + |Z|_2)^2).
double membershipScale(const PartitionedForm& pi, const Matrix& z);

bool zMembership(const PartitionedForm& pi, const Matrix& z,
                 double tol = matcore::kZeroTol);

/// Z_r(Pi) is bounded iff Pi22 < 0. Throws HypothesisError if Pi is not in
/// the Pi-class.
bool isBounded(const PartitionedForm& pi, double tol = matcore::kZeroTol);

/// Pi_W = diag(W^T, I) Pi diag(W, I) with split (p, r). Requires W (q x p)
/// to have full column rank or Pi22 to be nonsingular.
PartitionedForm transformW(const PartitionedForm& pi, const Matrix& w);

/// Center -Pi22^{-1} Pi21 of a bounded Z_r(Pi).
Matrix center(const PartitionedForm& pi);

/// Draws points Z = Zc + (-Pi22)^{-1/2} V (Pi|Pi22)^{1/2} with |V|_2 <= 1.
///
/// The first element is the center, the next min(boundaryCount, count - 1)
/// lie on the boundary (|V|_2 = 1), the remainder use a Gaussian V rescaled
/// to a spectral norm drawn uniformly from [0, 1]. When Pi|Pi22 vanishes the
/// set is the single point Zc and only that point is returned.
std::vector<Matrix> sampleZ(const PartitionedForm& pi, int count,
                            std::uint64_t seed, int boundaryCount = 1);

struct SlemmaOptions {
  double alphaMax = 1e6;
  double psdTol = 1e-8;
  int maxExpansions = 64;
  int maxIterations = 400;
};

struct SlemmaCertificate {
  double alpha = 0.0;
  // lambda_min(M - alpha N) / max|M_ij|.
  double residualMinEig = 0.0;
};

struct SlemmaOutcome {
  bool feasible = false;
  // Best multiplier found; when infeasible it certifies how far off the
  // containment is.
  SlemmaCertificate best;
};

/// Searches alpha >= 0 with M - alpha N >= 0 by golden-section maximisation
/// of the concave function alpha -> lambda_min(M - alpha N). Both matrices
/// are normalised by their largest entry first.
///
/// Throws HypothesisError when N is not in the Pi-class or has no positive
/// eigenvalue.
SlemmaOutcome slemma(const PartitionedForm& m, const PartitionedForm& n,
                     const SlemmaOptions& opts = {});

}  // namespace dissynth::qmi
