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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "../matcore.hpp"

namespace dissynth::sdp {

/// Standard-form conic program over a product of PSD cones
///
///     maximise   b^T y
///     subject to Z = C - sum_k y_k A_k  >= 0        (block diagonal)
///
/// whose conic dual is  min <C, X>  s.t.  <A_k, X> = b_k,  X >= 0.
/// Scalar bounds are 1x1 blocks.
struct ConicProgram {
  std::vector<Eigen::Index> blockSizes;
  std::vector<Matrix> c;  // per block
  // a[k] lists (block, coefficient) pairs of coordinate k; absent blocks are
  // zero.
  std::vector<std::vector<std::pair<int, Matrix>>> a;
  Vector b;
  // Box |y_k| <= coordinateBound(k) implied by the constraints; used to turn
  // an approximately feasible X into a rigorous upper bound.
  Vector coordinateBound;
  // Optional strictly feasible y, required by backends that cannot start
  // from an infeasible point.
  std::optional<Vector> interiorHint;

  int numCoordinates() const { return static_cast<int>(b.size()); }
  int numBlocks() const { return static_cast<int>(blockSizes.size()); }
  Eigen::Index totalSize() const;

  std::vector<Matrix> slack(const Vector& y) const;  // C - sum y_k A_k
  Vector applyA(const std::vector<Matrix>& x) const;  // <A_k, X>
  double objectiveC(const std::vector<Matrix>& x) const;  // <C, X>
};

struct BackendSettings {
  double gapTol = 1e-10;
  double feasTol = 1e-10;
  int maxIterations = 200;
};

struct ConicSolution {
  bool converged = false;
  Vector y;
  std::vector<Matrix> x;  // dual matrix, a certificate candidate
  double primalObjective = 0.0;  // b^T y
  double dualObjective = 0.0;    // <C, X>
  int iterations = 0;
  std::string message;
};

/// Adapter contract for conic solvers.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual ConicSolution solve(const ConicProgram& prog,
                              const BackendSettings& settings) const = 0;
};

/// Primal-dual path following (HKM direction, Mehrotra predictor-corrector).
std::unique_ptr<Backend> makeInteriorPointBackend();

/// Log-barrier path following on y from a strictly feasible start.
std::unique_ptr<Backend> makeBarrierBackend();

/// "ipm" or "barrier"; throws ValidationError for anything else.
std::unique_ptr<Backend> makeBackend(std::string_view name);

/// Name from the DISSYNTH_SOLVER environment variable, "ipm" if unset.
std::string defaultBackendName();

}  // namespace dissynth::sdp
