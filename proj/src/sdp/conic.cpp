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

#include "conic.hpp"

#include <cstdlib>
#include <string>

namespace dissynth::sdp {

Eigen::Index ConicProgram::totalSize() const {
  Eigen::Index n = 0;
  for (auto s : blockSizes) n += s;
  return n;
}

std::vector<Matrix> ConicProgram::slack(const Vector& y) const {
  std::vector<Matrix> z = c;
  for (int k = 0; k < numCoordinates(); ++k) {
    if (y(k) == 0.0) continue;
    for (const auto& [blk, coef] : a[k]) z[blk] -= y(k) * coef;
  }
  return z;
}

Vector ConicProgram::applyA(const std::vector<Matrix>& x) const {
  Vector out = Vector::Zero(numCoordinates());
  for (int k = 0; k < numCoordinates(); ++k) {
    for (const auto& [blk, coef] : a[k]) {
      out(k) += coef.cwiseProduct(x[blk]).sum();
    }
  }
  return out;
}

double ConicProgram::objectiveC(const std::vector<Matrix>& x) const {
  double v = 0.0;
  for (int blk = 0; blk < numBlocks(); ++blk) {
    v += c[blk].cwiseProduct(x[blk]).sum();
  }
  return v;
}

std::unique_ptr<Backend> makeBackend(std::string_view name) {
  if (name == "ipm") return makeInteriorPointBackend();
  if (name == "barrier") return makeBarrierBackend();
  throw ValidationError("unknown solver backend '" + std::string(name) +
                        "' (expected 'ipm' or 'barrier')");
}

std::string defaultBackendName() {
  const char* env = std::getenv("DISSYNTH_SOLVER");
  if (env == nullptr || *env == '\0') return "ipm";
  return env;
}

}  // namespace dissynth::sdp
