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

#include <cmath>
#include <limits>

#include "conic.hpp"

namespace dissynth::sdp {

namespace {

using Blocks = std::vector<Matrix>;

// -sum log det Z, or +inf when some block is not positive definite.
double barrierValue(const Blocks& z) {
  double v = 0.0;
  for (const Matrix& zb : z) {
    Eigen::LLT<Matrix> llt(zb);
    if (llt.info() != Eigen::Success) {
      return std::numeric_limits<double>::infinity();
    }
    const Vector d = llt.matrixL().toDenseMatrix().diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!(d(i) > 0.0)) return std::numeric_limits<double>::infinity();
      v -= 2.0 * std::log(d(i));
    }
  }
  return v;
}

class BarrierBackend final : public Backend {
 public:
  std::string name() const override { return "barrier"; }

  ConicSolution solve(const ConicProgram& prog,
                      const BackendSettings& settings) const override {
    ConicSolution out;
    if (!prog.interiorHint) {
      out.message = "barrier backend needs a strictly feasible start";
      out.y = Vector::Zero(prog.numCoordinates());
      return out;
    }
    const int m = prog.numCoordinates();
    const int nb = prog.numBlocks();
    const double n = static_cast<double>(prog.totalSize());
    Vector y = *prog.interiorHint;
    if (!std::isfinite(barrierValue(prog.slack(y)))) {
      out.message = "starting point is not strictly feasible";
      out.y = y;
      return out;
    }

    double tau = 1.0;
    Blocks zinv(nb);
    Vector grad(m);
    int newtonTotal = 0;
    bool centred = false;
    for (int outer = 0; outer < 60; ++outer) {
      centred = false;
      double lastDecrement = std::numeric_limits<double>::infinity();
      for (int it = 0; it < 80; ++it) {
        ++newtonTotal;
        const Blocks z = prog.slack(y);
        for (int i = 0; i < nb; ++i) {
          zinv[i] = z[i].llt().solve(Matrix::Identity(z[i].rows(), z[i].cols()));
        }
        std::vector<std::vector<std::pair<int, Matrix>>> p(m);
        for (int k = 0; k < m; ++k) {
          grad(k) = -tau * prog.b(k);
          for (const auto& [blk, coef] : prog.a[k]) {
            grad(k) += zinv[blk].cwiseProduct(coef).sum();
            p[k].emplace_back(blk, zinv[blk] * coef);
          }
        }
        Matrix hess = Matrix::Zero(m, m);
        for (int k = 0; k < m; ++k) {
          for (int l = k; l < m; ++l) {
            double v = 0.0;
            for (const auto& [bk, pk] : p[k]) {
              for (const auto& [bl, pl] : p[l]) {
                if (bk == bl) v += pk.cwiseProduct(pl.transpose()).sum();
              }
            }
            hess(k, l) = hess(l, k) = v;
          }
        }
        const Vector step = -hess.ldlt().solve(grad);
        const double decrement = -grad.dot(step);
        if (!(decrement >= 0.0)) break;
        if (decrement < 1e-9) {
          centred = true;
          break;
        }
        // Damped Newton step; stays inside the domain of a self-concordant
        // barrier without comparing function values.
        const double lambda = std::sqrt(decrement);
        double s = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
          const Vector cand = y + s * step;
          if (std::isfinite(barrierValue(prog.slack(cand)))) {
            y = cand;
            moved = true;
            break;
          }
          s *= 0.5;
        }
        if (!moved) break;
        lastDecrement = decrement;
      }
      // Round-off floor at large tau.
      if (!centred && lastDecrement < 1e-5) centred = true;
      const double pobj = prog.b.dot(y);
      if (centred && n / tau < settings.gapTol * (1.0 + std::abs(pobj))) {
        out.converged = true;
        break;
      }
      tau *= 10.0;
      if (tau > 1e16) break;
    }

    const Blocks z = prog.slack(y);
    Blocks x(nb);
    for (int i = 0; i < nb; ++i) {
      x[i] = z[i].llt().solve(Matrix::Identity(z[i].rows(), z[i].cols())) / tau;
      x[i] = 0.5 * (x[i] + x[i].transpose());
    }
    out.iterations = newtonTotal;
    out.y = y;
    out.x = std::move(x);
    out.primalObjective = prog.b.dot(y);
    out.dualObjective = prog.objectiveC(out.x);
    if (!out.converged) out.message = "barrier path following did not converge";
    return out;
  }
};

}  // namespace

std::unique_ptr<Backend> makeBarrierBackend() {
  return std::make_unique<BarrierBackend>();
}

}  // namespace dissynth::sdp
