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

#include <algorithm>
#include <cmath>
#include <limits>

#include "conic.hpp"

namespace dissynth::sdp {

namespace {

using Blocks = std::vector<Matrix>;

double inner(const Blocks& a, const Blocks& b) {
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i].cwiseProduct(b[i]).sum();
  return v;
}

double frob(const Blocks& a) { return std::sqrt(inner(a, a)); }

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Largest step s with X + s D >= 0 (infinity when D does not leave the cone).
double maxStep(const Blocks& x, const Blocks& d) {
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    Eigen::LLT<Matrix> llt(x[i]);
    if (llt.info() != Eigen::Success) return 0.0;
    const Matrix li = llt.matrixL().solve(Matrix::Identity(x[i].rows(), x[i].cols()));
    const Matrix w = sym(li * d[i] * li.transpose());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (lmin < 0.0) step = std::min(step, -1.0 / lmin);
  }
  return step;
}

class InteriorPointBackend final : public Backend {
 public:
  std::string name() const override { return "ipm"; }

  ConicSolution solve(const ConicProgram& prog,
                      const BackendSettings& settings) const override {
    const int m = prog.numCoordinates();
    const int nb = prog.numBlocks();
    const double n = static_cast<double>(prog.totalSize());

    Vector normA = Vector::Zero(m);
    for (int k = 0; k < m; ++k) {
      for (const auto& [blk, coef] : prog.a[k]) normA(k) += coef.squaredNorm();
      normA(k) = std::sqrt(normA(k));
    }
    const double normC = frob(prog.c);
    const double normB = prog.b.norm();

    double alpha0 = 1.0;
    for (int k = 0; k < m; ++k) {
      alpha0 = std::max(alpha0, n * (1.0 + std::abs(prog.b(k))) / (1.0 + normA(k)));
    }
    const double beta0 =
        (1.0 + std::max(m > 0 ? normA.maxCoeff() : 0.0, normC)) / std::sqrt(n);

    Blocks x(nb), z(nb);
    for (int i = 0; i < nb; ++i) {
      const auto s = prog.blockSizes[i];
      x[i] = 10.0 * alpha0 * Matrix::Identity(s, s);
      z[i] = 10.0 * beta0 * Matrix::Identity(s, s);
    }
    Vector y = Vector::Zero(m);

    ConicSolution out;
    int stalled = 0;
    int flat = 0;
    double prevPobj = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 0; iter < settings.maxIterations; ++iter) {
      out.iterations = iter;
      const Vector rp = prog.b - prog.applyA(x);
      Blocks rd = prog.slack(y);
      for (int i = 0; i < nb; ++i) rd[i] -= z[i];

      const double pobj = prog.b.dot(y);
      const double dobj = prog.objectiveC(x);
      const double xz = inner(x, z);
      const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
      const double relP = rp.norm() / (1.0 + normB);
      const double relD = frob(rd) / (1.0 + normC);
      if (relP < settings.feasTol && relD < settings.feasTol &&
          std::abs(dobj - pobj) / denom < settings.gapTol &&
          xz / denom < settings.gapTol) {
        out.converged = true;
        break;
      }
      // Degenerate programs can leave the dual gap stuck while y no longer
      // moves; stop once the primal objective is flat and nearly feasible.
      if (relP < 1e-6 && relD < 1e-6 &&
          std::abs(pobj - prevPobj) / denom < 1e-10) {
        if (++flat >= 5) {
          out.message = "accuracy limit reached";
          break;
        }
      } else {
        flat = 0;
      }
      prevPobj = pobj;

      Blocks zinv(nb);
      bool ok = true;
      for (int i = 0; i < nb; ++i) {
        Eigen::LLT<Matrix> llt(z[i]);
        if (llt.info() != Eigen::Success) {
          ok = false;
          break;
        }
        zinv[i] = llt.solve(Matrix::Identity(z[i].rows(), z[i].cols()));
      }
      if (!ok) {
        out.message = "slack matrix lost definiteness";
        break;
      }

      // Schur complement system M_kl = <A_k, X A_l Z^-1>.
      std::vector<std::vector<std::pair<int, Matrix>>> g(m);
      for (int k = 0; k < m; ++k) {
        for (const auto& [blk, coef] : prog.a[k]) {
          g[k].emplace_back(blk, x[blk] * coef * zinv[blk]);
        }
      }
      Matrix schur = Matrix::Zero(m, m);
      for (int k = 0; k < m; ++k) {
        for (int l = k; l < m; ++l) {
          double v = 0.0;
          for (const auto& [bk, ak] : prog.a[k]) {
            for (const auto& [bl, gl] : g[l]) {
              if (bk == bl) v += ak.cwiseProduct(gl.transpose()).sum();
            }
          }
          schur(k, l) = schur(l, k) = v;
        }
      }
      // Symmetric diagonal scaling; the diagonal can span many decades near
      // the optimum when some coordinates stop mattering.
      Vector dscale(m);
      for (int k = 0; k < m; ++k) {
        dscale(k) = schur(k, k) > 0.0 ? 1.0 / std::sqrt(schur(k, k)) : 1.0;
      }
      const Matrix scaled = dscale.asDiagonal() * schur * dscale.asDiagonal();
      Eigen::LDLT<Matrix> factor(scaled);
      if (factor.info() != Eigen::Success) {
        out.message = "Schur complement factorisation failed";
        break;
      }

      Blocks xrdz(nb);
      for (int i = 0; i < nb; ++i) xrdz[i] = x[i] * rd[i] * zinv[i];

      auto direction = [&](const Blocks& h, Vector& dy, Blocks& dx, Blocks& dz) {
        Blocks t(nb);
        for (int i = 0; i < nb; ++i) t[i] = h[i] - xrdz[i];
        Vector rhs = rp - prog.applyA(t);
        auto solveScaled = [&](const Vector& r) -> Vector {
          return dscale.asDiagonal() * factor.solve(dscale.asDiagonal() * r);
        };
        dy = solveScaled(rhs);
        for (int refine = 0; refine < 2; ++refine) {
          const Vector res = rhs - schur * dy;
          if (res.norm() <= 1e-15 * rhs.norm()) break;
          dy += solveScaled(res);
        }
        dz = rd;
        for (int k = 0; k < m; ++k) {
          for (const auto& [blk, coef] : prog.a[k]) dz[blk] -= dy(k) * coef;
        }
        dx.resize(nb);
        for (int i = 0; i < nb; ++i) dx[i] = sym(h[i] - x[i] * dz[i] * zinv[i]);
      };

      const double mu = xz / n;
      Blocks h(nb);
      for (int i = 0; i < nb; ++i) h[i] = -x[i];
      Vector dyA;
      Blocks dxA, dzA;
      direction(h, dyA, dxA, dzA);
      const double apA = std::min(1.0, maxStep(x, dxA));
      const double adA = std::min(1.0, maxStep(z, dzA));
      double muAff = 0.0;
      for (int i = 0; i < nb; ++i) {
        muAff += (x[i] + apA * dxA[i]).cwiseProduct(z[i] + adA * dzA[i]).sum();
      }
      muAff /= n;
      const double sigma = std::clamp(std::pow(muAff / mu, 3.0), 0.0, 1.0);

      for (int i = 0; i < nb; ++i) {
        h[i] = sigma * mu * zinv[i] - x[i] - dxA[i] * dzA[i] * zinv[i];
      }
      Vector dy;
      Blocks dx, dz;
      direction(h, dy, dx, dz);
      const double ap = std::min(1.0, 0.95 * maxStep(x, dx));
      const double ad = std::min(1.0, 0.95 * maxStep(z, dz));
      if (ap < 1e-12 && ad < 1e-12) {
        if (++stalled > 3) {
          out.message = "step length stalled";
          break;
        }
      } else {
        stalled = 0;
      }
      for (int i = 0; i < nb; ++i) {
        x[i] = sym(x[i] + ap * dx[i]);
        z[i] = sym(z[i] + ad * dz[i]);
      }
      y += ad * dy;
    }

    if (!out.converged && out.message.empty()) {
      out.message = "iteration limit reached";
    }
    out.y = y;
    out.x = x;
    out.primalObjective = prog.b.dot(y);
    out.dualObjective = prog.objectiveC(x);
    return out;
  }
};

}  // namespace

std::unique_ptr<Backend> makeInteriorPointBackend() {
  return std::make_unique<InteriorPointBackend>();
}

}  // namespace dissynth::sdp
