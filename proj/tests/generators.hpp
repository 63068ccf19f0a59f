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

#include <random>

#include "benchmark.hpp"
#include "datamodel.hpp"
#include "dissipativity.hpp"
#include "synthesis.hpp"
#include "test_util.hpp"

// Random instances shared by the unit tests and the acceptance run.
namespace dissynth::testing {

// Random Pi-class form with Pi22 < 0 and Schur complement of given rank.
inline PartitionedForm randomBounded(std::mt19937_64& rng, int q, int r,
                                     int schurRank) {
  const Matrix p22 = -randPd(rng, r);
  const Matrix zc = randn(rng, r, q);
  const Matrix g = randn(rng, q, schurRank);
  const Matrix schur = g * g.transpose();
  // [I; Z]' Pi [I; Z] = schur + (Z - Zc)' P22 (Z - Zc).
  Matrix pi(q + r, q + r);
  pi.topLeftCorner(q, q) = schur + zc.transpose() * p22 * zc;
  pi.topRightCorner(q, r) = -zc.transpose() * p22;
  pi.bottomLeftCorner(r, q) = -p22 * zc;
  pi.bottomRightCorner(r, r) = p22;
  return PartitionedForm(SymMatrix::symmetrize(pi), q, r);
}

// Congruence of diag(4 I, -I): in positive and out negative eigenvalues.
inline dissipativity::SupplyRate randomSupply(std::mt19937_64& rng, int in,
                                              int out) {
  const Matrix t = Matrix::Identity(in + out, in + out) +
                   0.3 * randn(rng, in + out, in + out);
  Matrix base = Matrix::Zero(in + out, in + out);
  base.topLeftCorner(in, in) = 4.0 * Matrix::Identity(in, in);
  base.bottomRightCorner(out, out) = -Matrix::Identity(out, out);
  return {SymMatrix::symmetrize(t.transpose() * base * t), in, out};
}

struct RandomBlocks {
  SymMatrix q;
  Matrix l, k, cs, ds, e, f;
  SymMatrix sHat;
  datamodel::ExperimentData data;
  datamodel::NoiseModel noise;
};

// Small random ingredients of the lifted and non-lifted matrices.
inline RandomBlocks randomBlocks(std::mt19937_64& rng, int trial) {
  const int n = 1 + trial % 3, m = 1 + (trial / 3) % 3, p = 1 + (trial / 9) % 3;
  const int d = 1 + trial % 2, t = n + m + 2 + trial % 5;
  const SymMatrix q(randPd(rng, n));
  const Matrix l = randn(rng, m, n);
  datamodel::ExperimentData data;
  data.x = randn(rng, n, t + 1);
  data.uMinus = randn(rng, m, t);
  data.yMinus = randn(rng, p, t);
  const Matrix s = randSym(rng, p + d);
  return {q,
          l,
          l * q.matrix().inverse(),
          randn(rng, p, n),
          randn(rng, p, m),
          randn(rng, n, d),
          randn(rng, p, d),
          SymMatrix(s),
          data,
          datamodel::NoiseModel::energyBound(d, t, 0.5 + std::abs(s(0, 0)))};
}

// C_s = 0 and F = 0 with passive supply: the strict branch is infeasible
// under a large noise radius, but K = 0 cancels the output.
inline synthesis::SynthesisProblem degenerateProblem() {
  datamodel::ExperimentConfig cfg;
  cfg.plant = benchmarkPlant();
  cfg.plant.c = Matrix::Zero(1, 2);
  cfg.plant.d = Matrix::Constant(1, 1, 1.0);
  cfg.plant.f = Matrix::Zero(1, 1);
  cfg.seed = 11;
  const datamodel::Experiment ex = datamodel::generateExperiment(cfg);
  synthesis::SynthesisProblem prob{
      ex.data, datamodel::NoiseModel::normBound(1, 30, 50.0), cfg.plant.e,
      cfg.plant.f, dissipativity::passiveSupply(1),
      synthesis::KnownOutputs{cfg.plant.c, cfg.plant.d}};
  prob.data.yMinus.reset();
  return prob;
}

}  // namespace dissynth::testing
