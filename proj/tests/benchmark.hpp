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

#include "datamodel.hpp"
#include "synthesis.hpp"

namespace dissynth::testing {

// Two-state, single-input benchmark plant with one noise channel.
inline datamodel::PlantModel benchmarkPlant() {
  datamodel::PlantModel p;
  p.a = (Matrix(2, 2) << -0.292, 1.551, -0.469, 0.711).finished();
  p.b = (Matrix(2, 1) << -0.066, -0.397).finished();
  p.c = (Matrix(1, 2) << 0.573, -0.462).finished();
  p.d = Matrix::Constant(1, 1, 0.857);
  p.e = (Matrix(2, 1) << 0.534, 0.233).finished();
  p.f = Matrix::Constant(1, 1, 0.474);
  return p;
}

inline datamodel::Experiment benchmarkExperiment(std::uint64_t seed,
                                                 Eigen::Index samples = 30) {
  datamodel::ExperimentConfig cfg;
  cfg.plant = benchmarkPlant();
  cfg.samples = samples;
  cfg.seed = seed;
  return datamodel::generateExperiment(cfg);
}

// |w(t)| <= 1 for uniform noise in [0, 1].
inline datamodel::NoiseModel benchmarkNoise(Eigen::Index samples = 30) {
  return datamodel::NoiseModel::normBound(1, samples, 1.0);
}

// State-strict passivity synthesis on one benchmark experiment.
inline synthesis::SynthesisProblem benchmarkProblem(std::uint64_t seed,
                                                    bool knownOutputs) {
  const datamodel::PlantModel plant = benchmarkPlant();
  const datamodel::Experiment ex = benchmarkExperiment(seed);
  synthesis::SynthesisProblem prob{ex.data, benchmarkNoise(), plant.e,
                                   plant.f, synthesis::StateStrictSpec{},
                                   std::nullopt};
  if (knownOutputs) {
    prob.data.yMinus.reset();
    prob.outputs = synthesis::KnownOutputs{plant.c, plant.d};
  }
  return prob;
}

}  // namespace dissynth::testing
