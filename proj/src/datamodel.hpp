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
#include <optional>
#include <utility>
#include <vector>

#include "matcore.hpp"

namespace dissynth::datamodel {

/// x(t+1) = A x + B u + E w,  y = C x + D u + F w.
struct PlantModel {
  Matrix a, b, c, d, e, f;

  Eigen::Index n() const { return a.rows(); }
  Eigen::Index m() const { return b.cols(); }
  Eigen::Index p() const { return c.rows(); }
  Eigen::Index noiseDim() const { return e.cols(); }
  void validate() const;
};

/// Noise bound [I; W']' Phi [I; W'] >= 0 on the d x T noise record.
class NoiseModel {
 public:
  explicit NoiseModel(PartitionedForm phi);
  // |w(t)| <= bound for every sample: Phi = diag(T bound^2 I, -I).
  static NoiseModel normBound(Eigen::Index d, Eigen::Index t, double bound);
  // W W' <= energy I: Phi = diag(energy I, -I).
  static NoiseModel energyBound(Eigen::Index d, Eigen::Index t, double energy);

  const PartitionedForm& phi() const { return phi_; }
  Eigen::Index d() const { return phi_.q(); }
  Eigen::Index samples() const { return phi_.r(); }
  bool admits(const Matrix& w, double tol = 1e-9) const;

 private:
  PartitionedForm phi_;
};

struct ExperimentData {
  Matrix uMinus;  // m x T
  Matrix x;       // n x (T+1)
  std::optional<Matrix> yMinus;  // p x T

  Eigen::Index samples() const { return uMinus.cols(); }
  Eigen::Index n() const { return x.rows(); }
  Eigen::Index m() const { return uMinus.rows(); }
  Matrix xMinus() const { return x.leftCols(samples()); }
  Matrix xPlus() const { return x.rightCols(samples()); }
  void validate() const;
};

std::pair<Matrix, Matrix> stackNoiseChannels(const Matrix& e, const Matrix& f);

/// Forward recursion over the columns of inputs and noise.
ExperimentData simulate(const PlantModel& plant, const Matrix& inputs,
                        const Vector& x0, const Matrix& noise);

struct ExperimentConfig {
  PlantModel plant;
  Eigen::Index samples = 30;
  double inputScale = 20.0;
  double x0Scale = 1.0;
  // Noise entries uniform in [noiseLow, noiseHigh].
  double noiseLow = 0.0;
  double noiseHigh = 1.0;
  std::uint64_t seed = 0;
};

struct Experiment {
  ExperimentData data;
  Matrix noise;  // d x T
  Vector x0;
};

Experiment generateExperiment(const ExperimentConfig& cfg);

/// diag(G', I) Phi diag(G, I).
PartitionedForm phiTransformed(const NoiseModel& noise, const Matrix& g);

/// Consistency forms: [A B]' in Z(N_k), [A B; C D]' in Z(N_u).
PartitionedForm buildNk(const ExperimentData& data, const Matrix& e,
                        const NoiseModel& noise);
PartitionedForm buildNu(const ExperimentData& data, const Matrix& e,
                        const Matrix& f, const NoiseModel& noise);
PartitionedForm buildBarNk(const ExperimentData& data, const Matrix& e,
                           const NoiseModel& noise, Eigen::Index p);

SymMatrix buildHatNk(const ExperimentData& data, const Matrix& e,
                     const NoiseModel& noise, Eigen::Index p);
SymMatrix buildHatNu(const ExperimentData& data, const Matrix& e,
                     const Matrix& f, const NoiseModel& noise);

/// diag(Q, 0) + [0 I; E' F']' Shat [0 I; E' F'].
SymMatrix buildHatR(const SymMatrix& q, const Matrix& e, const Matrix& f,
                    const SymMatrix& sHat);
SymMatrix buildHatMk(const SymMatrix& q, const Matrix& l, const Matrix& cs,
                     const Matrix& ds, const Matrix& e, const Matrix& f,
                     const SymMatrix& sHat);
SymMatrix buildHatMu(const SymMatrix& q, const Matrix& l, const Matrix& e,
                     const Matrix& f, const SymMatrix& sHat);
SymMatrix buildMk(const SymMatrix& q, const Matrix& k, const Matrix& cs,
                  const Matrix& ds, const Matrix& e, const Matrix& f,
                  const SymMatrix& sHat);
SymMatrix buildMu(const SymMatrix& q, const Matrix& k, const Matrix& e,
                  const Matrix& f, const SymMatrix& sHat);

/// Systems consistent with the data: the centre, boundaryCount boundary
/// points, then interior draws. Known outputs keep C = cs, D = ds.
std::vector<PlantModel> sampleConsistentKnown(
    const ExperimentData& data, const Matrix& e, const Matrix& f,
    const Matrix& cs, const Matrix& ds, const NoiseModel& noise, int count,
    std::uint64_t seed, int boundaryCount = 10);
std::vector<PlantModel> sampleConsistentUnknown(
    const ExperimentData& data, const Matrix& e, const Matrix& f,
    const NoiseModel& noise, int count, std::uint64_t seed,
    int boundaryCount = 10);

bool checkRank(const ExperimentData& data);
bool checkPositiveEigenvalue(const SymMatrix& n);
bool checkInteriorSufficient(const PartitionedForm& n);

}  // namespace dissynth::datamodel
