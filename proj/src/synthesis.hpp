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
#include <string>
#include <variant>
#include <vector>

#include "datamodel.hpp"
#include "dissipativity.hpp"
#include "sdp/solve.hpp"

namespace dissynth::synthesis {

enum class Branch { UnknownOutput, KnownOutputStrict, KnownOutputDegenerate };

const char* toString(Branch b);

/// State-strict passivity from the noise input to y with epsilon free.
struct StateStrictSpec {
  double epsilonMin = 1e-6;
  double epsilonMax = 1e6;
  // Push epsilon up after feasibility is established.
  bool maximizeEpsilon = true;
};

using SupplySpec = std::variant<dissipativity::SupplyRate, StateStrictSpec>;

struct KnownOutputs {
  Matrix cs;
  Matrix ds;
};

struct SynthesisProblem {
  datamodel::ExperimentData data;
  datamodel::NoiseModel noise;
  Matrix e;
  Matrix f;
  SupplySpec supply;
  std::optional<KnownOutputs> outputs;
};

struct SynthesisOptions {
  // Lower bound on Q.
  double delta = 1e-6;
  double recheckTol = 1e-7;
  sdp::SolveOptions solve;
};

struct Diagnostics {
  std::optional<bool> rank;
  std::optional<bool> positiveEigenvalue;
  std::optional<bool> piClass;
  std::optional<bool> interiorSufficient;
  bool supplyInertia = false;
};

struct SynthesisResult {
  sdp::Status status = sdp::Status::Undecided;
  std::optional<Branch> branch;
  Matrix k;
  SymMatrix p;
  double alpha = 0.0;
  std::optional<double> epsilon;
  double feasibilityMargin = 0.0;
  // lambda_min of the rebuilt M-hat - alpha N-hat over its scale.
  double recheckMinEig = 0.0;
  std::optional<double> certificateBound;
  Diagnostics diagnostics;
  std::vector<std::string> notes;
  std::string message;
};

SynthesisResult synthesizeUnknownOutput(const SynthesisProblem& prob,
                                        const SynthesisOptions& opts = {});
SynthesisResult synthesizeKnownOutput(const SynthesisProblem& prob,
                                      const SynthesisOptions& opts = {});
/// Dispatches on whether the output matrices are known.
SynthesisResult synthesize(const SynthesisProblem& prob,
                           const SynthesisOptions& opts = {});

/// Rebuilds M-hat - alpha N-hat from (P, K, alpha, epsilon) with the data
/// builders and returns lambda_min over its scale.
double roundTripMinEig(const SynthesisProblem& prob,
                       const SynthesisResult& result);

struct VerificationReport {
  int samples = 0;
  // Smallest lambda_min of the closed-loop dissipation matrix over its scale.
  double minEig = 0.0;
  int worstSample = -1;
  bool pass = false;
};

VerificationReport verifyClosedLoop(const SynthesisResult& result,
                                    const SynthesisProblem& prob,
                                    int sampleCount, std::uint64_t seed,
                                    double tol = 1e-7);

/// Closed-loop dissipation matrix for one plant, over its scale.
double closedLoopMinEig(const SynthesisResult& result,
                        const SynthesisProblem& prob,
                        const datamodel::PlantModel& plant);

}  // namespace dissynth::synthesis
