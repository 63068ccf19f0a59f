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
#include <vector>

#include <json.hpp>

#include "datamodel.hpp"
#include "dissipativity.hpp"
#include "qmi.hpp"
#include "synthesis.hpp"

// JSON files read and written by the command line tool. Matrices are
// row-major nested arrays; the dims block is authoritative and every shape
// mismatch raises ValidationError naming the field path.
namespace dissynth::io {

using Json = nlohmann::ordered_json;

Json matrixToJson(const Matrix& m);
Matrix matrixFromJson(const Json& j, const std::string& path,
                      Eigen::Index rows, Eigen::Index cols);

struct Dims {
  Eigen::Index n = 0, m = 0, p = 0, d = 0, t = 0;
};

struct SupplyDesc {
  // passive | l2gain | stateStrictPassive | custom
  std::string kind = "stateStrictPassive";
  double gamma = 1.0;
  synthesis::StateStrictSpec strict;
  Matrix s;
  Eigen::Index inDim = 0;
};

struct NoiseDesc {
  // normBound | energyBound | custom
  std::string kind = "normBound";
  double bound = 1.0;
  double energy = 1.0;
  Matrix phi;
};

struct ProblemFile {
  Dims dims;
  std::string mode = "known";
  std::uint64_t seed = 0;
  Matrix e, f;
  std::optional<Matrix> cs, ds;
  Matrix uMinus, x;
  std::optional<Matrix> yMinus;
  // Noise realisation, informational only.
  std::optional<Matrix> wMinus;
  SupplyDesc supply;
  NoiseDesc noise;
};

ProblemFile parseProblem(const Json& j);
Json toJson(const ProblemFile& pf);

dissipativity::SupplyRate buildSupply(const SupplyDesc& s, Eigen::Index d,
                                      Eigen::Index p);
datamodel::NoiseModel buildNoise(const NoiseDesc& nd, Eigen::Index d,
                                 Eigen::Index t);
/// mode overrides pf.mode when non-empty.
synthesis::SynthesisProblem toProblem(const ProblemFile& pf,
                                      const std::string& mode = "");

struct VerificationSummary {
  int samples = 0;
  double minEig = 0.0;
  int worstSample = -1;
  bool pass = false;
  std::uint64_t seed = 0;
};

struct ResultFile {
  // feasible | infeasible | undecided | hypothesisFailure
  std::string status = "undecided";
  std::string mode;
  std::optional<std::string> branch;
  std::optional<std::string> hypothesis;
  Matrix k, p;
  double alpha = 0.0;
  std::optional<double> epsilon;
  double feasibilityMargin = 0.0;
  double recheckMinEig = 0.0;
  std::optional<double> certificateBound;
  std::optional<VerificationSummary> verification;
  synthesis::Diagnostics diagnostics;
  std::vector<std::string> notes;
  std::string message;
};

ResultFile fromSynthesis(const synthesis::SynthesisResult& r,
                         const std::string& mode);
/// Back to a library result so verification can be re-run.
synthesis::SynthesisResult toSynthesis(const ResultFile& rf);

ResultFile parseResult(const Json& j);
Json toJson(const ResultFile& rf);

struct GenConfig {
  datamodel::ExperimentConfig experiment;
  std::string mode = "known";
  SupplyDesc supply;
};

GenConfig parseGenConfig(const Json& j);
Json toJson(const GenConfig& g);
/// Simulates the experiment and packs it as a problem file with a norm
/// bound noise model covering the noise law. Throws ValidationError if the
/// recorded noise violates that bound.
ProblemFile generateProblem(const GenConfig& g);

struct ModelFile {
  datamodel::PlantModel plant;  // e and f unused
  SupplyDesc supply;
  bool strictStorage = false;
};

ModelFile parseModel(const Json& j);
Json toJson(const ModelFile& mf);
Json toJson(const dissipativity::AnalysisResult& r);

struct SlemmaFile {
  PartitionedForm m;
  PartitionedForm n;
};

SlemmaFile parseSlemma(const Json& j);
Json toJson(const SlemmaFile& sf);
Json toJson(const qmi::SlemmaOutcome& o);

/// Reads and parses a file; I/O problems raise ValidationError too.
Json readJsonFile(const std::string& path);
std::string dump(const Json& j);

}  // namespace dissynth::io
