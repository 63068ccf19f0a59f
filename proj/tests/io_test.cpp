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


#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <random>

#include "benchmark.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "test_util.hpp"

namespace dissynth::io {
namespace {

GenConfig benchmarkConfig(std::uint64_t seed) {
  GenConfig g;
  g.experiment.plant = testing::benchmarkPlant();
  g.experiment.seed = seed;
  return g;
}

Json benchmarkProblemJson() {
  return toJson(generateProblem(benchmarkConfig(0)));
}

std::string reserialized(const Json& j) { return dump(Json::parse(dump(j))); }

// Expects ValidationError whose message names the field path.
void expectFieldError(const std::function<void()>& f, const std::string& path) {
  try {
    f();
    ADD_FAILURE() << "no error for " << path;
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'" + path + "'"), std::string::npos)
        << e.what();
  }
}

TEST(MatrixJsonTest, LosslessDoubles) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  Matrix m(7, 9);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = std::ldexp(mant(rng), expo(rng));
  }
  m(0, 0) = 0.1;
  m(0, 1) = 1.0 / 3.0;
  m(0, 2) = std::numeric_limits<double>::denorm_min();
  m(0, 3) = -0.0;
  const Matrix back = matrixFromJson(Json::parse(dump(matrixToJson(m))), "M", 7, 9);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    EXPECT_EQ(std::memcmp(&m.data()[i], &back.data()[i], sizeof(double)), 0) << i;
  }
}

TEST(MatrixJsonTest, RowMajorAndShapes) {
  const Matrix m = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
  EXPECT_EQ(matrixToJson(m).dump(), "[[1.0,2.0,3.0],[4.0,5.0,6.0]]");
  expectFieldError([&] { matrixFromJson(matrixToJson(m), "A", 3, 2); }, "A");
  expectFieldError([&] { matrixFromJson(matrixToJson(m), "A", 2, 2); }, "A[0]");
  expectFieldError([] { matrixFromJson(Json::parse("[[1, \"x\"]]"), "B", 1, 2); },
                   "B[0][1]");
  expectFieldError([] { matrixFromJson(Json::parse("7"), "C", 1, 1); }, "C");
  EXPECT_EQ(matrixFromJson(Json::parse("[]"), "F", 0, 3).rows(), 0);
}

TEST(ProblemFileTest, RoundTrip) {
  const Json j = benchmarkProblemJson();
  const ProblemFile pf = parseProblem(Json::parse(dump(j)));
  EXPECT_EQ(dump(toJson(pf)), dump(j));
  EXPECT_EQ(pf.dims.t, 30);
  EXPECT_TRUE(pf.wMinus.has_value());

  // Every supply and noise kind survives the trip.
  const std::vector<std::pair<std::string, std::string>> variants = {
      {R"({"kind": "passive"})", R"({"kind": "energyBound", "energy": 2.5})"},
      {R"({"kind": "l2gain", "gamma": 3})", R"({"kind": "normBound", "bound": 0})"},
      {R"({"kind": "custom", "inDim": 1, "S": [[1, 0.5], [0.5, -2]]})",
       R"({"kind": "normBound", "bound": 0.125})"},
      {R"({"kind": "stateStrictPassive", "epsilonMin": 0.001, "epsilonMax": 10,
           "maximizeEpsilon": false})",
       R"({"kind": "normBound", "bound": 1})"}};
  for (const auto& [supply, noise] : variants) {
    Json v = j;
    v["supply"] = Json::parse(supply);
    v["noise"] = Json::parse(noise);
    const Json once = toJson(parseProblem(v));
    EXPECT_EQ(reserialized(toJson(parseProblem(once))), dump(once)) << supply;
  }
  Json custom = j;
  Matrix phi = Matrix::Zero(31, 31);
  phi(0, 0) = 30.0;
  phi.bottomRightCorner(30, 30) = -Matrix::Identity(30, 30);
  custom["noise"] = {{"kind", "custom"}, {"Phi", matrixToJson(phi)}};
  const ProblemFile pc = parseProblem(custom);
  EXPECT_EQ(buildNoise(pc.noise, 1, 30).phi().matrix(), phi);
}

TEST(ProblemFileTest, FieldErrors) {
  const Json base = benchmarkProblemJson();
  auto mutated = [&](const std::function<void(Json&)>& f) {
    Json j = base;
    f(j);
    return j;
  };
  struct Case {
    std::function<void(Json&)> mutate;
    std::string path;
  };
  const std::vector<Case> cases = {
      {[](Json& j) { j["dims"].erase("n"); }, "dims.n"},
      {[](Json& j) { j["dims"]["T"] = -1; }, "dims.T"},
      {[](Json& j) { j["dims"]["T"] = 29; }, "U_minus[0]"},
      {[](Json& j) { j["X"][1].erase(0); }, "X[1]"},
      {[](Json& j) { j["E"][1][0] = "a"; }, "E[1][0]"},
      {[](Json& j) { j.erase("F"); }, "F"},
      {[](Json& j) { j.erase("D_s"); }, "D_s"},
      {[](Json& j) { j["mode"] = "partial"; }, "mode"},
      {[](Json& j) { j["seed"] = 1.5; }, "seed"},
      {[](Json& j) { j["supply"] = {{"kind", "l2gain"}, {"gamma", -1}}; },
       "supply.gamma"},
      {[](Json& j) { j["supply"] = {{"kind", "magic"}}; }, "supply.kind"},
      {[](Json& j) {
         j["supply"] = {{"kind", "custom"}, {"inDim", 1}, {"S", Json::parse("[[1, 2], [0, 1]]")}};
       },
       "supply.S"},
      {[](Json& j) { j["supply"] = {{"kind", "stateStrictPassive"}, {"epsilonMin", 0}}; },
       "supply.epsilonMin"},
      {[](Json& j) { j["noise"] = {{"kind", "normBound"}}; }, "noise.bound"},
      {[](Json& j) { j["noise"] = {{"kind", "custom"}, {"Phi", Json::parse("[[1]]")}}; },
       "noise.Phi"},
      {[](Json& j) { j["Y_minus"] = Json::parse("[[1, 2]]"); }, "Y_minus[0]"},
  };
  for (const Case& c : cases) {
    const Json j = mutated(c.mutate);
    expectFieldError([&] { parseProblem(j); }, c.path);
  }
  expectFieldError([] { parseProblem(Json::parse("[1]")); }, "<root>");
}

TEST(ProblemFileTest, ModeSelection) {
  ProblemFile pf = parseProblem(benchmarkProblemJson());
  const auto known = toProblem(pf);
  EXPECT_TRUE(known.outputs.has_value());
  EXPECT_FALSE(known.data.yMinus.has_value());
  const auto unknown = toProblem(pf, "unknown");
  EXPECT_FALSE(unknown.outputs.has_value());
  EXPECT_TRUE(unknown.data.yMinus.has_value());
  pf.yMinus.reset();
  expectFieldError([&] { toProblem(pf, "unknown"); }, "Y_minus");
  pf.cs.reset();
  pf.ds.reset();
  expectFieldError([&] { toProblem(pf, "known"); }, "C_s");
}

TEST(ResultFileTest, RoundTrip) {
  const auto prob = testing::benchmarkProblem(0, true);
  const synthesis::SynthesisResult r = synthesis::synthesize(prob);
  ASSERT_EQ(r.status, sdp::Status::Feasible);
  ResultFile rf = fromSynthesis(r, "known");
  const auto rep = synthesis::verifyClosedLoop(r, prob, 20, 3);
  rf.verification = VerificationSummary{rep.samples, rep.minEig, rep.worstSample,
                                        rep.pass, 3};
  const Json j = toJson(rf);
  const ResultFile back = parseResult(Json::parse(dump(j)));
  EXPECT_EQ(dump(toJson(back)), dump(j));
  EXPECT_EQ(back.k, r.k);
  EXPECT_EQ(back.p, r.p.matrix());
  EXPECT_EQ(back.alpha, r.alpha);
  EXPECT_EQ(back.epsilon, r.epsilon);

  // The parsed result verifies exactly like the original.
  const auto again = synthesis::verifyClosedLoop(toSynthesis(back), prob, 20, 3);
  EXPECT_EQ(again.minEig, rep.minEig);

  ResultFile hyp;
  hyp.status = "hypothesisFailure";
  hyp.hypothesis = "rank";
  hyp.diagnostics.rank = false;
  hyp.message = "rank: deficient";
  const Json hj = toJson(hyp);
  EXPECT_FALSE(hj.contains("K"));
  EXPECT_EQ(dump(toJson(parseResult(hj))), dump(hj));
}

TEST(ResultFileTest, FieldErrors) {
  ResultFile rf;
  rf.status = "feasible";
  rf.k = Matrix::Ones(1, 2);
  rf.p = Matrix::Identity(2, 2);
  Json j = toJson(rf);
  j["status"] = "great";
  expectFieldError([&] { parseResult(j); }, "status");
  j = toJson(rf);
  j["K"] = Json::parse("[[1, 2, 3]]");
  expectFieldError([&] { parseResult(j); }, "K[0]");
  j = toJson(rf);
  j.erase("dims");
  expectFieldError([&] { parseResult(j); }, "K");
  j = toJson(rf);
  j["diagnostics"]["rank"] = 3;
  expectFieldError([&] { parseResult(j); }, "diagnostics.rank");
}

TEST(GenConfigTest, DeterministicAndRechecked) {
  const std::string a = dump(toJson(generateProblem(benchmarkConfig(4))));
  const std::string b = dump(toJson(generateProblem(benchmarkConfig(4))));
  const std::string c = dump(toJson(generateProblem(benchmarkConfig(5))));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);

  const GenConfig g = benchmarkConfig(2);
  const Json gj = toJson(g);
  EXPECT_EQ(dump(toJson(parseGenConfig(Json::parse(dump(gj))))), dump(gj));
  EXPECT_EQ(dump(toJson(generateProblem(parseGenConfig(gj)))),
            dump(toJson(generateProblem(g))));

  // Noise in [-2, 0.5] needs the bound 2.
  GenConfig wide = benchmarkConfig(1);
  wide.experiment.noiseLow = -2.0;
  wide.experiment.noiseHigh = 0.5;
  const ProblemFile pf = generateProblem(wide);
  EXPECT_EQ(pf.noise.bound, 2.0);
  EXPECT_TRUE(buildNoise(pf.noise, 1, 30).admits(*pf.wMinus));
}

TEST(GenConfigTest, ZeroNoise) {
  GenConfig g = benchmarkConfig(3);
  g.experiment.noiseLow = 0.0;
  g.experiment.noiseHigh = 0.0;
  const ProblemFile pf = generateProblem(g);
  EXPECT_EQ(*pf.wMinus, Matrix::Zero(1, 30));
  EXPECT_EQ(pf.noise.bound, 0.0);
  const auto plant = testing::benchmarkPlant();
  Matrix ab(2, 3);
  ab << plant.a, plant.b;
  const auto prob = toProblem(pf);
  EXPECT_TRUE(qmi::zMembership(datamodel::buildNk(prob.data, prob.e, prob.noise),
                               ab.transpose()));
}

TEST(GenConfigTest, FieldErrors) {
  Json j = toJson(benchmarkConfig(0));
  j["plant"]["B"] = Json::parse("[[1, 2]]");
  expectFieldError([&] { parseGenConfig(j); }, "plant.B");
  j = toJson(benchmarkConfig(0));
  j["noise"] = {{"low", 1}, {"high", 0}};
  expectFieldError([&] { parseGenConfig(j); }, "noise.high");
  j = toJson(benchmarkConfig(0));
  j["samples"] = 0;
  expectFieldError([&] { parseGenConfig(j); }, "samples");
}

TEST(ModelAndSlemmaFileTest, RoundTripAndErrors) {
  const Json model = Json::parse(R"({"dims": {"n": 1, "m": 1, "p": 1},
      "A": [[0]], "B": [[1]], "C": [[1]], "D": [[0]],
      "supply": {"kind": "l2gain", "gamma": 1}})");
  const ModelFile mf = parseModel(model);
  EXPECT_EQ(dump(toJson(parseModel(toJson(mf)))), dump(toJson(mf)));
  EXPECT_FALSE(mf.strictStorage);
  Json bad = model;
  bad["supply"] = {{"kind", "stateStrictPassive"}};
  expectFieldError([&] { parseModel(bad); }, "supply.kind");

  const Json query = Json::parse(R"({"M": {"q": 1, "r": 1, "matrix": [[0.25, 0], [0, -1]]},
                                     "N": {"q": 1, "r": 1, "matrix": [[1, 0], [0, -1]]}})");
  const SlemmaFile sf = parseSlemma(query);
  EXPECT_EQ(dump(toJson(parseSlemma(toJson(sf)))), dump(toJson(sf)));
  Json asym = query;
  asym["M"]["matrix"] = Json::parse("[[0.25, 1], [0, -1]]");
  expectFieldError([&] { parseSlemma(asym); }, "M.matrix");
  Json split = query;
  split["N"] = {{"q", 2}, {"r", 0}, {"matrix", Json::parse("[[1, 0], [0, -1]]")}};
  expectFieldError([&] { parseSlemma(split); }, "N");
}

TEST(ReadFileTest, Errors) {
  EXPECT_THROW(readJsonFile("/nonexistent/file.json"), ValidationError);
}

}  // namespace
}  // namespace dissynth::io
