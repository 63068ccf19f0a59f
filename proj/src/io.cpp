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


#include "io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace dissynth::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("field '" + path + "': " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void requireObject(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
}

const Json& field(const Json& j, const std::string& path,
                  const std::string& key) {
  requireObject(j, path);
  const auto it = j.find(key);
  if (it == j.end()) fail(join(path, key), "missing");
  return *it;
}

const Json* optionalField(const Json& j, const std::string& path,
                          const std::string& key) {
  requireObject(j, path);
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const std::string& path) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double numberField(const Json& j, const std::string& path,
                   const std::string& key) {
  return number(field(j, path, key), join(path, key));
}

double numberOr(const Json& j, const std::string& path, const std::string& key,
                double fallback) {
  const Json* v = optionalField(j, path, key);
  return v ? number(*v, join(path, key)) : fallback;
}

std::uint64_t unsignedOf(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<std::int64_t>() < 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Eigen::Index dim(const Json& j, const std::string& path, const std::string& key,
                 bool positive) {
  const std::uint64_t v = unsignedOf(field(j, path, key), join(path, key));
  if (positive && v == 0) fail(join(path, key), "must be positive");
  if (v > 100000) fail(join(path, key), "too large");
  return static_cast<Eigen::Index>(v);
}

bool boolOr(const Json& j, const std::string& path, const std::string& key,
            bool fallback) {
  const Json* v = optionalField(j, path, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(join(path, key), "expected a boolean");
  return v->get<bool>();
}

std::string stringField(const Json& j, const std::string& path,
                        const std::string& key) {
  const Json& v = field(j, path, key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Matrix matrixField(const Json& j, const std::string& path,
                   const std::string& key, Eigen::Index rows,
                   Eigen::Index cols) {
  return matrixFromJson(field(j, path, key), join(path, key), rows, cols);
}

std::optional<Matrix> optionalMatrix(const Json& j, const std::string& path,
                                     const std::string& key, Eigen::Index rows,
                                     Eigen::Index cols) {
  const Json* v = optionalField(j, path, key);
  if (!v) return std::nullopt;
  return matrixFromJson(*v, join(path, key), rows, cols);
}

std::string checkMode(const std::string& mode, const std::string& path) {
  if (mode != "known" && mode != "unknown") {
    fail(path, "expected \"known\" or \"unknown\", got \"" + mode + "\"");
  }
  return mode;
}

SupplyDesc parseSupply(const Json& j, const std::string& path, Eigen::Index d,
                       Eigen::Index p) {
  SupplyDesc s;
  s.kind = stringField(j, path, "kind");
  if (s.kind == "passive") {
    if (d != p) fail(join(path, "kind"), "passive supply needs d == p");
  } else if (s.kind == "l2gain") {
    s.gamma = numberField(j, path, "gamma");
    if (!(s.gamma > 0.0)) fail(join(path, "gamma"), "must be positive");
  } else if (s.kind == "stateStrictPassive") {
    s.strict.epsilonMin = numberOr(j, path, "epsilonMin", s.strict.epsilonMin);
    s.strict.epsilonMax = numberOr(j, path, "epsilonMax", s.strict.epsilonMax);
    s.strict.maximizeEpsilon =
        boolOr(j, path, "maximizeEpsilon", s.strict.maximizeEpsilon);
    if (!(s.strict.epsilonMin > 0.0)) {
      fail(join(path, "epsilonMin"), "must be positive");
    }
    if (!(s.strict.epsilonMax >= s.strict.epsilonMin)) {
      fail(join(path, "epsilonMax"), "must be at least epsilonMin");
    }
    if (d != p) fail(join(path, "kind"), "state-strict passivity needs d == p");
  } else if (s.kind == "custom") {
    s.inDim = dim(j, path, "inDim", false);
    if (s.inDim != d) fail(join(path, "inDim"), "must equal the input dimension");
    s.s = matrixField(j, path, "S", d + p, d + p);
    if ((s.s - s.s.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * std::max(1.0, s.s.cwiseAbs().maxCoeff())) {
      fail(join(path, "S"), "not symmetric");
    }
  } else {
    fail(join(path, "kind"), "unknown supply kind \"" + s.kind + "\"");
  }
  return s;
}

Json supplyJson(const SupplyDesc& s) {
  Json j;
  j["kind"] = s.kind;
  if (s.kind == "l2gain") j["gamma"] = s.gamma;
  if (s.kind == "stateStrictPassive") {
    j["epsilonMin"] = s.strict.epsilonMin;
    j["epsilonMax"] = s.strict.epsilonMax;
    j["maximizeEpsilon"] = s.strict.maximizeEpsilon;
  }
  if (s.kind == "custom") {
    j["inDim"] = s.inDim;
    j["S"] = matrixToJson(s.s);
  }
  return j;
}

NoiseDesc parseNoise(const Json& j, const std::string& path, Eigen::Index d,
                     Eigen::Index t) {
  NoiseDesc nd;
  nd.kind = stringField(j, path, "kind");
  if (nd.kind == "normBound") {
    nd.bound = numberField(j, path, "bound");
    if (!(nd.bound >= 0.0)) fail(join(path, "bound"), "must be non-negative");
  } else if (nd.kind == "energyBound") {
    nd.energy = numberField(j, path, "energy");
    if (!(nd.energy >= 0.0)) fail(join(path, "energy"), "must be non-negative");
  } else if (nd.kind == "custom") {
    nd.phi = matrixField(j, path, "Phi", d + t, d + t);
    if ((nd.phi - nd.phi.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * std::max(1.0, nd.phi.cwiseAbs().maxCoeff())) {
      fail(join(path, "Phi"), "not symmetric");
    }
  } else {
    fail(join(path, "kind"), "unknown noise kind \"" + nd.kind + "\"");
  }
  return nd;
}

Json noiseJson(const NoiseDesc& nd) {
  Json j;
  j["kind"] = nd.kind;
  if (nd.kind == "normBound") j["bound"] = nd.bound;
  if (nd.kind == "energyBound") j["energy"] = nd.energy;
  if (nd.kind == "custom") j["Phi"] = matrixToJson(nd.phi);
  return j;
}

Json formJson(const PartitionedForm& f) {
  Json j;
  j["q"] = f.q();
  j["r"] = f.r();
  j["matrix"] = matrixToJson(f.matrix());
  return j;
}

PartitionedForm parseForm(const Json& j, const std::string& path) {
  const Eigen::Index q = dim(j, path, "q", true);
  const Eigen::Index r = dim(j, path, "r", false);
  const Matrix m = matrixField(j, path, "matrix", q + r, q + r);
  try {
    return PartitionedForm(SymMatrix(m), q, r);
  } catch (const Error& e) {
    fail(join(path, "matrix"), e.what());
  }
}

Json optionalBool(const std::optional<bool>& b) {
  return b ? Json(*b) : Json(nullptr);
}

std::optional<bool> parseOptionalBool(const Json& j, const std::string& path,
                                      const std::string& key) {
  const Json* v = optionalField(j, path, key);
  if (!v) return std::nullopt;
  if (!v->is_boolean()) fail(join(path, key), "expected a boolean or null");
  return v->get<bool>();
}

}  // namespace

Json matrixToJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(num(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrixFromJson(const Json& j, const std::string& path, Eigen::Index rows,
                      Eigen::Index cols) {
  const std::string shape =
      std::to_string(rows) + "x" + std::to_string(cols);
  if (!j.is_array()) fail(path, "expected a " + shape + " array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows) {
    fail(path, "expected " + std::to_string(rows) + " rows (" + shape +
                   "), got " + std::to_string(j.size()));
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(rp, "expected " + std::to_string(cols) + " columns (" + shape + ")");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) fail(rp + "[" + std::to_string(k) + "]", "expected a number");
      m(i, k) = v.get<double>();
      if (!std::isfinite(m(i, k))) fail(rp + "[" + std::to_string(k) + "]", "not finite");
    }
  }
  return m;
}

ProblemFile parseProblem(const Json& j) {
  ProblemFile pf;
  const Json& dj = field(j, "", "dims");
  Dims& d = pf.dims;
  d.n = dim(dj, "dims", "n", true);
  d.m = dim(dj, "dims", "m", true);
  d.p = dim(dj, "dims", "p", false);
  d.d = dim(dj, "dims", "d", true);
  d.t = dim(dj, "dims", "T", true);
  if (const Json* v = optionalField(j, "", "mode")) {
    if (!v->is_string()) fail("mode", "expected a string");
    pf.mode = checkMode(v->get<std::string>(), "mode");
  }
  if (const Json* v = optionalField(j, "", "seed")) pf.seed = unsignedOf(*v, "seed");
  pf.e = matrixField(j, "", "E", d.n, d.d);
  pf.f = matrixField(j, "", "F", d.p, d.d);
  pf.cs = optionalMatrix(j, "", "C_s", d.p, d.n);
  pf.ds = optionalMatrix(j, "", "D_s", d.p, d.m);
  if (pf.cs.has_value() != pf.ds.has_value()) {
    fail(pf.cs ? "D_s" : "C_s", "C_s and D_s must be given together");
  }
  pf.uMinus = matrixField(j, "", "U_minus", d.m, d.t);
  pf.x = matrixField(j, "", "X", d.n, d.t + 1);
  pf.yMinus = optionalMatrix(j, "", "Y_minus", d.p, d.t);
  pf.wMinus = optionalMatrix(j, "", "W_minus", d.d, d.t);
  pf.supply = parseSupply(field(j, "", "supply"), "supply", d.d, d.p);
  pf.noise = parseNoise(field(j, "", "noise"), "noise", d.d, d.t);
  return pf;
}

Json toJson(const ProblemFile& pf) {
  Json j;
  j["dims"] = {{"n", pf.dims.n}, {"m", pf.dims.m}, {"p", pf.dims.p},
               {"d", pf.dims.d}, {"T", pf.dims.t}};
  j["mode"] = pf.mode;
  j["seed"] = pf.seed;
  j["E"] = matrixToJson(pf.e);
  j["F"] = matrixToJson(pf.f);
  if (pf.cs) j["C_s"] = matrixToJson(*pf.cs);
  if (pf.ds) j["D_s"] = matrixToJson(*pf.ds);
  j["U_minus"] = matrixToJson(pf.uMinus);
  j["X"] = matrixToJson(pf.x);
  if (pf.yMinus) j["Y_minus"] = matrixToJson(*pf.yMinus);
  if (pf.wMinus) j["W_minus"] = matrixToJson(*pf.wMinus);
  j["supply"] = supplyJson(pf.supply);
  j["noise"] = noiseJson(pf.noise);
  return j;
}

dissipativity::SupplyRate buildSupply(const SupplyDesc& s, Eigen::Index d,
                                      Eigen::Index p) {
  if (s.kind == "passive") return dissipativity::passiveSupply(d);
  if (s.kind == "l2gain") return dissipativity::l2GainSupply(d, p, s.gamma);
  if (s.kind == "custom") {
    return dissipativity::customSupply(SymMatrix::symmetrize(s.s), s.inDim);
  }
  fail("supply.kind", "\"" + s.kind + "\" is not a fixed supply rate");
}

datamodel::NoiseModel buildNoise(const NoiseDesc& nd, Eigen::Index d,
                                 Eigen::Index t) {
  if (nd.kind == "normBound") return datamodel::NoiseModel::normBound(d, t, nd.bound);
  if (nd.kind == "energyBound") {
    return datamodel::NoiseModel::energyBound(d, t, nd.energy);
  }
  return datamodel::NoiseModel(
      PartitionedForm(SymMatrix::symmetrize(nd.phi), d, t));
}

synthesis::SynthesisProblem toProblem(const ProblemFile& pf,
                                      const std::string& mode) {
  const std::string m = checkMode(mode.empty() ? pf.mode : mode, "mode");
  datamodel::ExperimentData data{pf.uMinus, pf.x, std::nullopt};
  std::optional<synthesis::KnownOutputs> outputs;
  if (m == "unknown") {
    if (!pf.yMinus) fail("Y_minus", "required in unknown mode");
    data.yMinus = *pf.yMinus;
  } else {
    if (!pf.cs) fail("C_s", "required in known mode");
    outputs = synthesis::KnownOutputs{*pf.cs, *pf.ds};
  }
  synthesis::SupplySpec supply =
      pf.supply.kind == "stateStrictPassive"
          ? synthesis::SupplySpec(pf.supply.strict)
          : synthesis::SupplySpec(buildSupply(pf.supply, pf.dims.d, pf.dims.p));
  return synthesis::SynthesisProblem{
      std::move(data), buildNoise(pf.noise, pf.dims.d, pf.dims.t), pf.e, pf.f,
      std::move(supply), std::move(outputs)};
}

ResultFile fromSynthesis(const synthesis::SynthesisResult& r,
                         const std::string& mode) {
  ResultFile rf;
  rf.status = sdp::toString(r.status);
  rf.mode = mode;
  if (r.branch) rf.branch = synthesis::toString(*r.branch);
  rf.k = r.k;
  rf.p = r.p.matrix();
  rf.alpha = r.alpha;
  rf.epsilon = r.epsilon;
  rf.feasibilityMargin = r.feasibilityMargin;
  rf.recheckMinEig = r.recheckMinEig;
  rf.certificateBound = r.certificateBound;
  rf.diagnostics = r.diagnostics;
  rf.notes = r.notes;
  rf.message = r.message;
  return rf;
}

synthesis::SynthesisResult toSynthesis(const ResultFile& rf) {
  synthesis::SynthesisResult r;
  if (rf.status == "feasible") r.status = sdp::Status::Feasible;
  if (rf.status == "infeasible") r.status = sdp::Status::Infeasible;
  if (rf.branch == "unknownOutput") r.branch = synthesis::Branch::UnknownOutput;
  if (rf.branch == "knownOutputStrict") r.branch = synthesis::Branch::KnownOutputStrict;
  if (rf.branch == "knownOutputDegenerate") {
    r.branch = synthesis::Branch::KnownOutputDegenerate;
  }
  r.k = rf.k;
  r.p = SymMatrix::symmetrize(rf.p);
  r.alpha = rf.alpha;
  r.epsilon = rf.epsilon;
  r.feasibilityMargin = rf.feasibilityMargin;
  r.recheckMinEig = rf.recheckMinEig;
  r.certificateBound = rf.certificateBound;
  r.diagnostics = rf.diagnostics;
  r.notes = rf.notes;
  r.message = rf.message;
  return r;
}

ResultFile parseResult(const Json& j) {
  ResultFile rf;
  rf.status = stringField(j, "", "status");
  if (rf.status != "feasible" && rf.status != "infeasible" &&
      rf.status != "undecided" && rf.status != "hypothesisFailure") {
    fail("status", "unknown status \"" + rf.status + "\"");
  }
  if (const Json* v = optionalField(j, "", "mode")) {
    if (!v->is_string()) fail("mode", "expected a string");
    rf.mode = checkMode(v->get<std::string>(), "mode");
  }
  if (const Json* v = optionalField(j, "", "branch")) {
    if (!v->is_string()) fail("branch", "expected a string");
    rf.branch = v->get<std::string>();
    if (*rf.branch != "unknownOutput" && *rf.branch != "knownOutputStrict" &&
        *rf.branch != "knownOutputDegenerate") {
      fail("branch", "unknown branch \"" + *rf.branch + "\"");
    }
  }
  if (const Json* v = optionalField(j, "", "hypothesis")) {
    if (!v->is_string()) fail("hypothesis", "expected a string");
    rf.hypothesis = v->get<std::string>();
  }
  if (const Json* dj = optionalField(j, "", "dims")) {
    const Eigen::Index n = dim(*dj, "dims", "n", false);
    const Eigen::Index m = dim(*dj, "dims", "m", false);
    rf.k = matrixField(j, "", "K", m, n);
    rf.p = matrixField(j, "", "P", n, n);
  }
  if (rf.status == "feasible" && rf.k.size() == 0) fail("K", "missing");
  rf.alpha = numberOr(j, "", "alpha", 0.0);
  if (const Json* v = optionalField(j, "", "epsilon")) rf.epsilon = number(*v, "epsilon");
  rf.feasibilityMargin = numberOr(j, "", "feasibilityMargin", 0.0);
  rf.recheckMinEig = numberOr(j, "", "recheckMinEig", 0.0);
  if (const Json* v = optionalField(j, "", "certificateBound")) {
    rf.certificateBound = number(*v, "certificateBound");
  }
  if (const Json* v = optionalField(j, "", "verification")) {
    VerificationSummary vs;
    vs.samples = static_cast<int>(dim(*v, "verification", "samples", false));
    vs.minEig = numberField(*v, "verification", "minEig");
    if (const Json* w = optionalField(*v, "verification", "worstSample")) {
      if (!w->is_number_integer()) fail("verification.worstSample", "expected an integer");
      vs.worstSample = w->get<int>();
    }
    vs.pass = boolOr(*v, "verification", "pass", false);
    if (const Json* s = optionalField(*v, "verification", "seed")) {
      vs.seed = unsignedOf(*s, "verification.seed");
    }
    rf.verification = vs;
  }
  if (const Json* v = optionalField(j, "", "diagnostics")) {
    const std::string dp = "diagnostics";
    rf.diagnostics.rank = parseOptionalBool(*v, dp, "rank");
    rf.diagnostics.positiveEigenvalue = parseOptionalBool(*v, dp, "positiveEigenvalue");
    rf.diagnostics.piClass = parseOptionalBool(*v, dp, "piClass");
    rf.diagnostics.interiorSufficient = parseOptionalBool(*v, dp, "interiorSufficient");
    rf.diagnostics.supplyInertia = boolOr(*v, dp, "supplyInertia", false);
  }
  if (const Json* v = optionalField(j, "", "notes")) {
    if (!v->is_array()) fail("notes", "expected an array of strings");
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string()) fail("notes[" + std::to_string(i) + "]", "expected a string");
      rf.notes.push_back((*v)[i].get<std::string>());
    }
  }
  if (const Json* v = optionalField(j, "", "message")) {
    if (!v->is_string()) fail("message", "expected a string");
    rf.message = v->get<std::string>();
  }
  return rf;
}

Json toJson(const ResultFile& rf) {
  Json j;
  j["status"] = rf.status;
  if (!rf.mode.empty()) j["mode"] = rf.mode;
  if (rf.branch) j["branch"] = *rf.branch;
  if (rf.hypothesis) j["hypothesis"] = *rf.hypothesis;
  if (rf.k.size() > 0 || rf.p.size() > 0) {
    j["dims"] = {{"n", rf.p.rows()}, {"m", rf.k.rows()}};
    j["K"] = matrixToJson(rf.k);
    j["P"] = matrixToJson(rf.p);
  }
  j["alpha"] = num(rf.alpha);
  if (rf.epsilon) j["epsilon"] = num(*rf.epsilon);
  j["feasibilityMargin"] = num(rf.feasibilityMargin);
  j["recheckMinEig"] = num(rf.recheckMinEig);
  if (rf.certificateBound) j["certificateBound"] = num(*rf.certificateBound);
  if (rf.verification) {
    const VerificationSummary& v = *rf.verification;
    j["verification"] = {{"samples", v.samples}, {"minEig", num(v.minEig)},
                         {"worstSample", v.worstSample}, {"pass", v.pass},
                         {"seed", v.seed}};
  }
  j["diagnostics"] = {
      {"rank", optionalBool(rf.diagnostics.rank)},
      {"positiveEigenvalue", optionalBool(rf.diagnostics.positiveEigenvalue)},
      {"piClass", optionalBool(rf.diagnostics.piClass)},
      {"interiorSufficient", optionalBool(rf.diagnostics.interiorSufficient)},
      {"supplyInertia", rf.diagnostics.supplyInertia}};
  j["notes"] = rf.notes;
  j["message"] = rf.message;
  return j;
}

namespace {

datamodel::PlantModel parsePlant(const Json& j, const std::string& path,
                                 Eigen::Index n, Eigen::Index m, Eigen::Index p,
                                 Eigen::Index d) {
  datamodel::PlantModel plant;
  plant.a = matrixField(j, path, "A", n, n);
  plant.b = matrixField(j, path, "B", n, m);
  plant.c = matrixField(j, path, "C", p, n);
  plant.d = matrixField(j, path, "D", p, m);
  if (d > 0) {
    plant.e = matrixField(j, path, "E", n, d);
    plant.f = matrixField(j, path, "F", p, d);
  }
  return plant;
}

}  // namespace

GenConfig parseGenConfig(const Json& j) {
  GenConfig g;
  const Json& dj = field(j, "", "dims");
  const Eigen::Index n = dim(dj, "dims", "n", true);
  const Eigen::Index m = dim(dj, "dims", "m", true);
  const Eigen::Index p = dim(dj, "dims", "p", false);
  const Eigen::Index d = dim(dj, "dims", "d", true);
  datamodel::ExperimentConfig& cfg = g.experiment;
  cfg.plant = parsePlant(field(j, "", "plant"), "plant", n, m, p, d);
  if (optionalField(j, "", "samples")) cfg.samples = dim(j, "", "samples", true);
  cfg.inputScale = numberOr(j, "", "inputScale", cfg.inputScale);
  cfg.x0Scale = numberOr(j, "", "x0Scale", cfg.x0Scale);
  if (const Json* nj = optionalField(j, "", "noise")) {
    cfg.noiseLow = numberOr(*nj, "noise", "low", cfg.noiseLow);
    cfg.noiseHigh = numberOr(*nj, "noise", "high", cfg.noiseHigh);
    if (!(cfg.noiseHigh >= cfg.noiseLow)) fail("noise.high", "must be at least noise.low");
  }
  if (const Json* v = optionalField(j, "", "seed")) cfg.seed = unsignedOf(*v, "seed");
  if (const Json* v = optionalField(j, "", "mode")) {
    if (!v->is_string()) fail("mode", "expected a string");
    g.mode = checkMode(v->get<std::string>(), "mode");
  }
  if (const Json* v = optionalField(j, "", "supply")) {
    g.supply = parseSupply(*v, "supply", d, p);
  } else if (d != p) {
    fail("supply", "required when d != p");
  }
  return g;
}

Json toJson(const GenConfig& g) {
  const datamodel::PlantModel& pl = g.experiment.plant;
  Json j;
  j["dims"] = {{"n", pl.n()}, {"m", pl.m()}, {"p", pl.p()}, {"d", pl.noiseDim()}};
  j["plant"] = {{"A", matrixToJson(pl.a)}, {"B", matrixToJson(pl.b)},
                {"C", matrixToJson(pl.c)}, {"D", matrixToJson(pl.d)},
                {"E", matrixToJson(pl.e)}, {"F", matrixToJson(pl.f)}};
  j["samples"] = g.experiment.samples;
  j["inputScale"] = g.experiment.inputScale;
  j["x0Scale"] = g.experiment.x0Scale;
  j["noise"] = {{"low", g.experiment.noiseLow}, {"high", g.experiment.noiseHigh}};
  j["seed"] = g.experiment.seed;
  j["mode"] = g.mode;
  j["supply"] = supplyJson(g.supply);
  return j;
}

ProblemFile generateProblem(const GenConfig& g) {
  const datamodel::Experiment ex = datamodel::generateExperiment(g.experiment);
  const datamodel::PlantModel& pl = g.experiment.plant;
  ProblemFile pf;
  pf.dims = Dims{pl.n(), pl.m(), pl.p(), pl.noiseDim(), g.experiment.samples};
  pf.mode = g.mode;
  pf.seed = g.experiment.seed;
  pf.e = pl.e;
  pf.f = pl.f;
  pf.cs = pl.c;
  pf.ds = pl.d;
  pf.uMinus = ex.data.uMinus;
  pf.x = ex.data.x;
  pf.yMinus = ex.data.yMinus;
  pf.wMinus = ex.noise;
  pf.supply = g.supply;
  pf.noise.kind = "normBound";
  pf.noise.bound =
      std::max(std::abs(g.experiment.noiseLow), std::abs(g.experiment.noiseHigh));
  const auto model = buildNoise(pf.noise, pf.dims.d, pf.dims.t);
  if (!model.admits(ex.noise)) {
    fail("noise", "generated noise violates the declared bound");
  }
  return pf;
}

ModelFile parseModel(const Json& j) {
  ModelFile mf;
  const Json& dj = field(j, "", "dims");
  const Eigen::Index n = dim(dj, "dims", "n", true);
  const Eigen::Index m = dim(dj, "dims", "m", true);
  const Eigen::Index p = dim(dj, "dims", "p", true);
  mf.plant = parsePlant(j, "", n, m, p, 0);
  mf.supply = parseSupply(field(j, "", "supply"), "supply", m, p);
  if (mf.supply.kind == "stateStrictPassive") {
    fail("supply.kind", "stateStrictPassive is only available for synthesis");
  }
  mf.strictStorage = boolOr(j, "", "strictStorage", false);
  return mf;
}

Json toJson(const ModelFile& mf) {
  const datamodel::PlantModel& pl = mf.plant;
  Json j;
  j["dims"] = {{"n", pl.n()}, {"m", pl.m()}, {"p", pl.p()}};
  j["A"] = matrixToJson(pl.a);
  j["B"] = matrixToJson(pl.b);
  j["C"] = matrixToJson(pl.c);
  j["D"] = matrixToJson(pl.d);
  j["supply"] = supplyJson(mf.supply);
  j["strictStorage"] = mf.strictStorage;
  return j;
}

Json toJson(const dissipativity::AnalysisResult& r) {
  Json j;
  j["status"] = sdp::toString(r.status);
  if (r.p) j["P"] = matrixToJson(r.p->matrix());
  j["margin"] = num(r.margin);
  j["recheckMinEig"] = num(r.recheckMinEig);
  if (r.certificateBound) j["certificateBound"] = num(*r.certificateBound);
  j["message"] = r.message;
  return j;
}

SlemmaFile parseSlemma(const Json& j) {
  SlemmaFile sf{parseForm(field(j, "", "M"), "M"), parseForm(field(j, "", "N"), "N")};
  if (sf.m.q() != sf.n.q() || sf.m.r() != sf.n.r()) {
    fail("N", "partition must match M");
  }
  return sf;
}

Json toJson(const SlemmaFile& sf) {
  Json j;
  j["M"] = formJson(sf.m);
  j["N"] = formJson(sf.n);
  return j;
}

Json toJson(const qmi::SlemmaOutcome& o) {
  Json j;
  j["status"] = o.feasible ? "feasible" : "infeasible";
  j["alpha"] = num(o.best.alpha);
  j["residualMinEig"] = num(o.best.residualMinEig);
  return j;
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

namespace {

bool isScalar(const Json& j) { return !j.is_array() && !j.is_object(); }

bool isFlat(const Json& j) {
  for (const Json& v : j) {
    if (!isScalar(v)) return false;
  }
  return true;
}

// Two-space indentation with numeric rows kept on one line.
void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      os << pad << Json(it.key()).dump() << ": ";
      write(os, it.value(), indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
  } else if (j.is_array() && !isFlat(j)) {
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad;
      write(os, j[i], indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << std::string(static_cast<std::size_t>(indent), ' ') << "]";
  } else if (j.is_array()) {
    os << "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << (i ? ", " : "") << j[i].dump();
    }
    os << "]";
  } else {
    os << j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

}  // namespace dissynth::io
