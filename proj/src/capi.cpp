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


#include "dissynth/dissynth.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "io.hpp"

namespace {

using namespace dissynth;

thread_local std::string lastError;

dissynth_status setError(dissynth_status s, const std::string& msg) {
  lastError = msg;
  return s;
}

char* copyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dissynth_status fromStatus(sdp::Status s) {
  switch (s) {
    case sdp::Status::Feasible:
      return DISSYNTH_OK;
    case sdp::Status::Infeasible:
      return DISSYNTH_INFEASIBLE;
    case sdp::Status::Undecided:
      return DISSYNTH_UNDECIDED;
  }
  return DISSYNTH_UNDECIDED;
}

// Runs f and turns library exceptions into status codes.
template <typename F>
dissynth_status guarded(F&& f) {
  lastError.clear();
  try {
    return f();
  } catch (const HypothesisError& e) {
    return setError(DISSYNTH_HYPOTHESIS, e.what());
  } catch (const std::exception& e) {
    return setError(DISSYNTH_ERROR, e.what());
  }
}

io::Json parseText(const char* json) {
  if (!json) throw ValidationError("null JSON text");
  try {
    return io::Json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

double spectralNorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

std::string verdictOf(const std::optional<bool>& b) {
  return b ? (*b ? "ok" : "FAILED") : "not checked";
}

}  // namespace

struct dissynth_problem {
  io::ProblemFile file;
};

struct dissynth_result {
  io::ResultFile file;
};

extern "C" {

const char* dissynth_version(void) { return "0.1.0"; }

const char* dissynth_last_error(void) { return lastError.c_str(); }

void dissynth_string_free(char* s) { std::free(s); }

dissynth_status dissynth_problem_parse(const char* json, dissynth_problem** out) {
  if (!out) return setError(DISSYNTH_ERROR, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new dissynth_problem{io::parseProblem(parseText(json))};
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_problem_load(const char* path, dissynth_problem** out) {
  if (!out || !path) return setError(DISSYNTH_ERROR, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new dissynth_problem{io::parseProblem(io::readJsonFile(path))};
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_problem_to_json(const dissynth_problem* p, char** json) {
  if (!p || !json) return setError(DISSYNTH_ERROR, "null argument");
  return guarded([&] {
    *json = copyString(io::dump(io::toJson(p->file)));
    return DISSYNTH_OK;
  });
}

uint64_t dissynth_problem_seed(const dissynth_problem* p) {
  return p ? p->file.seed : 0;
}

void dissynth_problem_free(dissynth_problem* p) { delete p; }

dissynth_status dissynth_synthesize(const dissynth_problem* p, const char* mode,
                                    dissynth_result** out) {
  if (!p || !out) return setError(DISSYNTH_ERROR, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string m = mode ? mode : p->file.mode;
    const synthesis::SynthesisProblem prob = io::toProblem(p->file, m);
    try {
      const synthesis::SynthesisResult r = synthesis::synthesize(prob);
      *out = new dissynth_result{io::fromSynthesis(r, m)};
      if (r.status != sdp::Status::Feasible) lastError = r.message;
      return fromStatus(r.status);
    } catch (const HypothesisError& e) {
      io::ResultFile rf;
      rf.status = "hypothesisFailure";
      rf.mode = m;
      rf.hypothesis = e.hypothesis();
      rf.message = e.what();
      rf.diagnostics.supplyInertia = e.hypothesis() != "supply inertia";
      if (e.hypothesis() == "rank") rf.diagnostics.rank = false;
      if (e.hypothesis() == "positive eigenvalue") {
        rf.diagnostics.positiveEigenvalue = false;
      }
      if (e.hypothesis() == "Pi-class") rf.diagnostics.piClass = false;
      *out = new dissynth_result{std::move(rf)};
      return setError(DISSYNTH_HYPOTHESIS, e.what());
    }
  });
}

dissynth_status dissynth_verify(const dissynth_problem* p, dissynth_result* r,
                                int samples, uint64_t seed, double tol) {
  if (!p || !r) return setError(DISSYNTH_ERROR, "null argument");
  return guarded([&] {
    if (r->file.status != "feasible") {
      throw ValidationError("only feasible results can be verified");
    }
    if (samples < 1) throw ValidationError("samples must be positive");
    const std::string m = r->file.mode.empty() ? p->file.mode : r->file.mode;
    const synthesis::SynthesisProblem prob = io::toProblem(p->file, m);
    const synthesis::SynthesisResult sr = io::toSynthesis(r->file);
    if (sr.k.rows() != prob.data.m() || sr.k.cols() != prob.data.n()) {
      throw ValidationError("field 'K': shape does not match the problem");
    }
    const synthesis::VerificationReport rep =
        synthesis::verifyClosedLoop(sr, prob, samples, seed, tol);
    r->file.verification =
        io::VerificationSummary{rep.samples, rep.minEig, rep.worstSample,
                                rep.pass, seed};
    if (!rep.pass) {
      return setError(DISSYNTH_INFEASIBLE,
                      "closed loop fails for sample " +
                          std::to_string(rep.worstSample));
    }
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_result_parse(const char* json, dissynth_result** out) {
  if (!out) return setError(DISSYNTH_ERROR, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new dissynth_result{io::parseResult(parseText(json))};
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_result_load(const char* path, dissynth_result** out) {
  if (!out || !path) return setError(DISSYNTH_ERROR, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new dissynth_result{io::parseResult(io::readJsonFile(path))};
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_result_to_json(const dissynth_result* r, char** json) {
  if (!r || !json) return setError(DISSYNTH_ERROR, "null argument");
  return guarded([&] {
    *json = copyString(io::dump(io::toJson(r->file)));
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_result_status(const dissynth_result* r) {
  if (!r) return DISSYNTH_ERROR;
  const std::string& s = r->file.status;
  if (s == "feasible") return DISSYNTH_OK;
  if (s == "infeasible") return DISSYNTH_INFEASIBLE;
  if (s == "hypothesisFailure") return DISSYNTH_HYPOTHESIS;
  return DISSYNTH_UNDECIDED;
}

dissynth_status dissynth_result_matrix(const dissynth_result* r,
                                       const char* name, double* data,
                                       size_t capacity, size_t* rows,
                                       size_t* cols) {
  if (!r || !name) return setError(DISSYNTH_ERROR, "null argument");
  const std::string n = name;
  if (n != "K" && n != "P") return setError(DISSYNTH_ERROR, "unknown matrix " + n);
  const Matrix& m = n == "K" ? r->file.k : r->file.p;
  if (rows) *rows = static_cast<size_t>(m.rows());
  if (cols) *cols = static_cast<size_t>(m.cols());
  if (!data) return DISSYNTH_OK;
  if (capacity < static_cast<size_t>(m.size())) {
    return setError(DISSYNTH_ERROR, "buffer too small for " + n);
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) *data++ = m(i, k);
  }
  return DISSYNTH_OK;
}

dissynth_status dissynth_result_scalar(const dissynth_result* r,
                                       const char* name, double* value) {
  if (!r || !name || !value) return setError(DISSYNTH_ERROR, "null argument");
  const std::string n = name;
  if (n == "alpha") {
    *value = r->file.alpha;
  } else if (n == "epsilon") {
    if (!r->file.epsilon) return setError(DISSYNTH_ERROR, "result has no epsilon");
    *value = *r->file.epsilon;
  } else if (n == "feasibilityMargin") {
    *value = r->file.feasibilityMargin;
  } else if (n == "recheckMinEig") {
    *value = r->file.recheckMinEig;
  } else {
    return setError(DISSYNTH_ERROR, "unknown scalar " + n);
  }
  return DISSYNTH_OK;
}

dissynth_status dissynth_result_summary(const dissynth_result* r, char** text) {
  if (!r || !text) return setError(DISSYNTH_ERROR, "null argument");
  return guarded([&] {
    const io::ResultFile& f = r->file;
    std::ostringstream os;
    os << "status: " << f.status << "\n";
    if (f.hypothesis) os << "failed hypothesis: " << *f.hypothesis << "\n";
    if (f.branch) os << "branch: " << *f.branch << "\n";
    if (f.status == "feasible") {
      os << "feasibility margin: " << f.feasibilityMargin << "\n";
      os << "|K|: " << spectralNorm(f.k) << "\n";
      os << "K: " << f.k.format(Eigen::IOFormat(6, 0, " ", "; ", "", "", "[", "]"))
         << "\n";
      const double pmin =
          f.p.size() == 0 ? 0.0
                          : Eigen::SelfAdjointEigenSolver<Matrix>(
                                0.5 * (f.p + f.p.transpose()),
                                Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
      os << "lambda_min(P): " << pmin << "\n";
      os << "alpha: " << f.alpha << "\n";
      if (f.epsilon) os << "epsilon: " << *f.epsilon << "\n";
    }
    if (f.certificateBound) {
      os << "infeasibility certificate bound: " << *f.certificateBound << "\n";
    }
    if (f.verification) {
      os << "verification: " << (f.verification->pass ? "pass" : "FAIL") << " ("
         << f.verification->samples << " samples, min eig "
         << f.verification->minEig << ")\n";
    }
    os << "hypotheses: supply inertia "
       << (f.diagnostics.supplyInertia ? "ok" : "FAILED") << ", rank "
       << verdictOf(f.diagnostics.rank) << ", positive eigenvalue "
       << verdictOf(f.diagnostics.positiveEigenvalue) << ", Pi-class "
       << verdictOf(f.diagnostics.piClass) << ", interior (sufficient check) "
       << (f.diagnostics.interiorSufficient
               ? (*f.diagnostics.interiorSufficient ? "ok" : "not shown (warning)")
               : "not checked")
       << "\n";
    for (const std::string& note : f.notes) os << "note: " << note << "\n";
    if (!f.message.empty()) os << "message: " << f.message << "\n";
    *text = copyString(os.str());
    return DISSYNTH_OK;
  });
}

void dissynth_result_free(dissynth_result* r) { delete r; }

dissynth_status dissynth_generate(const char* config_json, const uint64_t* seed,
                                  char** problem_json) {
  if (!problem_json) return setError(DISSYNTH_ERROR, "null output pointer");
  return guarded([&] {
    io::GenConfig g = io::parseGenConfig(parseText(config_json));
    if (seed) g.experiment.seed = *seed;
    *problem_json = copyString(io::dump(io::toJson(io::generateProblem(g))));
    return DISSYNTH_OK;
  });
}

dissynth_status dissynth_analyze(const char* model_json, char** report_json) {
  if (!report_json) return setError(DISSYNTH_ERROR, "null output pointer");
  return guarded([&] {
    const io::ModelFile mf = io::parseModel(parseText(model_json));
    const datamodel::PlantModel& pl = mf.plant;
    dissipativity::AnalysisOptions opts;
    opts.strictStorage = mf.strictStorage;
    const dissipativity::AnalysisResult r = dissipativity::analyzeDissipativity(
        pl.a, pl.b, pl.c, pl.d, io::buildSupply(mf.supply, pl.m(), pl.p()), opts);
    *report_json = copyString(io::dump(io::toJson(r)));
    if (r.status != sdp::Status::Feasible) lastError = r.message;
    return fromStatus(r.status);
  });
}

dissynth_status dissynth_slemma(const char* query_json, char** report_json) {
  if (!report_json) return setError(DISSYNTH_ERROR, "null output pointer");
  return guarded([&] {
    const io::SlemmaFile sf = io::parseSlemma(parseText(query_json));
    const qmi::SlemmaOutcome o = qmi::slemma(sf.m, sf.n);
    *report_json = copyString(io::dump(io::toJson(o)));
    return o.feasible ? DISSYNTH_OK : DISSYNTH_INFEASIBLE;
  });
}

}  // extern "C"
