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


// Command line front end. Every computation goes through the C API; this
// file only moves JSON between files and the library.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dissynth/dissynth.h"

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string result;
  std::string mode;
  std::optional<std::uint64_t> seed;
  int samples = 200;
  double tol = 1e-7;
};

// Owns a string handed out by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { dissynth_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

bool readFile(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

// JSON goes to --output when given, stdout otherwise; the summary then goes
// to whichever stream is left.
bool emit(const Options& o, const std::string& json, const std::string& summary) {
  if (o.output.empty()) {
    std::cout << json;
    if (!summary.empty()) std::cerr << summary;
    return true;
  }
  std::ofstream out(o.output);
  if (!out || !(out << json)) {
    std::cerr << "error: cannot write '" << o.output << "'\n";
    return false;
  }
  std::cout << summary;
  return true;
}

int reportError(dissynth_status s) {
  std::cerr << "error: " << dissynth_last_error() << "\n";
  return s;
}

const char* verdictName(dissynth_status s) {
  switch (s) {
    case DISSYNTH_OK:
      return "feasible";
    case DISSYNTH_INFEASIBLE:
      return "infeasible";
    case DISSYNTH_HYPOTHESIS:
      return "hypothesis failure";
    case DISSYNTH_UNDECIDED:
      return "undecided";
    default:
      return "error";
  }
}

int cmdGen(const Options& o) {
  std::string cfg;
  if (!readFile(o.input, cfg)) return DISSYNTH_ERROR;
  LibString json;
  const std::uint64_t seed = o.seed.value_or(0);
  const dissynth_status s =
      dissynth_generate(cfg.c_str(), o.seed ? &seed : nullptr, &json.p);
  if (s != DISSYNTH_OK) return reportError(s);
  return emit(o, json.str(), "generated experiment\n") ? DISSYNTH_OK : DISSYNTH_ERROR;
}

int finishResult(const Options& o, dissynth_result* r, int code) {
  LibString json, summary;
  if (dissynth_result_to_json(r, &json.p) != DISSYNTH_OK ||
      dissynth_result_summary(r, &summary.p) != DISSYNTH_OK) {
    dissynth_result_free(r);
    return reportError(DISSYNTH_ERROR);
  }
  dissynth_result_free(r);
  return emit(o, json.str(), summary.str()) ? code : DISSYNTH_ERROR;
}

int cmdSynth(const Options& o) {
  dissynth_problem* prob = nullptr;
  dissynth_status s = dissynth_problem_load(o.input.c_str(), &prob);
  if (s != DISSYNTH_OK) return reportError(s);
  dissynth_result* r = nullptr;
  s = dissynth_synthesize(prob, o.mode.empty() ? nullptr : o.mode.c_str(), &r);
  if (!r) {
    dissynth_problem_free(prob);
    return reportError(s);
  }
  if (s == DISSYNTH_HYPOTHESIS) {
    std::cerr << "hypothesis failed: " << dissynth_last_error() << "\n";
  }
  int code = s;
  if (s == DISSYNTH_OK && o.samples > 0) {
    const std::uint64_t seed = o.seed.value_or(dissynth_problem_seed(prob));
    const dissynth_status v = dissynth_verify(prob, r, o.samples, seed, o.tol);
    // A certificate that fails its own spot check is not trusted.
    if (v != DISSYNTH_OK) {
      std::cerr << "verification failed: " << dissynth_last_error() << "\n";
      code = v == DISSYNTH_INFEASIBLE ? DISSYNTH_UNDECIDED : v;
    }
  }
  dissynth_problem_free(prob);
  return finishResult(o, r, code);
}

int cmdVerify(const Options& o) {
  if (o.result.empty()) {
    std::cerr << "error: verify needs --result\n";
    return DISSYNTH_ERROR;
  }
  dissynth_problem* prob = nullptr;
  dissynth_status s = dissynth_problem_load(o.input.c_str(), &prob);
  if (s != DISSYNTH_OK) return reportError(s);
  dissynth_result* r = nullptr;
  s = dissynth_result_load(o.result.c_str(), &r);
  if (s != DISSYNTH_OK) {
    dissynth_problem_free(prob);
    return reportError(s);
  }
  // A fresh seed by default, distinct from the one synth used.
  const std::uint64_t seed = o.seed.value_or(dissynth_problem_seed(prob) + 1);
  s = dissynth_verify(prob, r, o.samples, seed, o.tol);
  dissynth_problem_free(prob);
  if (s == DISSYNTH_ERROR) {
    dissynth_result_free(r);
    return reportError(s);
  }
  return finishResult(o, r, s);
}

int cmdJson(const Options& o,
            dissynth_status (*run)(const char*, char**)) {
  std::string text;
  if (!readFile(o.input, text)) return DISSYNTH_ERROR;
  LibString json;
  const dissynth_status s = run(text.c_str(), &json.p);
  if (!json.p) return reportError(s);
  std::string summary = std::string("status: ") + verdictName(s) + "\n";
  if (s != DISSYNTH_OK && *dissynth_last_error()) {
    summary += std::string("message: ") + dissynth_last_error() + "\n";
  }
  return emit(o, json.str(), summary) ? s : DISSYNTH_ERROR;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controller synthesis from noisy data with dissipativity guarantees"};
  app.require_subcommand(1);
  Options o;

  auto addInput = [&](CLI::App* c) {
    c->add_option("--input,-i", o.input, "Input JSON file")->required();
    c->add_option("--output,-o", o.output, "Output JSON file (default stdout)");
  };
  auto addSeed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed");
  };
  auto addVerify = [&](CLI::App* c) {
    c->add_option("--samples", o.samples, "Consistent systems to sample")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--tol", o.tol, "Verification tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* gen = app.add_subcommand("gen", "Simulate an experiment");
  addInput(gen);
  addSeed(gen);

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a controller");
  addInput(synth);
  addSeed(synth);
  addVerify(synth);
  synth->add_option("--mode", o.mode, "Output knowledge")
      ->check(CLI::IsMember({"known", "unknown"}));

  CLI::App* verify = app.add_subcommand("verify", "Re-check a synthesized controller");
  addInput(verify);
  addSeed(verify);
  addVerify(verify);
  verify->add_option("--result,-r", o.result, "Result JSON from synth")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "Dissipativity of a given model");
  addInput(analyze);

  CLI::App* slemma = app.add_subcommand("slemma", "Matrix S-lemma containment test");
  addInput(slemma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : DISSYNTH_ERROR;
  }

  if (*gen) return cmdGen(o);
  if (*synth) return cmdSynth(o);
  if (*verify) {
    if (o.samples < 1) {
      std::cerr << "error: --samples must be positive for verify\n";
      return DISSYNTH_ERROR;
    }
    return cmdVerify(o);
  }
  if (*analyze) return cmdJson(o, dissynth_analyze);
  return cmdJson(o, dissynth_slemma);
}
