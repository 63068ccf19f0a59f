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

#include <stdexcept>
#include <string>

namespace dissynth {

// Base class for every error raised by the library. The C API maps the
// concrete subclasses onto its status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SymmetryError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input files or configurations that fail validation. The message names the
// offending field path.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A mathematical hypothesis required by a result (inertia of the supply rate,
// rank of the data, positive eigenvalue, Pi-class membership) does not hold.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : Error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace dissynth
