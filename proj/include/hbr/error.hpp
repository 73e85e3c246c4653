// Copyright 2026 The HBR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hbr {

enum class ErrorKind {
  kInput,       // malformed user input or data
  kStructural,  // shape / symmetry contract violated
  kDegenerateDegree,
  kNumerical,
  kExhaustion,
  kVerification,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::kInput, what) {}
};

class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what)
      : Error(ErrorKind::kStructural, what) {}
};

/// Isolated vertex where a normalized Laplacian needs d_ii > 0.
class DegenerateDegreeError : public Error {
 public:
  explicit DegenerateDegreeError(long vertex)
      : Error(ErrorKind::kDegenerateDegree,
              "vertex " + std::to_string(vertex) +
                  " has zero degree; normalized Laplacian undefined"),
        vertex_(vertex) {}

  long vertex() const noexcept { return vertex_; }

 private:
  long vertex_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}
};

/// HBRenum ran out of candidate rows before finding m centers.
class ExhaustionError : public Error {
 public:
  ExhaustionError(long found, long wanted)
      : Error(ErrorKind::kExhaustion,
              "only " + std::to_string(found) + " of " + std::to_string(wanted) +
                  " centers satisfy the angle constraint"),
        found_(found) {}

  long found() const noexcept { return found_; }

 private:
  long found_;
};

}  // namespace hbr
