// Copyright 2026 The shapfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPFAIR_ERROR_HPP
#define SHAPFAIR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace shapfair {

/// Base class of every error raised by the library. kind() is a stable
/// machine-readable tag used by the CLI's structured stderr output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Missing or inconsistent column / config entry.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& m) : Error("schema", m) {}
};

/// Malformed input text. row is the 0-based data row (header excluded).
class ParseError : public Error {
 public:
  ParseError(const std::string& m, std::size_t row)
      : Error("parse", m), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m) : Error("validation", m) {}
};

/// The requested algorithm cannot handle this input size / model kind.
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& m) : Error("capability", m) {}
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& m) : Error("oracle", m) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& m) : Error("training", m) {}
};

/// The target cost cannot be reached by mixing with the base rate.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& m, double cost_a, double cost_b)
      : Error("infeasible", m), cost_a_(cost_a), cost_b_(cost_b) {}
  double cost_a() const noexcept { return cost_a_; }
  double cost_b() const noexcept { return cost_b_; }

 private:
  double cost_a_;
  double cost_b_;
};

}  // namespace shapfair

#endif  // SHAPFAIR_ERROR_HPP
