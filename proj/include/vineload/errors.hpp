// Copyright 2026 The vineload Authors
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

namespace vineload {

// Register width beyond the configured simulation limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed gate, e.g. a controlled rotation whose control equals its target.
class InvalidGateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Vector or parameter lengths that do not agree.
class LengthMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vine that violates tree-size, acyclicity or proximity rules.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data that cannot be used as given (constant vectors, bad prices, ...).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Training produced a non-finite loss.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File or text that failed to parse. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace vineload
