// Copyright 2026 The specdiff Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace specdiff {

// Base class for all errors raised by the library. Subclasses exist so
// callers (and the CLI exit-code mapping) can distinguish failure classes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed corpus container or ASL text. Carries a 1-based position when
// the failing text location is known.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  explicit SyntaxError(const std::string& msg) : Error(msg) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

// Identifier that is neither an encoding symbol, a previously assigned
// variable, nor a builtin.
class UnknownIdentifier : public SyntaxError {
 public:
  UnknownIdentifier(const std::string& name, int line, int column)
      : SyntaxError("unknown identifier '" + name + "'", line, column) {}
};

// Structural violation in a parsed encoding: bit-span gap or overlap,
// constant-length mismatch, bad width for the instruction set, and so on.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& encoding_id, const std::string& msg)
      : Error("encoding '" + encoding_id + "': " + msg),
        encoding_id_(encoding_id) {}
  explicit ValidationError(const std::string& msg) : Error(msg) {}

  const std::string& encoding_id() const { return encoding_id_; }

 private:
  std::string encoding_id_;
};

// Runtime failure while concretely evaluating ASL (division by zero,
// unbound variable). Signals a validation escape, never expected on a
// validated corpus.
class EvalError : public Error {
 public:
  using Error::Error;
};

// Definition cycle or unresolvable variable while rewriting a constraint
// into encoding symbols.
class SymbolizeError : public Error {
 public:
  using Error::Error;
};

// Randomized-search budget exhausted on a large-domain constraint.
class SolverTimeout : public Error {
 public:
  explicit SolverTimeout(std::uint64_t budget)
      : Error("constraint solver exhausted randomized budget of " +
              std::to_string(budget) + " trials"),
        budget_(budget) {}

  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_ = 0;
};

// An auxiliary-symbol witness value has no inducing case arm.
class MappingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Executor adapter failed to launch or returned an unusable result.
class BackendError : public Error {
 public:
  using Error::Error;
};

// State dump does not match the expected register/field schema.
class StateSchemaError : public Error {
 public:
  using Error::Error;
};

class JournalCorrupt : public Error {
 public:
  using Error::Error;
};

// Stream record references an encoding id absent from the corpus.
class UnknownEncoding : public Error {
 public:
  explicit UnknownEncoding(const std::string& encoding_id)
      : Error("unknown encoding id '" + encoding_id + "'") {}
};

}  // namespace specdiff
