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
//
// Concrete evaluation of decode programs under a full symbol assignment.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "specdiff/asl.h"

namespace specdiff {

// Evaluation value: an integer, optionally carrying a bit-string width.
// Bit-strings are read as unsigned integers; `width` 0 means a plain
// (possibly negative) integer.
struct Value {
  std::int64_t v = 0;
  int width = 0;

  bool truthy() const { return v != 0; }
};

enum class DecodeTag { kOk, kUndefined, kUnpredictable };

std::string to_string(DecodeTag tag);

struct DecodeResult {
  DecodeTag tag = DecodeTag::kOk;
  // Variable bindings produced along the executed path. Complete when tag
  // is kOk; partial (up to the terminating statement) otherwise.
  std::map<std::string, Value> bindings;
};

struct EvalEnv {
  const std::map<std::string, std::uint32_t>* symbols = nullptr;
  std::map<std::string, Value> vars;
};

// Evaluates one expression. Throws EvalError on division by zero, unbound
// names, or operations that need a bit-string width and lack one.
Value eval_expr(const asl::ExprPtr& e, const EvalEnv& env);

// Runs a decode program to completion or to the first UNDEFINED /
// UNPREDICTABLE statement. A case statement whose scrutinee matches no arm
// yields kUndefined (the encoding variant is outside the described space).
DecodeResult eval_decode(const asl::Program& program,
                         const std::map<std::string, std::uint32_t>& symbols);

}  // namespace specdiff
