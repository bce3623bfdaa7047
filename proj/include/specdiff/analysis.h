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
// Constraint extraction and symbolization: turns the boolean comparisons
// that guard an instruction's behavior into constraints over encoding
// symbols, ready for the bitvector solver.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "specdiff/asl.h"

namespace specdiff {

enum class Polarity { kAssert, kNegate };

// When a variable is defined by a case statement over constant arm bodies
// (e.g. an increment selected by a type field), symbolization lifts it into
// an auxiliary symbol. Each AuxChoice records one admissible value and the
// case arm that induces it, so witness values can be mapped back onto the
// scrutinee's encoding field.
struct AuxChoice {
  std::int64_t value = 0;
  asl::ExprPtr scrutinee;     // symbolized scrutinee expression
  std::string source_symbol;  // scrutinee's name when it is a plain symbol
  std::string pattern;        // bit pattern of the inducing arm
};

// One solvable constraint site. Fresh from extract_constraints, `expr` and
// `path` may still reference program variables; after symbolize they
// mention only encoding symbols and auxiliary symbols.
struct Constraint {
  asl::ExprPtr expr;  // an atomic comparison
  Polarity polarity = Polarity::kAssert;
  // Conjunction of the guards structurally enclosing the site. Always
  // asserted, under either polarity of `expr`.
  std::vector<asl::ExprPtr> path;
  // Definitional side constraints for auxiliary symbols (each a
  // disjunction of admissible values). Always asserted.
  std::vector<asl::ExprPtr> side;
  // Free symbol name -> bit width, including auxiliary symbols. Populated
  // by symbolize. Every symbol implicitly ranges over [0, 2^width).
  std::map<std::string, int> widths;
  std::map<std::string, std::vector<AuxChoice>> aux_defs;
};

// Collects one constraint site per distinct atomic comparison: boolean
// guards of if statements, implied equality tests of case arms, and
// comparisons appearing in assignment right-hand sides. Sites that are
// structurally identical (same comparison under the same path) are
// reported once, in program order.
std::vector<Constraint> extract_constraints(
    const std::vector<asl::StmtPtr>& statements);

// Minimal subsequence of `statements` whose assignments feed the free
// variables of `target`, preserving program order. Idempotent.
std::vector<asl::StmtPtr> backward_slice(
    const std::vector<asl::StmtPtr>& statements, const asl::ExprPtr& target);

// Rewrites `constraint` over encoding symbols only, by substituting
// variable definitions from `slice` (normally the backward slice of the
// constraint's expression and path). Case-defined variables become
// auxiliary symbols with definitional side constraints. Throws
// SymbolizeError when a variable cannot be resolved to symbols.
Constraint symbolize(const std::vector<asl::StmtPtr>& slice,
                     const Constraint& constraint);

// Convenience: slice `statements` for everything `constraint` mentions and
// symbolize in one step.
Constraint symbolize_in_program(const std::vector<asl::StmtPtr>& statements,
                                const Constraint& constraint);

// True when `assignment` satisfies the (symbolized) constraint: polarity
// applied to `expr`, path and side conjuncts asserted, and every symbol
// within its width-implied domain.
bool constraint_holds(const Constraint& constraint,
                      const std::map<std::string, std::uint32_t>& assignment);

}  // namespace specdiff
