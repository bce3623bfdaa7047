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
// Constraint solving over fixed-width symbol domains.
//
// Small joint domains (at most 2^16 combined states) are enumerated
// exhaustively in lexicographic order, so a nullopt answer there proves
// unsatisfiability. Larger domains go through interval reasoning on a
// linear normal form, then a seeded randomized search with a fixed trial
// budget; exhausting the budget raises SolverTimeout.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specdiff/analysis.h"

namespace specdiff {

struct SymbolDomain {
  std::string symbol;
  int width = 1;  // valid widths are 1..24

  std::uint32_t max_value() const { return (1u << width) - 1u; }
};

struct Witness {
  std::map<std::string, std::uint32_t> assignment;
  Polarity polarity = Polarity::kAssert;
};

inline constexpr int kExhaustiveJointBits = 16;
inline constexpr std::uint64_t kRandomTrialBudget = 100000;

// Domains implied by a symbolized constraint's free symbols.
std::vector<SymbolDomain> domains_for(const Constraint& constraint);

// Finds an assignment satisfying the constraint under its polarity (path
// and side conjuncts always asserted), or nullopt. Every returned witness
// has been re-verified by substitution. Throws SolverTimeout when the
// randomized fallback exhausts its budget, and Error on invalid domains.
std::optional<Witness> solve(const Constraint& constraint,
                             const std::vector<SymbolDomain>& domains,
                             std::uint64_t seed = 0);

// Solves the site under both polarities: first the comparison asserted,
// then negated. The path is asserted in both.
std::pair<std::optional<Witness>, std::optional<Witness>> solve_both(
    const Constraint& constraint, const std::vector<SymbolDomain>& domains,
    std::uint64_t seed = 0);

}  // namespace specdiff
