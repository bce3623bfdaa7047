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
// Mutation sets: the per-field candidate values whose Cartesian product
// forms an encoding's instruction streams. Sets start from type-directed
// initial rules and grow with solver witnesses.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specdiff/analysis.h"
#include "specdiff/corpus.h"
#include "specdiff/solver.h"

namespace specdiff {

struct MutationSet {
  std::string field_name;    // empty for constant fields
  bool constant = false;
  // Distinct candidate values in deterministic insertion order: initial
  // rule values first, then witness values as they were merged.
  std::vector<std::uint32_t> values;

  bool contains(std::uint32_t v) const;
};

// Optional replacement of the rule-based initial sets, keyed by encoding
// id and field name. File format, one set per line:
//
//   # comment
//   VLD4-A32.Rn = 0, 1, 6, 15
struct InitOverrides {
  std::map<std::pair<std::string, std::string>, std::vector<std::uint32_t>>
      sets;

  bool empty() const { return sets.empty(); }
  const std::vector<std::uint32_t>* find(const std::string& encoding_id,
                                         const std::string& field) const;

  static InitOverrides load(const std::filesystem::path& path);
};

// Initial mutation set for one field:
//   constant          -> its fixed value
//   RegisterIndex     -> {0, 1, 15} plus one random, random never 11 or 13
//   Immediate over N  -> {2^N-1, 0} plus N-2 distinct randoms
//   Condition         -> {14}  (the always condition)
//   Other, 1 bit      -> {0, 1}
//   Other, N bits     -> N distinct randoms
// Values always fit the field. `seed` is the field's dedicated PRNG
// stream seed (see derive_seed). Random draws retry on collision at most
// 64 times before failing.
MutationSet init_mutation_set(const Field& field, std::uint64_t seed);

// Projects a witness onto encoding fields. Symbols that name fields pass
// through; auxiliary symbols map back to the scrutinee field value of the
// case arm that induces the witnessed value. Throws MappingError when no
// arm induces the value or the scrutinee is not a plain field.
std::vector<std::pair<std::string, std::uint32_t>> witness_field_values(
    const InstructionSpec& spec, const Constraint& constraint,
    const Witness& witness);

// Builds the full per-field mutation sets for an encoding: initial rules
// (or overrides), then each solved witness merged value-by-value, skipping
// values already present. Result is ordered like the encoding diagram.
std::vector<MutationSet> build_mutation_sets(
    const InstructionSpec& spec,
    const std::vector<std::pair<Constraint, Witness>>& solved,
    std::uint64_t rng_seed, const InitOverrides* overrides = nullptr);

}  // namespace specdiff
