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
// Stream generation: constraint solving per encoding, mutation-set
// construction, and the Cartesian product expansion with decode tagging.
// The expansion is data parallel; both an OpenMP kernel and a serial
// reference implementation are provided and produce identical output.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "specdiff/corpus.h"
#include "specdiff/mutation.h"
#include "specdiff/stream.h"

namespace specdiff {

enum class GenMode { kSerial, kParallel };

// Expands the per-field mutation sets into one stream per combination, in
// row-major order over the diagram's field order (first field varies
// slowest). Each stream carries its decode tag. Output is identical for
// both modes. Throws ValidationError when the product exceeds 2^26.
std::vector<InstructionStream> cartesian_generate(
    const InstructionSpec& spec, const std::vector<MutationSet>& sets,
    GenMode mode = GenMode::kParallel);

// One constraint site and what the solver made of it.
struct SolvedSite {
  Constraint site;  // symbolized, polarity ignored (both are solved)
  std::optional<Witness> assert_witness;
  std::optional<Witness> negate_witness;
  bool assert_timed_out = false;
  bool negate_timed_out = false;
  // Site skipped before solving: it references architectural state or
  // could not be rewritten over encoding symbols.
  bool skipped = false;
  std::string skip_reason;
};

struct EncodingGeneration {
  const InstructionSpec* spec = nullptr;
  std::vector<MutationSet> sets;
  std::vector<SolvedSite> sites;
  std::vector<InstructionStream> streams;
};

struct GenerateOptions {
  std::uint64_t seed = 42;
  std::optional<Iset> iset_filter;
  std::optional<std::string> encoding_filter;
  InitOverrides overrides;
  GenMode mode = GenMode::kParallel;
  // Sink for solver-timeout and skipped-site warnings (may be null).
  std::ostream* warnings = nullptr;
};

struct IsetStats {
  std::set<std::string> encodings;
  std::set<std::string> instructions;
  std::size_t streams = 0;
  std::size_t sites = 0;
  std::size_t witnesses = 0;
  std::size_t solver_timeouts = 0;
  std::size_t skipped_sites = 0;
};

struct GenerateResult {
  std::vector<EncodingGeneration> encodings;
  std::map<Iset, IsetStats> by_iset;
  std::size_t total_streams = 0;
  // Coverage: encodings/instructions attempted vs. covered by at least one
  // generated stream.
  std::size_t attempted_encodings = 0;
  std::size_t covered_encodings = 0;
  std::size_t attempted_instructions = 0;
  std::size_t covered_instructions = 0;
};

// Runs the whole generation pipeline over the (optionally filtered)
// corpus. Solver timeouts do not abort: the affected site is recorded and
// generation proceeds with the witnesses found so far.
GenerateResult generate_streams(const Corpus& corpus,
                                const GenerateOptions& options);

// Human-readable per-iset summary table with coverage totals.
std::string render_summary(const GenerateResult& result, std::uint64_t seed);

}  // namespace specdiff
