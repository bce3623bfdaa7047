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
// The differential verdict: formal comparison of two final CPU states,
// execution filters, and root-cause classification of inconsistencies.

#pragma once

#include <optional>
#include <string>

#include "specdiff/cpu_state.h"
#include "specdiff/stream.h"

namespace specdiff {

enum class BehaviorCategory {
  kSigBothNonzeroDiffer,        // both raised signals, different ones
  kSigEmuOnly,                  // only the emulated run raised a signal
  kSigRealOnly,                 // only the reference run raised a signal
  kSigEqualNonzeroStateDiffer,  // same nonzero signal, state differs
  kSigZeroStateDiffer,          // no signals, state differs
  kOther,                       // a backend hung (hang sentinel)
};

enum class FilterReason { kSpFpAccess, kBranchNormal };

enum class RootCause { kQemuBugCandidate, kUnpredictable, kUndefined, kUnknown };

enum class VerdictKind { kConsistent, kInconsistent, kFiltered };

std::string to_string(BehaviorCategory c);
std::string to_string(FilterReason r);
std::string to_string(RootCause c);
std::string to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::kConsistent;
  std::optional<BehaviorCategory> category;  // present iff kInconsistent
  std::optional<FilterReason> filter;        // present iff kFiltered
  // Signals observed by the emulated and reference backends (0 when the
  // stream was filtered before execution).
  int sig_e = 0;
  int sig_r = 0;
};

// Pre-execution filter: a stream whose core register-index fields (R*)
// select the stack pointer (13) or frame pointer (11) would corrupt runner
// state, so it is skipped without executing. SIMD register fields are not
// affected.
std::optional<FilterReason> prefilter(const InstructionStream& stream,
                                      const InstructionSpec& spec);

// Post-execution filter: branch instructions that completed without a
// signal on both backends legitimately diverge in control flow, so they
// are excluded from state comparison.
bool branch_completed_normally(const InstructionSpec& spec, int sig_e,
                               int sig_r);

// Compares the final states of the emulated (`emu`) and reference (`real`)
// runs:
//   - either side hung (sentinel -1): inconsistent, category kOther;
//   - both sig 0: any of PC, registers, memory, or flags differing is an
//     inconsistency (kSigZeroStateDiffer);
//   - different signals: kSigBothNonzeroDiffer / kSigEmuOnly / kSigRealOnly;
//   - same nonzero signal: PC, registers and flags are compared, memory is
//     excluded (a faulting instruction's partial writes are unordered);
//     differences are kSigEqualNonzeroStateDiffer.
Verdict compare_final(const CpuState& emu, const CpuState& real);

// Explains an inconsistent verdict from the stream's decode tag:
// unpredictable tags are expected divergence; undefined tags must raise
// SIGILL everywhere, so any other signal implicates the emulator
// (kQemuBugCandidate); everything else is kUnknown. Requires an
// inconsistent verdict.
RootCause classify_root_cause(const InstructionStream& stream,
                              const InstructionSpec& spec,
                              const Verdict& verdict);

}  // namespace specdiff
