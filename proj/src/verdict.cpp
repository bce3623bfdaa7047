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

#include "specdiff/verdict.h"

#include "specdiff/errors.h"

namespace specdiff {

std::string to_string(BehaviorCategory c) {
  switch (c) {
    case BehaviorCategory::kSigBothNonzeroDiffer:
      return "sig_both_nonzero_differ";
    case BehaviorCategory::kSigEmuOnly: return "sig_emu_only";
    case BehaviorCategory::kSigRealOnly: return "sig_real_only";
    case BehaviorCategory::kSigEqualNonzeroStateDiffer:
      return "sig_equal_nonzero_state_differ";
    case BehaviorCategory::kSigZeroStateDiffer:
      return "sig_zero_state_differ";
    case BehaviorCategory::kOther: return "other";
  }
  return "?";
}

std::string to_string(FilterReason r) {
  switch (r) {
    case FilterReason::kSpFpAccess: return "sp_fp_access";
    case FilterReason::kBranchNormal: return "branch_normal";
  }
  return "?";
}

std::string to_string(RootCause c) {
  switch (c) {
    case RootCause::kQemuBugCandidate: return "qemu_bug_candidate";
    case RootCause::kUnpredictable: return "unpredictable";
    case RootCause::kUndefined: return "undefined";
    case RootCause::kUnknown: return "unknown";
  }
  return "?";
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kConsistent: return "consistent";
    case VerdictKind::kInconsistent: return "inconsistent";
    case VerdictKind::kFiltered: return "filtered";
  }
  return "?";
}

std::optional<FilterReason> prefilter(const InstructionStream& stream,
                                      const InstructionSpec& spec) {
  for (const auto& [name, value] : stream.assignment) {
    auto it = spec.symbol_types.find(name);
    if (it == spec.symbol_types.end()) continue;
    if (it->second.type != SymbolType::kRegisterIndex) continue;
    // Only core register fields (R*) index the register file that holds
    // the frame and stack pointers; SIMD register fields (V*) are safe.
    if (name.empty() || (name[0] != 'R' && name[0] != 'r')) continue;
    if (value == 11 || value == 13) return FilterReason::kSpFpAccess;
  }
  return std::nullopt;
}

bool branch_completed_normally(const InstructionSpec& spec, int sig_e,
                               int sig_r) {
  return spec.has_tag("Branch") && sig_e == kSigNone && sig_r == kSigNone;
}

namespace {

bool same_memory(const CpuState& a, const CpuState& b) {
  return a.mem == b.mem;  // both normalized
}

bool same_core_state(const CpuState& a, const CpuState& b) {
  return a.pc_off == b.pc_off && a.regs == b.regs && a.nzcv == b.nzcv;
}

Verdict inconsistent(BehaviorCategory category, int sig_e, int sig_r) {
  Verdict v;
  v.kind = VerdictKind::kInconsistent;
  v.category = category;
  v.sig_e = sig_e;
  v.sig_r = sig_r;
  return v;
}

}  // namespace

Verdict compare_final(const CpuState& emu, const CpuState& real) {
  CpuState e = emu;
  CpuState r = real;
  e.normalize();
  r.normalize();

  if (e.sig == kSigHang || r.sig == kSigHang) {
    return inconsistent(BehaviorCategory::kOther, e.sig, r.sig);
  }
  if (e.sig != r.sig) {
    if (r.sig == kSigNone) {
      return inconsistent(BehaviorCategory::kSigEmuOnly, e.sig, r.sig);
    }
    if (e.sig == kSigNone) {
      return inconsistent(BehaviorCategory::kSigRealOnly, e.sig, r.sig);
    }
    return inconsistent(BehaviorCategory::kSigBothNonzeroDiffer, e.sig,
                        r.sig);
  }
  // Signals are equal from here on.
  if (e.sig == kSigNone) {
    if (!same_core_state(e, r) || !same_memory(e, r)) {
      return inconsistent(BehaviorCategory::kSigZeroStateDiffer, e.sig,
                          r.sig);
    }
  } else {
    // Same nonzero signal: memory is excluded from the comparison because
    // a faulting instruction's memory side effects are not well ordered.
    if (!same_core_state(e, r)) {
      return inconsistent(BehaviorCategory::kSigEqualNonzeroStateDiffer,
                          e.sig, r.sig);
    }
  }
  Verdict v;
  v.kind = VerdictKind::kConsistent;
  v.sig_e = e.sig;
  v.sig_r = r.sig;
  return v;
}

RootCause classify_root_cause(const InstructionStream& stream,
                              const InstructionSpec& spec,
                              const Verdict& verdict) {
  (void)spec;
  if (verdict.kind != VerdictKind::kInconsistent) {
    throw Error("classify_root_cause requires an inconsistent verdict");
  }
  if (stream.tag == DecodeTag::kUnpredictable) {
    return RootCause::kUnpredictable;
  }
  if (stream.tag == DecodeTag::kUndefined) {
    // An undefined encoding must raise SIGILL on every implementation. A
    // backend reporting anything else mishandles the decode space.
    if (verdict.sig_e != kSigIll || verdict.sig_r != kSigIll) {
      return RootCause::kQemuBugCandidate;
    }
    return RootCause::kUndefined;
  }
  return RootCause::kUnknown;
}

}  // namespace specdiff
