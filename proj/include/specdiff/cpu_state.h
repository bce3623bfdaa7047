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
// Observable CPU state as reported by an executor backend, and its
// canonical text dump format:
//
//   sig=<decimal>
//   pc_off=<hex>
//   r0=<hex> ... r15=<hex>   (one line each)
//   nzcv=<4 bits>
//   mem=<hex offset>:<width>:<hex value>   (zero or more lines)

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace specdiff {

// A memory cell the backend observed after execution, relative to the
// scratch region base. Widths are 1, 2, 4 or 8 bytes.
struct MemObservation {
  std::uint64_t offset = 0;
  int width = 0;
  std::uint64_t value = 0;

  friend bool operator==(const MemObservation&,
                         const MemObservation&) = default;
};

// Signals a backend may report: 0 (none), SIGILL 4, SIGTRAP 5, SIGBUS 7,
// SIGFPE 8, SIGSEGV 11, or the hang sentinel -1.
inline constexpr int kSigNone = 0;
inline constexpr int kSigIll = 4;
inline constexpr int kSigTrap = 5;
inline constexpr int kSigBus = 7;
inline constexpr int kSigFpe = 8;
inline constexpr int kSigSegv = 11;
inline constexpr int kSigHang = -1;

bool is_known_signal(int sig);

struct CpuState {
  int sig = kSigNone;
  // Program counter as an offset from the test payload's address, so two
  // backends loading it at different addresses stay comparable.
  std::uint64_t pc_off = 0;
  std::array<std::uint64_t, 16> regs{};
  std::uint8_t nzcv = 0;  // N=bit3, Z=bit2, C=bit1, V=bit0
  std::vector<MemObservation> mem;

  // Sorts memory observations by (offset, width) so comparison does not
  // depend on reporting order.
  void normalize();
};

// How an executor prepares state before running a stream. Registers start
// at zero except the frame pointer (r11), stack pointer (r13), link
// register (r14) and program counter, which point into runner-managed
// memory; memory observations are confined to the scratch region.
struct InitialStateSpec {
  std::uint64_t scratch_base = 0x200000;
  std::uint64_t scratch_size = 4096;
};

std::string format_state_dump(const CpuState& state);

// Parses a dump. Every field must appear exactly once (mem lines are
// optional and repeatable); anything missing, duplicated, unknown, or
// malformed raises StateSchemaError.
CpuState parse_state_dump(const std::string& text);

// Rejects observations outside the scratch region.
void check_mem_bounds(const CpuState& state, const InitialStateSpec& init);

}  // namespace specdiff
