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
// Executor backends: sources of final CPU states for a given instruction
// stream. A backend either replays pre-recorded state dumps from disk or
// drives an external runner process (an emulator invocation, an on-device
// agent, ...) that prints a state dump on stdout.

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

#include "specdiff/cpu_state.h"
#include "specdiff/stream.h"

namespace specdiff {

class ExecutorBackend {
 public:
  virtual ~ExecutorBackend() = default;

  // Produces the final CPU state after executing `stream` from the initial
  // state `init`. A backend that exceeds `timeout` reports the hang
  // sentinel (sig = -1). Irrecoverable backend problems (missing dump,
  // runner crash, malformed output) throw BackendError.
  virtual CpuState run(const InstructionStream& stream,
                       const InitialStateSpec& init,
                       std::chrono::milliseconds timeout) = 0;

  virtual std::string describe() const = 0;
};

// Replays state dumps recorded earlier. For a stream of encoding E and
// instruction word W (zero-padded lowercase hex, width/4 digits) the dump
// is read from `<dir>/<E>__<W>.dump` in the canonical state-dump format.
class ReplayBackend : public ExecutorBackend {
 public:
  explicit ReplayBackend(std::filesystem::path dir);

  CpuState run(const InstructionStream& stream, const InitialStateSpec& init,
               std::chrono::milliseconds timeout) override;
  std::string describe() const override;

 private:
  std::filesystem::path dir_;
};

// Runs an external command per stream and parses the state dump it prints
// on stdout. The command template is split on spaces; each token then has
// placeholders substituted:
//   {word}         instruction word, decimal
//   {hex}          instruction word, zero-padded lowercase hex
//   {bytes}        instruction bytes in memory order, comma-separated 0xNN
//   {iset}         instruction-set name (A64 / A32 / T32 / T16)
//   {encoding_id}  encoding identifier
//   {scratch_base} scratch window base address (hex, 0x-prefixed)
//   {scratch_size} scratch window size in bytes (decimal)
//   {timeout_ms}   timeout in milliseconds (decimal)
//   {program}      path to a rendered self-contained C harness source
// A child that outlives the timeout is killed and reported as a hang
// (sig = -1). A child that exits nonzero, cannot be executed, or prints a
// malformed dump raises BackendError.
class ProcessBackend : public ExecutorBackend {
 public:
  explicit ProcessBackend(std::string command_template);

  CpuState run(const InstructionStream& stream, const InitialStateSpec& init,
               std::chrono::milliseconds timeout) override;
  std::string describe() const override;

 private:
  std::string template_;
};

// Renders a self-contained C source file that executes the stream's
// instruction word in a minimal fixed environment and prints the final
// state dump on stdout: registers zeroed except FP/SP/LR, a scratch memory
// window mapped at a fixed base, and signal handlers that capture
// ILL/TRAP/BUS/FPE/SEGV instead of dying.
std::string render_test_program(const InstructionStream& stream,
                                const InitialStateSpec& init);

// Parses, normalizes and validates a backend-produced dump: unknown signal
// numbers are replaced with the hang sentinel (with a warning on stderr),
// memory observations are checked against the scratch window and the state
// is canonically ordered. Problems raise BackendError tagged with `origin`.
CpuState finalize_backend_state(const std::string& dump_text,
                                const InitialStateSpec& init,
                                const std::string& origin);

}  // namespace specdiff
