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

#include "specdiff/backend.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "specdiff/errors.h"
#include "specdiff/util.h"

namespace specdiff {

CpuState finalize_backend_state(const std::string& dump_text,
                                const InitialStateSpec& init,
                                const std::string& origin) {
  CpuState state;
  try {
    state = parse_state_dump(dump_text);
  } catch (const StateSchemaError& e) {
    throw BackendError(origin + ": " + e.what());
  }
  if (!is_known_signal(state.sig)) {
    std::cerr << "warning: " << origin << ": unknown signal " << state.sig
              << ", treating as hang\n";
    state.sig = kSigHang;
  }
  try {
    check_mem_bounds(state, init);
  } catch (const StateSchemaError& e) {
    throw BackendError(origin + ": " + e.what());
  }
  state.normalize();
  return state;
}

// --------------------------------------------------------------------------
// ReplayBackend

ReplayBackend::ReplayBackend(std::filesystem::path dir)
    : dir_(std::move(dir)) {}

CpuState ReplayBackend::run(const InstructionStream& stream,
                            const InitialStateSpec& init,
                            std::chrono::milliseconds /*timeout*/) {
  std::filesystem::path path =
      dir_ / (stream.encoding_id + "__" + stream.hex_word() + ".dump");
  std::ifstream in(path);
  if (!in) {
    throw BackendError("replay dump not found: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return finalize_backend_state(text.str(), init, path.string());
}

std::string ReplayBackend::describe() const {
  return "replay:" + dir_.string();
}

// --------------------------------------------------------------------------
// ProcessBackend

namespace {

std::string hex_u64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

std::string bytes_token(const InstructionStream& stream) {
  std::string out;
  for (std::uint8_t b : stream_bytes(stream)) {
    if (!out.empty()) out += ',';
    out += "0x" + to_hex(b, 2);
  }
  return out;
}

void replace_all_occurrences(std::string& text, const std::string& from,
                             const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

// Writes the rendered harness to a unique temporary file and returns its
// path. The caller owns the file.
std::string write_program_file(const InstructionStream& stream,
                               const InitialStateSpec& init) {
  std::string tmpl = (std::filesystem::temp_directory_path() /
                      "specdiff_harness_XXXXXX")
                         .string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  int fd = ::mkstemp(buf.data());
  if (fd < 0) {
    throw BackendError(std::string("cannot create harness file: ") +
                       std::strerror(errno));
  }
  std::string source = render_test_program(stream, init);
  std::size_t off = 0;
  while (off < source.size()) {
    ssize_t n = ::write(fd, source.data() + off, source.size() - off);
    if (n < 0) {
      ::close(fd);
      throw BackendError(std::string("cannot write harness file: ") +
                         std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
  ::close(fd);
  return std::string(buf.data());
}

struct ChildResult {
  bool hung = false;
  int exit_status = 0;
  bool exec_like_failure = false;  // did not exit normally
  std::string stdout_text;
};

ChildResult run_child(const std::vector<std::string>& argv_strings,
                      std::chrono::milliseconds timeout) {
  int fds[2];
  if (::pipe(fds) != 0) {
    throw BackendError(std::string("pipe failed: ") + std::strerror(errno));
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw BackendError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    std::vector<char*> argv;
    argv.reserve(argv_strings.size() + 1);
    for (const auto& s : argv_strings) {
      argv.push_back(const_cast<char*>(s.c_str()));
    }
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    _exit(127);
  }
  ::close(fds[1]);
  int flags = ::fcntl(fds[0], F_GETFL, 0);
  ::fcntl(fds[0], F_SETFL, flags | O_NONBLOCK);

  ChildResult result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  bool exited = false;
  int status = 0;
  while (true) {
    char buf[4096];
    ssize_t n;
    while ((n = ::read(fds[0], buf, sizeof buf)) > 0) {
      result.stdout_text.append(buf, static_cast<std::size_t>(n));
    }
    if (!exited) {
      pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) {
        exited = true;
        continue;  // drain whatever is left in the pipe
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        result.hung = true;
        break;
      }
      struct pollfd p = {fds[0], POLLIN, 0};
      ::poll(&p, 1, 20);
      continue;
    }
    // Child exited and the pipe is drained (n is 0 at EOF, or -1 without
    // data left); stop once no more bytes arrive.
    if (n == 0 || (n < 0 && errno != EINTR)) break;
  }
  ::close(fds[0]);
  if (!result.hung) {
    if (WIFEXITED(status)) {
      result.exit_status = WEXITSTATUS(status);
    } else {
      result.exec_like_failure = true;
    }
  }
  return result;
}

}  // namespace

ProcessBackend::ProcessBackend(std::string command_template)
    : template_(std::move(command_template)) {
  bool has_token = false;
  for (const auto& tok : split(template_, ' ')) {
    if (!trim(tok).empty()) has_token = true;
  }
  if (!has_token) throw BackendError("empty backend command template");
}

CpuState ProcessBackend::run(const InstructionStream& stream,
                             const InitialStateSpec& init,
                             std::chrono::milliseconds timeout) {
  std::string program_path;
  std::vector<std::string> argv;
  for (const auto& raw : split(template_, ' ')) {
    std::string tok(trim(raw));
    if (tok.empty()) continue;
    if (tok.find("{program}") != std::string::npos && program_path.empty()) {
      program_path = write_program_file(stream, init);
    }
    replace_all_occurrences(tok, "{word}", std::to_string(stream.word));
    replace_all_occurrences(tok, "{hex}", stream.hex_word());
    replace_all_occurrences(tok, "{bytes}", bytes_token(stream));
    replace_all_occurrences(tok, "{iset}", to_string(stream.iset));
    replace_all_occurrences(tok, "{encoding_id}", stream.encoding_id);
    replace_all_occurrences(tok, "{scratch_base}",
                            "0x" + hex_u64(init.scratch_base));
    replace_all_occurrences(tok, "{scratch_size}",
                            std::to_string(init.scratch_size));
    replace_all_occurrences(tok, "{timeout_ms}",
                            std::to_string(timeout.count()));
    replace_all_occurrences(tok, "{program}", program_path);
    argv.push_back(tok);
  }

  ChildResult child;
  try {
    child = run_child(argv, timeout);
  } catch (...) {
    if (!program_path.empty()) ::unlink(program_path.c_str());
    throw;
  }
  if (!program_path.empty()) ::unlink(program_path.c_str());

  const std::string origin = "backend `" + argv.front() + "`";
  if (child.hung) {
    CpuState state;
    state.sig = kSigHang;
    return state;
  }
  if (child.exec_like_failure) {
    throw BackendError(origin + " was killed before exiting");
  }
  if (child.exit_status != 0) {
    throw BackendError(origin + " exited with status " +
                       std::to_string(child.exit_status));
  }
  return finalize_backend_state(child.stdout_text, init, origin);
}

std::string ProcessBackend::describe() const { return "process:" + template_; }

// --------------------------------------------------------------------------
// Harness rendering

std::string render_test_program(const InstructionStream& stream,
                                const InitialStateSpec& init) {
  std::ostringstream out;
  auto bytes = stream_bytes(stream);
  out << "/* Single-instruction differential test harness.\n"
      << " * Encoding " << stream.encoding_id << ", word 0x"
      << stream.hex_word() << " (" << to_string(stream.iset) << ").\n"
      << " * Generated; do not edit. */\n"
      << "#define _GNU_SOURCE\n"
      << "#include <setjmp.h>\n"
      << "#include <signal.h>\n"
      << "#include <stdint.h>\n"
      << "#include <stdio.h>\n"
      << "#include <stdlib.h>\n"
      << "#include <string.h>\n"
      << "#include <sys/mman.h>\n"
      << "\n"
      << "#define SCRATCH_BASE 0x" << hex_u64(init.scratch_base) << "u\n"
      << "#define SCRATCH_SIZE " << init.scratch_size << "u\n"
      << "\n"
      << "static const unsigned char payload[] = {";
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i) out << ", ";
    out << "0x" << to_hex(bytes[i], 2);
  }
  out << "};\n"
      << "\n"
      << "static sigjmp_buf recover;\n"
      << "static volatile sig_atomic_t caught_sig = 0;\n"
      << "static uint32_t regs_out[16];\n"
      << "static uint32_t cpsr_out = 0;\n"
      << "static uint32_t pc_entry = 0;\n"
      << "\n"
      << "static void on_signal(int sig, siginfo_t *info, void *uc_raw) {\n"
      << "  (void)info; (void)uc_raw;\n"
      << "  caught_sig = sig;\n"
      << "  siglongjmp(recover, 1);\n"
      << "}\n"
      << "\n"
      << "static void install_handler(int sig) {\n"
      << "  struct sigaction sa;\n"
      << "  memset(&sa, 0, sizeof sa);\n"
      << "  sa.sa_sigaction = on_signal;\n"
      << "  sa.sa_flags = SA_SIGINFO | SA_NODEFER;\n"
      << "  sigaction(sig, &sa, NULL);\n"
      << "}\n"
      << "\n"
      << "int main(void) {\n"
      << "  install_handler(SIGILL);\n"
      << "  install_handler(SIGTRAP);\n"
      << "  install_handler(SIGBUS);\n"
      << "  install_handler(SIGFPE);\n"
      << "  install_handler(SIGSEGV);\n"
      << "\n"
      << "  unsigned char *scratch =\n"
      << "      mmap((void *)(uintptr_t)SCRATCH_BASE, SCRATCH_SIZE,\n"
      << "           PROT_READ | PROT_WRITE,\n"
      << "           MAP_PRIVATE | MAP_ANONYMOUS | MAP_FIXED, -1, 0);\n"
      << "  if (scratch == MAP_FAILED) return 2;\n"
      << "  memset(scratch, 0, SCRATCH_SIZE);\n"
      << "  unsigned char scratch_before[SCRATCH_SIZE];\n"
      << "  memcpy(scratch_before, scratch, SCRATCH_SIZE);\n"
      << "\n"
      << "  /* Executable page: payload followed by a return branch. */\n"
      << "  unsigned char *code = mmap(NULL, 4096,\n"
      << "                             PROT_READ | PROT_WRITE | PROT_EXEC,\n"
      << "                             MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);\n"
      << "  if (code == MAP_FAILED) return 2;\n"
      << "  memcpy(code, payload, sizeof payload);\n";
  bool thumb = stream.iset == Iset::kT16 || stream.iset == Iset::kT32;
  if (thumb) {
    out << "  /* bx lr (Thumb) */\n"
        << "  code[sizeof payload + 0] = 0x70;\n"
        << "  code[sizeof payload + 1] = 0x47;\n";
  } else {
    out << "  /* bx lr (ARM) */\n"
        << "  code[sizeof payload + 0] = 0x1e;\n"
        << "  code[sizeof payload + 1] = 0xff;\n"
        << "  code[sizeof payload + 2] = 0x2f;\n"
        << "  code[sizeof payload + 3] = 0xe1;\n";
  }
  out << "  __builtin___clear_cache((char *)code, (char *)code + 4096);\n"
      << "  pc_entry = (uint32_t)(uintptr_t)code" << (thumb ? " | 1u" : "")
      << ";\n"
      << "\n"
      << "  memset((void *)regs_out, 0, sizeof regs_out);\n"
      << "  if (sigsetjmp(recover, 1) == 0) {\n"
      << "#if defined(__arm__)\n"
      << "    /* r0-r10, r12 zeroed; r11 (FP) and r13 (SP) point at runner\n"
      << "       stack memory; r14 (LR) holds the return address. */\n"
      << "    register uint32_t target __asm__(\"r12\") = pc_entry;\n"
      << "    __asm__ volatile(\n"
      << "        \"push {r4-r11, lr}\\n\\t\"\n"
      << "        \"mov r0, #0\\n\\t\"\n"
      << "        \"mov r1, #0\\n\\t\"\n"
      << "        \"mov r2, #0\\n\\t\"\n"
      << "        \"mov r3, #0\\n\\t\"\n"
      << "        \"mov r4, #0\\n\\t\"\n"
      << "        \"mov r5, #0\\n\\t\"\n"
      << "        \"mov r6, #0\\n\\t\"\n"
      << "        \"mov r7, #0\\n\\t\"\n"
      << "        \"mov r8, #0\\n\\t\"\n"
      << "        \"mov r9, #0\\n\\t\"\n"
      << "        \"mov r10, #0\\n\\t\"\n"
      << "        \"msr APSR_nzcvq, r0\\n\\t\"\n"
      << "        \"blx r12\\n\\t\"\n"
      << "        \"ldr r12, =regs_out\\n\\t\"\n"
      << "        \"stmia r12, {r0-r11}\\n\\t\"\n"
      << "        \"str sp, [r12, #52]\\n\\t\"\n"
      << "        \"str lr, [r12, #56]\\n\\t\"\n"
      << "        \"mrs r0, APSR\\n\\t\"\n"
      << "        \"ldr r1, =cpsr_out\\n\\t\"\n"
      << "        \"str r0, [r1]\\n\\t\"\n"
      << "        \"pop {r4-r11, lr}\\n\\t\"\n"
      << "        : : \"r\"(target) : \"r0\", \"r1\", \"r2\", \"r3\",\n"
      << "          \"memory\", \"cc\");\n"
      << "#else\n"
      << "    /* Host is not the target architecture: report a clean run\n"
      << "       with the registers untouched so plumbing stays testable. */\n"
      << "#endif\n"
      << "  }\n"
      << "\n"
      << "  int sig = (int)caught_sig;\n"
      << "  printf(\"sig=%d\\n\", sig);\n"
      << "  printf(\"pc_off=%x\\n\", (unsigned)" << (stream.width / 8)
      << ");\n"
      << "  for (int i = 0; i < 16; i++)\n"
      << "    printf(\"r%d=%x\\n\", i, (unsigned)regs_out[i]);\n"
      << "  printf(\"nzcv=%u%u%u%u\\n\", (cpsr_out >> 31) & 1u,\n"
      << "         (cpsr_out >> 30) & 1u, (cpsr_out >> 29) & 1u,\n"
      << "         (cpsr_out >> 28) & 1u);\n"
      << "  for (unsigned off = 0; off < SCRATCH_SIZE; off += 4) {\n"
      << "    uint32_t now, before;\n"
      << "    memcpy(&now, scratch + off, 4);\n"
      << "    memcpy(&before, scratch_before + off, 4);\n"
      << "    if (now != before)\n"
      << "      printf(\"mem=%x:4:%x\\n\", off, (unsigned)now);\n"
      << "  }\n"
      << "  return 0;\n"
      << "}\n";
  return out.str();
}

}  // namespace specdiff
