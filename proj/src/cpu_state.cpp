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

#include "specdiff/cpu_state.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "specdiff/errors.h"
#include "specdiff/util.h"

namespace specdiff {

bool is_known_signal(int sig) {
  switch (sig) {
    case kSigNone:
    case kSigIll:
    case kSigTrap:
    case kSigBus:
    case kSigFpe:
    case kSigSegv:
    case kSigHang:
      return true;
    default:
      return false;
  }
}

void CpuState::normalize() {
  std::sort(mem.begin(), mem.end(),
            [](const MemObservation& a, const MemObservation& b) {
              return a.offset != b.offset ? a.offset < b.offset
                                          : a.width < b.width;
            });
}

namespace {

std::string hex_str(std::uint64_t v) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, 16);
  (void)ec;
  return std::string(buf, end);
}

std::uint64_t parse_hex(const std::string& s, const std::string& what) {
  std::string_view body = s;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
    body.remove_prefix(2);
  }
  if (body.empty() || body.size() > 16) {
    throw StateSchemaError("malformed hex value for " + what + ": '" + s +
                           "'");
  }
  std::uint64_t v = 0;
  auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), v, 16);
  if (ec != std::errc{} || ptr != body.data() + body.size()) {
    throw StateSchemaError("malformed hex value for " + what + ": '" + s +
                           "'");
  }
  return v;
}

}  // namespace

std::string format_state_dump(const CpuState& state) {
  std::ostringstream out;
  out << "sig=" << state.sig << "\n";
  out << "pc_off=" << hex_str(state.pc_off) << "\n";
  for (int i = 0; i < 16; ++i) {
    out << "r" << i << "=" << hex_str(state.regs[static_cast<std::size_t>(i)])
        << "\n";
  }
  out << "nzcv=";
  for (int bit = 3; bit >= 0; --bit) {
    out << ((state.nzcv >> bit) & 1);
  }
  out << "\n";
  for (const auto& m : state.mem) {
    out << "mem=" << hex_str(m.offset) << ":" << m.width << ":"
        << hex_str(m.value) << "\n";
  }
  return out.str();
}

CpuState parse_state_dump(const std::string& text) {
  CpuState state;
  bool have_sig = false, have_pc = false, have_nzcv = false;
  std::array<bool, 16> have_reg{};

  for (const auto& raw_line : split(text, '\n')) {
    std::string line = std::string(trim(raw_line));
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw StateSchemaError("malformed dump line '" + line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "sig") {
      if (have_sig) throw StateSchemaError("duplicate sig line");
      try {
        state.sig = std::stoi(value);
      } catch (const std::exception&) {
        throw StateSchemaError("malformed sig value '" + value + "'");
      }
      have_sig = true;
    } else if (key == "pc_off") {
      if (have_pc) throw StateSchemaError("duplicate pc_off line");
      state.pc_off = parse_hex(value, "pc_off");
      have_pc = true;
    } else if (key == "nzcv") {
      if (have_nzcv) throw StateSchemaError("duplicate nzcv line");
      if (value.size() != 4 ||
          value.find_first_not_of("01") != std::string::npos) {
        throw StateSchemaError("nzcv must be 4 bits, got '" + value + "'");
      }
      state.nzcv = 0;
      for (char c : value) {
        state.nzcv = static_cast<std::uint8_t>((state.nzcv << 1) | (c == '1'));
      }
      have_nzcv = true;
    } else if (key == "mem") {
      std::vector<std::string> parts = split(value, ':');
      if (parts.size() != 3) {
        throw StateSchemaError("mem line must be offset:width:value, got '" +
                               value + "'");
      }
      MemObservation m;
      m.offset = parse_hex(parts[0], "mem offset");
      try {
        m.width = std::stoi(parts[1]);
      } catch (const std::exception&) {
        throw StateSchemaError("malformed mem width '" + parts[1] + "'");
      }
      if (m.width != 1 && m.width != 2 && m.width != 4 && m.width != 8) {
        throw StateSchemaError("mem width must be 1, 2, 4 or 8, got " +
                               parts[1]);
      }
      m.value = parse_hex(parts[2], "mem value");
      state.mem.push_back(m);
    } else if (key.size() >= 2 && key.size() <= 3 && key[0] == 'r' &&
               std::isdigit(static_cast<unsigned char>(key[1]))) {
      int idx;
      try {
        idx = std::stoi(key.substr(1));
      } catch (const std::exception&) {
        throw StateSchemaError("unknown dump key '" + key + "'");
      }
      if (idx < 0 || idx > 15) {
        throw StateSchemaError("register index out of range in '" + key +
                               "'");
      }
      if (have_reg[static_cast<std::size_t>(idx)]) {
        throw StateSchemaError("duplicate " + key + " line");
      }
      state.regs[static_cast<std::size_t>(idx)] = parse_hex(value, key);
      have_reg[static_cast<std::size_t>(idx)] = true;
    } else {
      throw StateSchemaError("unknown dump key '" + key + "'");
    }
  }

  std::vector<std::string> missing;
  if (!have_sig) missing.push_back("sig");
  if (!have_pc) missing.push_back("pc_off");
  for (int i = 0; i < 16; ++i) {
    if (!have_reg[static_cast<std::size_t>(i)]) {
      missing.push_back("r" + std::to_string(i));
    }
  }
  if (!have_nzcv) missing.push_back("nzcv");
  if (!missing.empty()) {
    std::string joined;
    for (const auto& m : missing) {
      if (!joined.empty()) joined += ", ";
      joined += m;
    }
    throw StateSchemaError("dump is missing: " + joined);
  }
  state.normalize();
  return state;
}

void check_mem_bounds(const CpuState& state, const InitialStateSpec& init) {
  for (const auto& m : state.mem) {
    if (m.offset + static_cast<std::uint64_t>(m.width) > init.scratch_size) {
      throw StateSchemaError(
          "memory observation at offset 0x" + hex_str(m.offset) + " width " +
          std::to_string(m.width) + " lies outside the scratch region of " +
          std::to_string(init.scratch_size) + " bytes");
    }
  }
}

}  // namespace specdiff
