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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace specdiff {

// 64-bit FNV-1a over a byte string.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derives an independent PRNG seed for one (campaign seed, encoding, field)
// triple so that per-field random draws do not depend on generation order.
inline std::uint64_t derive_seed(std::uint64_t base_seed,
                                 std::string_view encoding_id,
                                 std::string_view field_name) {
  std::uint64_t h = fnv1a64(encoding_id);
  h = fnv1a64("\x1f", h);  // separator so ("ab","c") != ("a","bc")
  h = fnv1a64(field_name, h);
  h = fnv1a64("\x1f", h);
  for (int i = 0; i < 8; ++i) {
    char byte = static_cast<char>((base_seed >> (8 * i)) & 0xff);
    h = fnv1a64(std::string_view(&byte, 1), h);
  }
  return h;
}

// Lowercase hex, zero padded to `digits`.
inline std::string to_hex(std::uint64_t value, int digits) {
  static const char* kHex = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0 && value != 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[value & 0xf];
    value >>= 4;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace specdiff
