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

#include "specdiff/stream.h"

#include <istream>
#include <ostream>

#include "specdiff/errors.h"
#include "specdiff/util.h"

namespace specdiff {

std::string InstructionStream::hex_word() const {
  return to_hex(word, width / 4);
}

std::map<std::string, std::uint32_t> InstructionStream::assignment_map()
    const {
  std::map<std::string, std::uint32_t> out;
  for (const auto& [name, value] : assignment) out[name] = value;
  return out;
}

std::string format_stream_line(const InstructionStream& s) {
  std::string line = s.encoding_id;
  line += '\t';
  line += to_string(s.iset);
  line += '\t';
  line += s.hex_word();
  line += '\t';
  line += to_string(s.tag);
  line += '\t';
  if (s.assignment.empty()) {
    line += '-';
  } else {
    for (std::size_t i = 0; i < s.assignment.size(); ++i) {
      if (i) line += ';';
      line += s.assignment[i].first;
      line += '=';
      line += std::to_string(s.assignment[i].second);
    }
  }
  return line;
}

InstructionStream parse_stream_line(const std::string& line) {
  std::vector<std::string> cols = split(line, '\t');
  if (cols.size() != 5) {
    throw IoError("stream record must have 5 tab-separated columns, got " +
                  std::to_string(cols.size()));
  }
  InstructionStream s;
  s.encoding_id = cols[0];
  if (s.encoding_id.empty()) {
    throw IoError("stream record has an empty encoding id");
  }
  auto iset = iset_from_string(cols[1]);
  if (!iset) {
    throw IoError("unknown instruction set '" + cols[1] + "'");
  }
  s.iset = *iset;
  s.width = iset_width(s.iset);
  const std::string& hex = cols[2];
  if (static_cast<int>(hex.size()) != s.width / 4) {
    throw IoError("hex word '" + hex + "' must have " +
                  std::to_string(s.width / 4) + " digits for " + cols[1]);
  }
  std::uint32_t word = 0;
  for (char c : hex) {
    int nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw IoError("malformed hex word '" + hex + "'");
    word = (word << 4) | static_cast<std::uint32_t>(nibble);
  }
  s.word = word;
  if (cols[3] == "ok") s.tag = DecodeTag::kOk;
  else if (cols[3] == "undefined") s.tag = DecodeTag::kUndefined;
  else if (cols[3] == "unpredictable") s.tag = DecodeTag::kUnpredictable;
  else throw IoError("unknown decode tag '" + cols[3] + "'");
  if (cols[4] != "-") {
    for (const auto& part : split(cols[4], ';')) {
      std::size_t eq = part.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw IoError("malformed assignment entry '" + part + "'");
      }
      try {
        unsigned long v = std::stoul(part.substr(eq + 1), nullptr, 10);
        if (v > 0xffffffffUL) throw std::out_of_range("");
        s.assignment.emplace_back(part.substr(0, eq),
                                  static_cast<std::uint32_t>(v));
      } catch (const std::exception&) {
        throw IoError("malformed assignment entry '" + part + "'");
      }
    }
  }
  return s;
}

void emit_streams(const std::vector<InstructionStream>& streams,
                  std::ostream& out) {
  for (const auto& s : streams) {
    out << format_stream_line(s) << '\n';
  }
}

std::vector<InstructionStream> read_streams(std::istream& in) {
  std::vector<InstructionStream> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(parse_stream_line(line));
    } catch (const IoError& e) {
      throw IoError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void validate_stream(const InstructionStream& s, const Corpus& corpus) {
  const InstructionSpec* spec = corpus.find(s.encoding_id);
  if (!spec) throw UnknownEncoding(s.encoding_id);
  if (spec->iset != s.iset) {
    throw ValidationError(s.encoding_id,
                          "stream iset " + to_string(s.iset) +
                              " does not match the corpus (" +
                              to_string(spec->iset) + ")");
  }
  std::uint32_t rebuilt = encode_word(spec->diagram, s.assignment_map());
  if (rebuilt != s.word) {
    throw ValidationError(
        s.encoding_id, "word " + s.hex_word() +
                           " does not reconstruct from its assignment (got " +
                           to_hex(rebuilt, s.width / 4) + ")");
  }
  DecodeResult decoded = eval_decode(spec->decode, s.assignment_map());
  if (decoded.tag != s.tag) {
    throw ValidationError(s.encoding_id,
                          "recorded tag '" + to_string(s.tag) +
                              "' does not match decode evaluation ('" +
                              to_string(decoded.tag) + "') for word " +
                              s.hex_word());
  }
}

std::vector<std::uint8_t> stream_bytes(const InstructionStream& s) {
  std::vector<std::uint8_t> bytes;
  auto push_halfword_le = [&](std::uint32_t hw) {
    bytes.push_back(static_cast<std::uint8_t>(hw & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((hw >> 8) & 0xff));
  };
  if (s.width == 16) {
    push_halfword_le(s.word);
    return bytes;
  }
  if (s.iset == Iset::kT32) {
    // Thumb-2: the high halfword comes first in the instruction stream.
    push_halfword_le(s.word >> 16);
    push_halfword_le(s.word & 0xffff);
    return bytes;
  }
  bytes.push_back(static_cast<std::uint8_t>(s.word & 0xff));
  bytes.push_back(static_cast<std::uint8_t>((s.word >> 8) & 0xff));
  bytes.push_back(static_cast<std::uint8_t>((s.word >> 16) & 0xff));
  bytes.push_back(static_cast<std::uint8_t>((s.word >> 24) & 0xff));
  return bytes;
}

}  // namespace specdiff
