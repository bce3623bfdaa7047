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
// Instruction streams: one concrete instruction word plus the symbol
// assignment that produced it and its decode tag.
//
// Stream file format (one record per line, tab separated):
//
//   <encoding_id> \t <iset> \t <hex word> \t <tag> \t <sym=val;sym=val|->
//
// The hex word is lowercase, zero padded to width/4 digits. The assignment
// column lists symbol fields in diagram order, or '-' when the encoding
// has no symbol fields.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "specdiff/corpus.h"
#include "specdiff/eval.h"

namespace specdiff {

struct InstructionStream {
  std::string encoding_id;
  Iset iset = Iset::kA32;
  int width = 32;  // bits
  std::uint32_t word = 0;
  // Symbol field values in diagram order (highest field first).
  std::vector<std::pair<std::string, std::uint32_t>> assignment;
  DecodeTag tag = DecodeTag::kOk;

  std::string hex_word() const;
  std::map<std::string, std::uint32_t> assignment_map() const;
};

std::string format_stream_line(const InstructionStream& s);

// Parses one record line. Throws IoError on malformed input.
InstructionStream parse_stream_line(const std::string& line);

void emit_streams(const std::vector<InstructionStream>& streams,
                  std::ostream& out);

std::vector<InstructionStream> read_streams(std::istream& in);

// Verifies a stream against its encoding: the word must reproduce exactly
// from constants plus assignment, and the recorded tag must match decode
// evaluation. Throws ValidationError / UnknownEncoding on mismatch.
void validate_stream(const InstructionStream& s, const Corpus& corpus);

// Bytes as an executor would place them in memory: A32/A64 words are
// little-endian; 32-bit T32 encodings are two little-endian halfwords with
// the high halfword first; T16 is one little-endian halfword.
std::vector<std::uint8_t> stream_bytes(const InstructionStream& s);

}  // namespace specdiff
