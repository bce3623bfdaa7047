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
// Instruction-corpus container format: encoding diagrams plus decode and
// execute pseudocode for each instruction encoding.
//
// Container syntax (line oriented, '#' starts a comment outside pseudocode
// blocks):
//
//   [encoding] id=STR-imm-T32 name="STR (immediate)" iset=T32 width=32
//              tags=LoadStore                       (one line in the file)
//   bits: '111110000100'@31:20, Rn@19:16, Rt@15:12, '1'@11, P@10:10,
//         U@9:9, W@8:8, imm8@7:0                    (one line in the file)
//   decode: <<<
//     ...pseudocode...
//   >>>
//   execute: <<<
//     ...pseudocode...
//   >>>

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specdiff/asl.h"

namespace specdiff {

enum class Iset { kA64, kA32, kT32, kT16 };

std::string to_string(Iset iset);
std::optional<Iset> iset_from_string(const std::string& s);

// Instruction-set width in bits (T16 is 16, the rest are 32).
int iset_width(Iset iset);

enum class SymbolType { kRegisterIndex, kImmediate, kCondition, kOther };

std::string to_string(SymbolType t);

// One span of the encoding diagram: either a constant bit pattern or a
// named symbol field. Bits are numbered with 0 as the least significant;
// `hi`/`lo` are inclusive.
struct Field {
  std::string name;           // empty for constant fields
  std::string constant_bits;  // empty for symbol fields
  int hi = 0;
  int lo = 0;

  bool is_constant() const { return !constant_bits.empty(); }
  int width() const { return hi - lo + 1; }
  std::uint32_t constant_value() const {
    std::uint32_t v = 0;
    for (char c : constant_bits) v = (v << 1) | (c == '1' ? 1u : 0u);
    return v;
  }
};

struct SymbolInfo {
  SymbolType type = SymbolType::kOther;
  int bit_length = 0;
};

// Classifies a symbol field by name shape. Total: anything that is not a
// register index, an immediate, or the condition field is kOther.
SymbolInfo infer_symbol_type(const Field& field);

struct EncodingDiagram {
  int width = 32;
  // Fields in canonical order, highest bit span first. Together they cover
  // bits [width-1 .. 0] exactly once.
  std::vector<Field> fields;

  // Mask/value pair for the constant fields: a word matches the diagram
  // when (word & constant_mask()) == constant_value().
  std::uint32_t constant_mask() const;
  std::uint32_t constant_value() const;

  const Field* find_field(const std::string& name) const;
};

// Builds the instruction word from constant fields plus one value per
// symbol field. Throws ValidationError when a symbol is missing or a value
// does not fit its field.
std::uint32_t encode_word(const EncodingDiagram& diagram,
                          const std::map<std::string, std::uint32_t>& values);

// Extracts symbol field values from a word. Throws ValidationError when
// the constant bits do not match.
std::map<std::string, std::uint32_t> decode_word(
    const EncodingDiagram& diagram, std::uint32_t word);

struct InstructionSpec {
  std::string id;
  std::string name;
  Iset iset = Iset::kA32;
  std::vector<std::string> tags;
  EncodingDiagram diagram;
  asl::Program decode;
  asl::Program execute;
  std::string decode_text;   // raw pseudocode, kept for serialization
  std::string execute_text;
  std::map<std::string, SymbolInfo> symbol_types;

  bool has_tag(const std::string& tag) const;
  // Decode and execute statements concatenated, for whole-behavior
  // constraint analysis.
  std::vector<asl::StmtPtr> combined_statements() const;
};

struct Corpus {
  std::vector<InstructionSpec> encodings;

  const InstructionSpec* find(const std::string& id) const;
};

// Parses and validates a corpus. `source_name` is used in diagnostics.
Corpus parse_corpus(const std::string& text,
                    const std::string& source_name = "<corpus>");

Corpus load_corpus(const std::filesystem::path& path);

// Canonical container text for a corpus; parse_corpus(serialize_corpus(c))
// reproduces the same diagrams and programs.
std::string serialize_corpus(const Corpus& corpus);

}  // namespace specdiff
