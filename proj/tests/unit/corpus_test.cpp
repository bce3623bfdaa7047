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

#include "specdiff/corpus.h"

#include <gtest/gtest.h>

#include <map>
#include <string>

#include "specdiff/errors.h"

namespace specdiff {
namespace {

const char* kBaselineCorpus = SPECDIFF_SOURCE_DIR "/corpus/baseline.corpus";

Field symbol_field(const std::string& name, int hi, int lo) {
  Field f;
  f.name = name;
  f.hi = hi;
  f.lo = lo;
  return f;
}

TEST(IsetNames, RoundTrip) {
  for (Iset i : {Iset::kA64, Iset::kA32, Iset::kT32, Iset::kT16}) {
    EXPECT_EQ(iset_from_string(to_string(i)), i);
  }
  EXPECT_EQ(to_string(Iset::kT16), "T16");
  EXPECT_FALSE(iset_from_string("thumb").has_value());
  EXPECT_EQ(iset_width(Iset::kT16), 16);
  EXPECT_EQ(iset_width(Iset::kT32), 32);
  EXPECT_EQ(iset_width(Iset::kA32), 32);
  EXPECT_EQ(iset_width(Iset::kA64), 32);
}

TEST(InferSymbolType, ClassifiesByNameShape) {
  struct Row {
    const char* name;
    int hi, lo;
    SymbolType want;
  };
  const Row rows[] = {
      {"Rn", 19, 16, SymbolType::kRegisterIndex},
      {"Rt", 15, 12, SymbolType::kRegisterIndex},
      {"Rm", 3, 0, SymbolType::kRegisterIndex},
      {"Vd", 15, 12, SymbolType::kRegisterIndex},
      {"imm8", 7, 0, SymbolType::kImmediate},
      {"imm12", 11, 0, SymbolType::kImmediate},
      {"imm24", 23, 0, SymbolType::kImmediate},
      {"cond", 31, 28, SymbolType::kCondition},
      {"type", 11, 8, SymbolType::kOther},
      {"size", 7, 6, SymbolType::kOther},
      {"P", 10, 10, SymbolType::kOther},
      {"sf", 31, 31, SymbolType::kOther},
      // "imm" alone is too short for the immediate rule.
      {"imm", 7, 0, SymbolType::kOther},
  };
  for (const Row& r : rows) {
    SymbolInfo info = infer_symbol_type(symbol_field(r.name, r.hi, r.lo));
    EXPECT_EQ(info.type, r.want) << r.name;
    EXPECT_EQ(info.bit_length, r.hi - r.lo + 1) << r.name;
  }
}

TEST(ParseCorpus, LoadsBaseline) {
  Corpus corpus = load_corpus(kBaselineCorpus);
  EXPECT_GE(corpus.encodings.size(), 12u);

  const InstructionSpec* str = corpus.find("STR-imm-T32");
  ASSERT_NE(str, nullptr);
  EXPECT_EQ(str->iset, Iset::kT32);
  EXPECT_EQ(str->diagram.width, 32);
  EXPECT_TRUE(str->has_tag("LoadStore"));
  EXPECT_FALSE(str->has_tag("Branch"));
  ASSERT_NE(str->diagram.find_field("imm8"), nullptr);
  EXPECT_EQ(str->diagram.find_field("imm8")->width(), 8);
  EXPECT_EQ(str->symbol_types.at("Rn").type, SymbolType::kRegisterIndex);
  EXPECT_FALSE(str->decode.statements.empty());

  EXPECT_EQ(corpus.find("no-such-encoding"), nullptr);
}

TEST(ParseCorpus, SerializeRoundTripPreservesStructure) {
  Corpus first = load_corpus(kBaselineCorpus);
  Corpus second = parse_corpus(serialize_corpus(first), "<round-trip>");
  ASSERT_EQ(second.encodings.size(), first.encodings.size());
  for (std::size_t i = 0; i < first.encodings.size(); ++i) {
    const InstructionSpec& a = first.encodings[i];
    const InstructionSpec& b = second.encodings[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.iset, b.iset);
    EXPECT_EQ(a.tags, b.tags);
    ASSERT_EQ(a.diagram.fields.size(), b.diagram.fields.size()) << a.id;
    for (std::size_t k = 0; k < a.diagram.fields.size(); ++k) {
      EXPECT_EQ(a.diagram.fields[k].name, b.diagram.fields[k].name);
      EXPECT_EQ(a.diagram.fields[k].constant_bits,
                b.diagram.fields[k].constant_bits);
      EXPECT_EQ(a.diagram.fields[k].hi, b.diagram.fields[k].hi);
      EXPECT_EQ(a.diagram.fields[k].lo, b.diagram.fields[k].lo);
    }
    EXPECT_EQ(asl::to_string(a.decode), asl::to_string(b.decode)) << a.id;
    EXPECT_EQ(asl::to_string(a.execute), asl::to_string(b.execute)) << a.id;
  }
}

TEST(ParseCorpus, MinimalEncoding) {
  Corpus c = parse_corpus(
      "[encoding] id=X name=X iset=T16 width=16\n"
      "bits: '11011110'@15:8, imm8@7:0\n"
      "decode: <<< UNDEFINED; >>>\n"
      "execute: <<< >>>\n");
  ASSERT_EQ(c.encodings.size(), 1u);
  EXPECT_EQ(c.encodings[0].diagram.constant_mask(), 0xff00u);
  EXPECT_EQ(c.encodings[0].diagram.constant_value(), 0xde00u);
  EXPECT_TRUE(c.encodings[0].execute.statements.empty());
}

TEST(ParseCorpus, RejectsCoverageGap) {
  // Bit 8 is covered by nothing.
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=T16 width=16\n"
                            "bits: '1101111'@15:9, imm8@7:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               ValidationError);
}

TEST(ParseCorpus, RejectsOverlap) {
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=T16 width=16\n"
                            "bits: '110111100'@15:7, imm8@7:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               ValidationError);
}

TEST(ParseCorpus, RejectsConstantLengthMismatch) {
  // Three constant bits declared over a four-bit span.
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=T16 width=16\n"
                            "bits: '111'@15:12, imm12@11:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               ValidationError);
}

TEST(ParseCorpus, RejectsDuplicateId) {
  const std::string one =
      "[encoding] id=X name=X iset=T16 width=16\n"
      "bits: '11011110'@15:8, imm8@7:0\n"
      "decode: <<< >>>\n"
      "execute: <<< >>>\n";
  EXPECT_THROW(parse_corpus(one + one), ValidationError);
}

TEST(ParseCorpus, RejectsWidthIsetMismatch) {
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=A32 width=16\n"
                            "bits: '11011110'@15:8, imm8@7:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               ValidationError);
}

TEST(ParseCorpus, RejectsNarrowConditionField) {
  // cond must be exactly 4 bits.
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=T16 width=16\n"
                            "bits: '11011110'@15:8, cond@7:5, imm@4:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               ValidationError);
}

TEST(ParseCorpus, RejectsDuplicateFieldName) {
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=T16 width=16\n"
                            "bits: imm8@15:8, imm8@7:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               ValidationError);
}

TEST(ParseCorpus, RejectsUnknownAttribute) {
  EXPECT_THROW(parse_corpus("[encoding] id=X name=X iset=T16 width=16 foo=1\n"
                            "bits: '11011110'@15:8, imm8@7:0\n"
                            "decode: <<< >>>\n"
                            "execute: <<< >>>\n"),
               SyntaxError);
}

TEST(ParseCorpus, RejectsContentBeforeFirstEncoding) {
  EXPECT_THROW(parse_corpus("bits: '1'@0:0\n"), SyntaxError);
}

TEST(ParseCorpus, DiagnosticsNameSourceAndLine) {
  try {
    parse_corpus(
        "[encoding] id=X name=X iset=T16 width=16\n"
        "bits: '1101111'@15:9, imm8@7:0\n"
        "decode: <<< >>>\n"
        "execute: <<< >>>\n",
        "sample.corpus");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("X"), std::string::npos);
  }
}

TEST(EncodeDecodeWord, RoundTripsStrExample) {
  Corpus corpus = load_corpus(kBaselineCorpus);
  const InstructionSpec* str = corpus.find("STR-imm-T32");
  ASSERT_NE(str, nullptr);

  const std::map<std::string, std::uint32_t> values{
      {"Rn", 15}, {"Rt", 0}, {"P", 1}, {"U", 0}, {"W", 1}, {"imm8", 0xdd}};
  EXPECT_EQ(encode_word(str->diagram, values), 0xf84f0dddu);

  auto decoded = decode_word(str->diagram, 0xf84f0dddu);
  EXPECT_EQ(decoded, values);
}

TEST(EncodeDecodeWord, Errors) {
  Corpus corpus = load_corpus(kBaselineCorpus);
  const InstructionSpec* str = corpus.find("STR-imm-T32");
  ASSERT_NE(str, nullptr);

  std::map<std::string, std::uint32_t> values{
      {"Rn", 15}, {"Rt", 0}, {"P", 1}, {"U", 0}, {"W", 1}, {"imm8", 0xdd}};

  auto missing = values;
  missing.erase("Rn");
  EXPECT_THROW(encode_word(str->diagram, missing), ValidationError);

  auto too_big = values;
  too_big["P"] = 2;  // one-bit field
  EXPECT_THROW(encode_word(str->diagram, too_big), ValidationError);

  // Word whose constant bits do not match the diagram.
  EXPECT_THROW(decode_word(str->diagram, 0x00000000u), ValidationError);
}

TEST(CombinedStatements, ConcatenatesDecodeThenExecute) {
  Corpus corpus = load_corpus(kBaselineCorpus);
  const InstructionSpec* str = corpus.find("STR-imm-T32");
  ASSERT_NE(str, nullptr);
  auto combined = str->combined_statements();
  EXPECT_EQ(combined.size(), str->decode.statements.size() +
                                 str->execute.statements.size());
  ASSERT_FALSE(combined.empty());
  EXPECT_EQ(combined.front(), str->decode.statements.front());
  EXPECT_EQ(combined.back(), str->execute.statements.back());
}

}  // namespace
}  // namespace specdiff
