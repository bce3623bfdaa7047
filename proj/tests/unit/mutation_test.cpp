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

#include "specdiff/mutation.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "specdiff/analysis.h"
#include "specdiff/errors.h"
#include "specdiff/util.h"

namespace specdiff {
namespace {

Corpus& baseline() {
  static Corpus corpus =
      load_corpus(SPECDIFF_SOURCE_DIR "/corpus/baseline.corpus");
  return corpus;
}

Field make_field(const std::string& name, int hi, int lo) {
  Field f;
  f.name = name;
  f.hi = hi;
  f.lo = lo;
  return f;
}

Field make_constant(const std::string& bits, int hi, int lo) {
  Field f;
  f.constant_bits = bits;
  f.hi = hi;
  f.lo = lo;
  return f;
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    path_ = std::filesystem::temp_directory_path() /
            ("specdiff_mutation_test_" + std::to_string(counter_++) + ".txt");
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

TEST(InitMutationSet, ConstantFieldIsItsValue) {
  MutationSet set = init_mutation_set(make_constant("10", 21, 20), 1);
  EXPECT_TRUE(set.constant);
  EXPECT_TRUE(set.field_name.empty());
  EXPECT_EQ(set.values, (std::vector<std::uint32_t>{2}));
}

TEST(InitMutationSet, RegisterIndexRule) {
  MutationSet set = init_mutation_set(make_field("Rn", 19, 16), 1);
  ASSERT_EQ(set.values.size(), 4u);
  EXPECT_EQ(set.values[0], 0u);
  EXPECT_EQ(set.values[1], 1u);
  EXPECT_EQ(set.values[2], 15u);
  // The one random draw never selects SP/FP hazards or a duplicate.
  std::set<std::uint32_t> forbidden{0, 1, 11, 13, 15};
  EXPECT_FALSE(forbidden.count(set.values[3]));
  EXPECT_LE(set.values[3], 15u);

  // Across many seeds the draw stays clear of 11 and 13.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MutationSet s = init_mutation_set(make_field("Rm", 3, 0), seed);
    for (std::uint32_t v : s.values) {
      EXPECT_NE(v, 11u);
      EXPECT_NE(v, 13u);
    }
  }
}

TEST(InitMutationSet, NarrowRegisterIndexDropsOverflowingSeeds) {
  // Three-bit register field: 15 does not fit, so the rule fills up with
  // draws to four distinct values.
  MutationSet set = init_mutation_set(make_field("Rn", 5, 3), 9);
  ASSERT_EQ(set.values.size(), 4u);
  EXPECT_EQ(set.values[0], 0u);
  EXPECT_EQ(set.values[1], 1u);
  std::set<std::uint32_t> distinct(set.values.begin(), set.values.end());
  EXPECT_EQ(distinct.size(), 4u);
  for (std::uint32_t v : set.values) EXPECT_LE(v, 7u);

  // Two-bit register field saturates its whole domain.
  MutationSet two = init_mutation_set(make_field("Rd", 1, 0), 9);
  std::set<std::uint32_t> all(two.values.begin(), two.values.end());
  EXPECT_EQ(all, (std::set<std::uint32_t>{0, 1, 2, 3}));
}

TEST(InitMutationSet, ImmediateRule) {
  MutationSet imm8 = init_mutation_set(make_field("imm8", 7, 0), 5);
  ASSERT_EQ(imm8.values.size(), 8u);
  EXPECT_EQ(imm8.values[0], 255u);
  EXPECT_EQ(imm8.values[1], 0u);
  std::set<std::uint32_t> distinct(imm8.values.begin(), imm8.values.end());
  EXPECT_EQ(distinct.size(), 8u);
  for (std::uint32_t v : imm8.values) EXPECT_LE(v, 255u);

  MutationSet imm3 = init_mutation_set(make_field("imm3", 8, 6), 5);
  ASSERT_EQ(imm3.values.size(), 3u);
  EXPECT_EQ(imm3.values[0], 7u);
  EXPECT_EQ(imm3.values[1], 0u);

  MutationSet imm24 = init_mutation_set(make_field("imm24", 23, 0), 5);
  EXPECT_EQ(imm24.values.size(), 24u);
  EXPECT_EQ(imm24.values[0], 0xffffffu);
  EXPECT_EQ(imm24.values[1], 0u);
}

TEST(InitMutationSet, ConditionRuleIsAlwaysOnly) {
  MutationSet set = init_mutation_set(make_field("cond", 31, 28), 77);
  EXPECT_EQ(set.values, (std::vector<std::uint32_t>{14}));
}

TEST(InitMutationSet, OtherRule) {
  MutationSet bit = init_mutation_set(make_field("P", 10, 10), 3);
  EXPECT_EQ(bit.values, (std::vector<std::uint32_t>{0, 1}));

  // Multi-bit discriminator: width-many distinct draws.
  MutationSet type = init_mutation_set(make_field("type", 11, 8), 3);
  std::set<std::uint32_t> distinct(type.values.begin(), type.values.end());
  EXPECT_EQ(type.values.size(), 4u);
  EXPECT_EQ(distinct.size(), 4u);
  for (std::uint32_t v : type.values) EXPECT_LE(v, 15u);

  MutationSet size = init_mutation_set(make_field("size", 7, 6), 3);
  EXPECT_EQ(size.values.size(), 2u);
}

TEST(InitMutationSet, DeterministicPerSeed) {
  for (std::uint64_t seed : {0ULL, 42ULL, 1234567ULL}) {
    MutationSet a = init_mutation_set(make_field("imm8", 7, 0), seed);
    MutationSet b = init_mutation_set(make_field("imm8", 7, 0), seed);
    EXPECT_EQ(a.values, b.values);
  }
  MutationSet a = init_mutation_set(make_field("imm8", 7, 0), 1);
  MutationSet b = init_mutation_set(make_field("imm8", 7, 0), 2);
  EXPECT_NE(a.values, b.values);  // astronomically unlikely to collide
}

TEST(InitOverrides, LoadsFileFormat) {
  TempFile f(
      "# comment line\n"
      "\n"
      "VLD4-A32.Rn = 0, 1, 6, 15\n"
      "VLD4-A32.size = 0x1, 2\n");
  InitOverrides o = InitOverrides::load(f.path());
  EXPECT_FALSE(o.empty());
  ASSERT_NE(o.find("VLD4-A32", "Rn"), nullptr);
  EXPECT_EQ(*o.find("VLD4-A32", "Rn"),
            (std::vector<std::uint32_t>{0, 1, 6, 15}));
  EXPECT_EQ(*o.find("VLD4-A32", "size"), (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(o.find("VLD4-A32", "Rm"), nullptr);
  EXPECT_EQ(o.find("other", "Rn"), nullptr);
}

TEST(InitOverrides, LoadErrors) {
  EXPECT_THROW(InitOverrides::load("/nonexistent/init.sets"), IoError);
  EXPECT_THROW(InitOverrides::load(TempFile("just junk\n").path()), IoError);
  EXPECT_THROW(InitOverrides::load(TempFile("nofield = 1\n").path()), IoError);
  EXPECT_THROW(InitOverrides::load(TempFile("A.f = \n").path()), IoError);
  EXPECT_THROW(InitOverrides::load(TempFile("A.f = 1, x\n").path()), IoError);
  EXPECT_THROW(
      InitOverrides::load(TempFile("A.f = 1\nA.f = 2\n").path()), IoError);
}

// Witness projection for the register-overflow constraint: plain symbols
// pass through, the aux symbol maps back onto the case scrutinee field.
TEST(WitnessFieldValues, MapsAuxSymbolsToInducingArm) {
  const InstructionSpec* vld4 = baseline().find("VLD4-A32");
  ASSERT_NE(vld4, nullptr);
  auto combined = vld4->combined_statements();
  auto sites = extract_constraints(combined);
  Constraint site = symbolize_in_program(combined, sites.back());  // d4 > 31

  Witness w;
  w.assignment = {{"D", 1}, {"Vd", 10}, {"inc", 2}};
  auto fields = witness_field_values(*vld4, site, w);
  EXPECT_EQ(fields, (std::vector<std::pair<std::string, std::uint32_t>>{
                        {"D", 1}, {"Vd", 10}, {"type", 1}}));

  Witness v;
  v.assignment = {{"D", 0}, {"Vd", 0}, {"inc", 1}};
  EXPECT_EQ(witness_field_values(*vld4, site, v),
            (std::vector<std::pair<std::string, std::uint32_t>>{
                {"D", 0}, {"Vd", 0}, {"type", 0}}));
}

TEST(WitnessFieldValues, RejectsUninducedAuxValues) {
  const InstructionSpec* vld4 = baseline().find("VLD4-A32");
  ASSERT_NE(vld4, nullptr);
  auto combined = vld4->combined_statements();
  auto sites = extract_constraints(combined);
  Constraint site = symbolize_in_program(combined, sites.back());

  Witness w;
  w.assignment = {{"D", 0}, {"Vd", 0}, {"inc", 3}};  // no arm yields inc = 3
  EXPECT_THROW(witness_field_values(*vld4, site, w), MappingError);

  Witness unknown;
  unknown.assignment = {{"bogus", 1}};
  EXPECT_THROW(witness_field_values(*vld4, site, unknown), MappingError);
}

TEST(BuildMutationSets, DiagramOrderAndWitnessMerge) {
  const InstructionSpec* vld4 = baseline().find("VLD4-A32");
  ASSERT_NE(vld4, nullptr);
  auto combined = vld4->combined_statements();
  auto sites = extract_constraints(combined);
  Constraint site = symbolize_in_program(combined, sites.back());
  Constraint negated = site;
  negated.polarity = Polarity::kNegate;

  Witness assert_w;
  assert_w.assignment = {{"D", 1}, {"Vd", 10}, {"inc", 2}};
  assert_w.polarity = Polarity::kAssert;
  Witness negate_w;
  negate_w.assignment = {{"D", 0}, {"Vd", 0}, {"inc", 1}};
  negate_w.polarity = Polarity::kNegate;

  InitOverrides overrides;
  overrides.sets[{"VLD4-A32", "D"}] = {0, 1};
  overrides.sets[{"VLD4-A32", "Rn"}] = {0, 1, 6, 15};
  overrides.sets[{"VLD4-A32", "Vd"}] = {5, 6, 9, 12};
  overrides.sets[{"VLD4-A32", "type"}] = {0, 1};
  overrides.sets[{"VLD4-A32", "size"}] = {1, 2};
  overrides.sets[{"VLD4-A32", "align"}] = {0, 3};
  overrides.sets[{"VLD4-A32", "Rm"}] = {0, 1, 7, 15};

  auto sets = build_mutation_sets(
      *vld4, {{site, assert_w}, {negated, negate_w}}, 42, &overrides);

  // One set per diagram field, highest span first.
  ASSERT_EQ(sets.size(), vld4->diagram.fields.size());
  EXPECT_TRUE(sets[0].constant);  // '111101000'
  EXPECT_EQ(sets[1].field_name, "D");
  EXPECT_EQ(sets[1].values, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_TRUE(sets[2].constant);  // '10'
  EXPECT_EQ(sets[3].field_name, "Rn");
  EXPECT_EQ(sets[3].values, (std::vector<std::uint32_t>{0, 1, 6, 15}));
  // Witness values append in solved order, skipping duplicates.
  EXPECT_EQ(sets[4].field_name, "Vd");
  EXPECT_EQ(sets[4].values, (std::vector<std::uint32_t>{5, 6, 9, 12, 10, 0}));
  EXPECT_EQ(sets[5].field_name, "type");
  EXPECT_EQ(sets[5].values, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(sets[6].field_name, "size");
  EXPECT_EQ(sets[6].values, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(sets[7].field_name, "align");
  EXPECT_EQ(sets[7].values, (std::vector<std::uint32_t>{0, 3}));
  EXPECT_EQ(sets[8].field_name, "Rm");
  EXPECT_EQ(sets[8].values, (std::vector<std::uint32_t>{0, 1, 7, 15}));
}

TEST(BuildMutationSets, UsesPerFieldSeedStreams) {
  // Changing the campaign seed changes the draws; same seed reproduces.
  const InstructionSpec* str = baseline().find("STR-imm-T32");
  ASSERT_NE(str, nullptr);
  auto a = build_mutation_sets(*str, {}, 42);
  auto b = build_mutation_sets(*str, {}, 42);
  auto c = build_mutation_sets(*str, {}, 43);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].values, b[i].values);
  }
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    any_difference = any_difference || a[i].values != c[i].values;
  }
  EXPECT_TRUE(any_difference);
}

TEST(BuildMutationSets, OverrideValidation) {
  const InstructionSpec* vld4 = baseline().find("VLD4-A32");
  ASSERT_NE(vld4, nullptr);

  InitOverrides unknown_field;
  unknown_field.sets[{"VLD4-A32", "Rx"}] = {0};
  EXPECT_THROW(build_mutation_sets(*vld4, {}, 42, &unknown_field),
               ValidationError);

  InitOverrides too_big;
  too_big.sets[{"VLD4-A32", "D"}] = {2};  // one-bit field
  EXPECT_THROW(build_mutation_sets(*vld4, {}, 42, &too_big), ValidationError);

  // Overrides for other encodings are ignored entirely.
  InitOverrides other;
  other.sets[{"OTHER-ENC", "nosuch"}] = {1, 2, 3};
  EXPECT_NO_THROW(build_mutation_sets(*vld4, {}, 42, &other));
}

TEST(BuildMutationSets, GuaranteesDeviationTriggeringRegisterValue) {
  // The undefined-arm witness (Rn == 15) must always survive into the
  // register field's mutation set, whatever the seed draws.
  const InstructionSpec* str = baseline().find("STR-imm-T32");
  ASSERT_NE(str, nullptr);
  auto combined = str->combined_statements();
  auto sites = extract_constraints(combined);
  Constraint site = symbolize_in_program(combined, sites[0]);  // Rn == '1111'
  auto w = solve(site, domains_for(site));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->assignment.at("Rn"), 15u);

  auto sets = build_mutation_sets(*str, {{site, *w}}, 42);
  for (const auto& set : sets) {
    if (set.field_name == "Rn") {
      EXPECT_TRUE(set.contains(15));
      return;
    }
  }
  FAIL() << "no Rn mutation set";
}

}  // namespace
}  // namespace specdiff
