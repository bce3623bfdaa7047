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
// Acceptance gate: eight end-to-end properties of the toolchain, each
// checked against an independent oracle (hand-computed counts, brute-force
// enumeration, algebraic identities, or recorded golden fixtures) and
// reported as one "[ACCEPT] C<n> <name>: PASS|FAIL" line.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "specdiff/analysis.h"
#include "specdiff/asl.h"
#include "specdiff/backend.h"
#include "specdiff/campaign.h"
#include "specdiff/corpus.h"
#include "specdiff/cpu_state.h"
#include "specdiff/eval.h"
#include "specdiff/generate.h"
#include "specdiff/mutation.h"
#include "specdiff/solver.h"
#include "specdiff/stream.h"
#include "specdiff/verdict.h"

namespace specdiff {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCorpus = SPECDIFF_SOURCE_DIR "/corpus/baseline.corpus";
constexpr const char* kVld4Init =
    SPECDIFF_SOURCE_DIR "/tests/fixtures/vld4_handpicked.init";
constexpr const char* kGoldenStreams =
    SPECDIFF_SOURCE_DIR "/tests/fixtures/golden/streams.tsv";
constexpr const char* kDumpsEmu =
    SPECDIFF_SOURCE_DIR "/tests/fixtures/golden/dumps_e";
constexpr const char* kDumpsReal =
    SPECDIFF_SOURCE_DIR "/tests/fixtures/golden/dumps_r";

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("specdiff_accept_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  TempDir capture;
  fs::path out_file = capture.path / "stdout";
  fs::path err_file = capture.path / "stderr";
  std::string cmd = std::string(SPECDIFF_CLI_PATH) + " " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// Runs one criterion body, enforces its runtime budget, and prints the
// verdict line. Exceptions escaping the body fail the criterion instead of
// aborting the binary, so every criterion always reports.
void run_criterion(int number, const char* name, double budget_seconds,
                   const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    ADD_FAILURE() << "criterion raised: " << e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  EXPECT_LT(elapsed, budget_seconds)
      << "criterion exceeded its runtime budget";
  const bool pass = !::testing::Test::HasFailure();
  std::printf("[ACCEPT] C%d %s: %s\n", number, name, pass ? "PASS" : "FAIL");
  std::fflush(stdout);
}

// C1: with the hand-picked initial sets injected, the structure-load
// encoding expands to exactly 5,760 streams from per-field set sizes
// [1,2,1,4,6,2,4,3,5] — through the library and through the CLI.
TEST(Acceptance, C1Vld4MutationProduct) {
  run_criterion(1, "vld4_mutation_product", 5.0, [] {
    const std::vector<std::size_t> kExpectedSizes = {1, 2, 1, 4, 6, 2, 4, 3, 5};

    Corpus corpus = load_corpus(kCorpus);
    GenerateOptions options;
    options.seed = 42;
    options.encoding_filter = "VLD4-A32";
    options.overrides = InitOverrides::load(kVld4Init);
    GenerateResult result = generate_streams(corpus, options);

    ASSERT_EQ(result.encodings.size(), 1u);
    const EncodingGeneration& gen = result.encodings.front();
    std::vector<std::size_t> sizes;
    for (const MutationSet& set : gen.sets) sizes.push_back(set.values.size());
    EXPECT_EQ(sizes, kExpectedSizes);
    EXPECT_EQ(gen.streams.size(), 5760u);
    EXPECT_EQ(result.total_streams, 5760u);

    TempDir out;
    CliResult r = run_cli("generate --corpus " + std::string(kCorpus) +
                          " --out " + out.path.string() +
                          " --seed 42 --encoding VLD4-A32 --init-fixture " +
                          std::string(kVld4Init));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::ifstream in(out.path / "streams.tsv");
    EXPECT_EQ(read_streams(in).size(), 5760u);
    nlohmann::json j = nlohmann::json::parse(slurp(out.path / "summary.json"));
    EXPECT_EQ(j["total_streams"].get<std::size_t>(), 5760u);
    ASSERT_EQ(j["encodings"].size(), 1u);
    EXPECT_EQ(j["encodings"][0]["field_sizes"].get<std::vector<std::size_t>>(),
              kExpectedSizes);
  });
}

// C2: the register-overflow guard of the structure load solves under both
// polarities; each witness survives substitution, and the asserted one
// overflows the register file arithmetically: Vd + 16*D + 3*inc > 31.
TEST(Acceptance, C2RegisterOverflowWitnesses) {
  run_criterion(2, "register_overflow_witnesses", 1.0, [] {
    Corpus corpus = load_corpus(kCorpus);
    const InstructionSpec* spec = corpus.find("VLD4-A32");
    ASSERT_NE(spec, nullptr);
    std::vector<asl::StmtPtr> statements = spec->combined_statements();

    const std::vector<Constraint> sites = extract_constraints(statements);
    const Constraint* overflow = nullptr;
    for (const Constraint& site : sites) {
      if (asl::to_string(site.expr) == "d4 > 31") overflow = &site;
    }
    ASSERT_NE(overflow, nullptr) << "register-overflow site not extracted";

    Constraint sym = symbolize_in_program(statements, *overflow);
    auto [assert_w, negate_w] = solve_both(sym, domains_for(sym), 42);
    ASSERT_TRUE(assert_w.has_value());
    ASSERT_TRUE(negate_w.has_value());

    Constraint as_assert = sym;
    as_assert.polarity = Polarity::kAssert;
    Constraint as_negate = sym;
    as_negate.polarity = Polarity::kNegate;
    EXPECT_TRUE(constraint_holds(as_assert, assert_w->assignment));
    EXPECT_TRUE(constraint_holds(as_negate, negate_w->assignment));

    // The lifted increment is the lone auxiliary symbol; d4 expands to
    // UInt(D:Vd) + 3*inc = Vd + 16*D + 3*inc.
    ASSERT_EQ(sym.aux_defs.size(), 1u);
    const std::string& inc = sym.aux_defs.begin()->first;
    auto overflows = [&](const Witness& w) {
      return w.assignment.at("Vd") + 16u * w.assignment.at("D") +
                 3u * w.assignment.at(inc) >
             31u;
    };
    EXPECT_TRUE(overflows(*assert_w));
    EXPECT_FALSE(overflows(*negate_w));
  });
}

// C3: word 0xf84f0ddd decodes against the T32 store-immediate diagram to
// Rn = 15, which its decode program rejects as undefined.
TEST(Acceptance, C3StrUndefinedDecode) {
  run_criterion(3, "str_undefined_decode", 1.0, [] {
    Corpus corpus = load_corpus(kCorpus);
    const InstructionSpec* spec = corpus.find("STR-imm-T32");
    ASSERT_NE(spec, nullptr);
    std::map<std::string, std::uint32_t> symbols =
        decode_word(spec->diagram, 0xf84f0dddu);
    EXPECT_EQ(symbols.at("Rn"), 15u);
    EXPECT_EQ(eval_decode(spec->decode, symbols).tag, DecodeTag::kUndefined);
  });
}

// Evaluates a symbolized site against one stream's field assignment under
// the given polarity. Auxiliary (case-lifted) symbols are recovered by
// matching the stream's scrutinee field value against the inducing arm
// patterns; a stream whose scrutinee selects no arm cannot exercise the
// site at all.
bool stream_satisfies(const SolvedSite& solved, Polarity polarity,
                      const std::map<std::string, std::uint32_t>& fields) {
  std::map<std::string, std::uint32_t> assignment = fields;
  for (const auto& [aux, choices] : solved.site.aux_defs) {
    bool derived = false;
    for (const AuxChoice& choice : choices) {
      auto it = fields.find(choice.source_symbol);
      if (it == fields.end()) return false;
      if (it->second == asl::BitLit{choice.pattern}.value()) {
        assignment[aux] = static_cast<std::uint32_t>(choice.value);
        derived = true;
        break;
      }
    }
    if (!derived) return false;
  }
  Constraint check = solved.site;
  check.polarity = polarity;
  return constraint_holds(check, assignment);
}

// C4: over the whole shipped corpus, every emitted stream matches its
// encoding schema (constants reproduce, tag matches decode), every
// encoding is covered, and every fully solved constraint site is exercised
// by at least one stream under each polarity.
TEST(Acceptance, C4GenerationValidityCoverage) {
  run_criterion(4, "generation_validity_coverage", 30.0, [] {
    Corpus corpus = load_corpus(kCorpus);
    ASSERT_GE(corpus.encodings.size(), 12u);

    GenerateOptions options;
    options.seed = 42;
    std::ostringstream warnings;
    options.warnings = &warnings;
    GenerateResult result = generate_streams(corpus, options);

    EXPECT_EQ(result.attempted_encodings, corpus.encodings.size());
    EXPECT_EQ(result.covered_encodings, result.attempted_encodings);
    EXPECT_EQ(result.covered_instructions, result.attempted_instructions);

    for (const EncodingGeneration& gen : result.encodings) {
      const InstructionSpec& spec = *gen.spec;
      ASSERT_FALSE(gen.streams.empty()) << spec.id;

      for (const InstructionStream& s : gen.streams) {
        ASSERT_EQ(s.word & spec.diagram.constant_mask(),
                  spec.diagram.constant_value())
            << spec.id << ": stream " << s.hex_word()
            << " violates the schema mask";
        validate_stream(s, corpus);
      }

      struct Pending {
        const SolvedSite* site;
        Polarity polarity;
      };
      std::vector<Pending> pending;
      for (const SolvedSite& site : gen.sites) {
        if (site.skipped || !site.assert_witness || !site.negate_witness) {
          continue;
        }
        pending.push_back({&site, Polarity::kAssert});
        pending.push_back({&site, Polarity::kNegate});
      }
      for (const InstructionStream& s : gen.streams) {
        if (pending.empty()) break;
        const std::map<std::string, std::uint32_t> fields = s.assignment_map();
        std::erase_if(pending, [&](const Pending& p) {
          return stream_satisfies(*p.site, p.polarity, fields);
        });
      }
      for (const Pending& p : pending) {
        ADD_FAILURE() << spec.id << ": no emitted stream exercises '"
                      << asl::to_string(p.site->site.expr) << "' under the "
                      << (p.polarity == Polarity::kAssert ? "asserted"
                                                          : "negated")
                      << " polarity";
      }
    }
  });
}

bool compare_ints(asl::BinaryOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case asl::BinaryOp::kEq:
      return a == b;
    case asl::BinaryOp::kNe:
      return a != b;
    case asl::BinaryOp::kLt:
      return a < b;
    case asl::BinaryOp::kGt:
      return a > b;
    case asl::BinaryOp::kLe:
      return a <= b;
    case asl::BinaryOp::kGe:
      return a >= b;
    default:
      ADD_FAILURE() << "not a comparison operator";
      return false;
  }
}

// C5: on 500 random linear constraints over at most 4 symbols of at most
// 4 bits, the solver's sat/unsat decision agrees with brute-force
// enumeration every time, and every witness re-verifies arithmetically.
TEST(Acceptance, C5SolverOracleEquivalence) {
  run_criterion(5, "solver_oracle_equivalence", 60.0, [] {
    const std::array<asl::BinaryOp, 6> kOps = {
        asl::BinaryOp::kEq, asl::BinaryOp::kNe, asl::BinaryOp::kLt,
        asl::BinaryOp::kGt, asl::BinaryOp::kLe, asl::BinaryOp::kGe};
    std::mt19937_64 rng(20260814u);
    int sat_trials = 0;
    int unsat_trials = 0;

    for (int trial = 0; trial < 500; ++trial) {
      const int nsym = 1 + static_cast<int>(rng() % 4);
      std::vector<SymbolDomain> domains;
      std::vector<std::int64_t> coeffs;
      Constraint c;
      asl::ExprPtr sum;
      for (int i = 0; i < nsym; ++i) {
        const std::string name = "s" + std::to_string(i);
        const int width = 1 + static_cast<int>(rng() % 4);
        domains.push_back({name, width});
        c.widths[name] = width;
        const int draw = static_cast<int>(rng() % 6);
        const std::int64_t coeff = draw < 3 ? draw - 3 : draw - 2;  // +-1..3
        coeffs.push_back(coeff);
        asl::ExprPtr term = asl::make_expr(asl::Binary{
            asl::BinaryOp::kMul, asl::make_expr(asl::IntLit{coeff}),
            asl::make_expr(asl::Call{
                asl::Builtin::kUInt,
                {asl::make_expr(asl::SymbolRef{name, width})}})});
        sum = sum ? asl::make_expr(
                        asl::Binary{asl::BinaryOp::kAdd, sum, term})
                  : term;
      }
      const std::int64_t rhs = static_cast<std::int64_t>(rng() % 81) - 40;
      const asl::BinaryOp op = kOps[rng() % kOps.size()];
      c.expr = asl::make_expr(
          asl::Binary{op, sum, asl::make_expr(asl::IntLit{rhs})});
      c.polarity = (rng() % 2) ? Polarity::kAssert : Polarity::kNegate;

      const std::optional<Witness> witness =
          solve(c, domains, static_cast<std::uint64_t>(trial));

      // Brute-force oracle over the joint domain.
      std::uint64_t combos = 1;
      for (const SymbolDomain& d : domains) combos *= (1ull << d.width);
      bool oracle_sat = false;
      for (std::uint64_t ix = 0; ix < combos && !oracle_sat; ++ix) {
        std::uint64_t rest = ix;
        std::int64_t total = 0;
        for (int i = 0; i < nsym; ++i) {
          const std::uint64_t card = 1ull << domains[i].width;
          total += coeffs[static_cast<std::size_t>(i)] *
                   static_cast<std::int64_t>(rest % card);
          rest /= card;
        }
        const bool atom = compare_ints(op, total, rhs);
        if (c.polarity == Polarity::kAssert ? atom : !atom) oracle_sat = true;
      }

      ASSERT_EQ(witness.has_value(), oracle_sat)
          << "trial " << trial << ": solver said "
          << (witness ? "sat" : "unsat") << " on "
          << asl::to_string(c.expr) << " (polarity "
          << (c.polarity == Polarity::kAssert ? "assert" : "negate") << ")";
      if (witness) {
        EXPECT_TRUE(constraint_holds(c, witness->assignment));
        std::int64_t total = 0;
        for (int i = 0; i < nsym; ++i) {
          total += coeffs[static_cast<std::size_t>(i)] *
                   static_cast<std::int64_t>(
                       witness->assignment.at("s" + std::to_string(i)));
        }
        const bool atom = compare_ints(op, total, rhs);
        EXPECT_TRUE(c.polarity == Polarity::kAssert ? atom : !atom)
            << "trial " << trial << ": witness fails the oracle arithmetic";
        ++sat_trials;
      } else {
        ++unsat_trials;
      }
    }

    // The random family must exercise both outcomes to be meaningful.
    EXPECT_GT(sat_trials, 0);
    EXPECT_GT(unsat_trials, 0);
  });
}

// C6: compare_final over the exhaustive grid of signal pairs {0, 4, 11,
// -1}^2 times all 16 per-component equality patterns matches the
// hand-derived oracle, including the memory-excluded equal-nonzero case.
TEST(Acceptance, C6ComparisonTruthTable) {
  run_criterion(6, "comparison_truth_table", 5.0, [] {
    const std::array<int, 4> kSigs = {0, 4, 11, -1};
    CpuState base;
    base.pc_off = 4;
    for (std::size_t i = 0; i < base.regs.size(); ++i) {
      base.regs[i] = 0x1000 + i;
    }
    base.nzcv = 0b0101;
    base.mem = {{0x10, 4, 0xdeadbeef}};

    int cases = 0;
    for (int se : kSigs) {
      for (int sr : kSigs) {
        for (int pattern = 0; pattern < 16; ++pattern) {
          const bool pc_eq = pattern & 1;
          const bool regs_eq = pattern & 2;
          const bool nzcv_eq = pattern & 4;
          const bool mem_eq = pattern & 8;

          CpuState emu = base;
          emu.sig = se;
          CpuState real = base;
          real.sig = sr;
          if (!pc_eq) real.pc_off += 4;
          if (!regs_eq) real.regs[5] ^= 0xff;
          if (!nzcv_eq) real.nzcv ^= 0b0010;
          if (!mem_eq) real.mem[0].value ^= 1;

          VerdictKind want_kind = VerdictKind::kConsistent;
          std::optional<BehaviorCategory> want_category;
          if (se == -1 || sr == -1) {
            want_kind = VerdictKind::kInconsistent;
            want_category = BehaviorCategory::kOther;
          } else if (se != sr) {
            want_kind = VerdictKind::kInconsistent;
            want_category = se == 0   ? BehaviorCategory::kSigRealOnly
                            : sr == 0 ? BehaviorCategory::kSigEmuOnly
                                      : BehaviorCategory::kSigBothNonzeroDiffer;
          } else if (se == 0) {
            if (!(pc_eq && regs_eq && nzcv_eq && mem_eq)) {
              want_kind = VerdictKind::kInconsistent;
              want_category = BehaviorCategory::kSigZeroStateDiffer;
            }
          } else if (!(pc_eq && regs_eq && nzcv_eq)) {  // memory excluded
            want_kind = VerdictKind::kInconsistent;
            want_category = BehaviorCategory::kSigEqualNonzeroStateDiffer;
          }

          const Verdict v = compare_final(emu, real);
          EXPECT_EQ(v.kind, want_kind)
              << "se=" << se << " sr=" << sr << " pattern=" << pattern;
          EXPECT_EQ(v.category, want_category)
              << "se=" << se << " sr=" << sr << " pattern=" << pattern;
          EXPECT_EQ(v.sig_e, se);
          EXPECT_EQ(v.sig_r, sr);
          ++cases;
        }
      }
    }
    EXPECT_EQ(cases, 256);

    // The headline memory-excluded case once more, explicitly: same
    // nonzero signal and only memory differing is consistent.
    CpuState emu = base;
    emu.sig = 4;
    CpuState real = base;
    real.sig = 4;
    real.mem[0].value ^= 0xff;
    EXPECT_EQ(compare_final(emu, real).kind, VerdictKind::kConsistent);
  });
}

// C7: a replay campaign over the 20 hand-labeled golden state-dump pairs
// reproduces every hand-computed verdict, all category tallies, and the
// single emulator-bug candidate (an undefined-tagged stream where the
// emulated run raised SIGSEGV but the reference raised SIGILL).
TEST(Acceptance, C7GoldenCampaignReplay) {
  run_criterion(7, "golden_campaign_replay", 10.0, [] {
    Corpus corpus = load_corpus(kCorpus);
    std::ifstream in(kGoldenStreams);
    const std::vector<InstructionStream> streams = read_streams(in);
    ASSERT_EQ(streams.size(), 20u);

    ReplayBackend emu{fs::path(kDumpsEmu)};
    ReplayBackend real{fs::path(kDumpsReal)};
    TempDir tmp;
    CampaignConfig config;
    config.journal_path = (tmp.path / "journal.jsonl").string();
    config.workers = 2;
    const CampaignReport report =
        run_campaign(streams, corpus, emu, real, config);

    struct Expected {
      const char* verdict;
      const char* category;  // behavior category or filter reason
      const char* cause;
    };
    const std::array<Expected, 20> kExpected = {{
        {"inconsistent", "sig_both_nonzero_differ", "qemu_bug_candidate"},
        {"consistent", nullptr, nullptr},
        {"inconsistent", "sig_real_only", "unpredictable"},
        {"consistent", nullptr, nullptr},
        {"filtered", "sp_fp_access", nullptr},
        {"filtered", "branch_normal", nullptr},
        {"consistent", nullptr, nullptr},
        {"inconsistent", "sig_equal_nonzero_state_differ", "undefined"},
        {"consistent", nullptr, nullptr},
        {"inconsistent", "sig_zero_state_differ", "unknown"},
        {"inconsistent", "sig_zero_state_differ", "unpredictable"},
        {"consistent", nullptr, nullptr},
        {"inconsistent", "sig_equal_nonzero_state_differ", "unknown"},
        {"consistent", nullptr, nullptr},
        {"inconsistent", "sig_zero_state_differ", "unknown"},
        {"filtered", "branch_normal", nullptr},
        {"inconsistent", "sig_emu_only", "unknown"},
        {"inconsistent", "sig_real_only", "unpredictable"},
        {"inconsistent", "other", "unknown"},
        {"inconsistent", "sig_zero_state_differ", "unknown"},
    }};

    const std::vector<JournalRecord> records =
        read_journal(config.journal_path);
    ASSERT_EQ(records.size(), kExpected.size());
    for (std::size_t i = 0; i < kExpected.size(); ++i) {
      const Expected& want = kExpected[i];
      EXPECT_EQ(records[i].verdict, want.verdict)
          << "stream " << i << " (" << records[i].encoding_id << " "
          << records[i].word_hex << ")";
      if (want.category) {
        EXPECT_EQ(records[i].category, std::string(want.category))
            << "stream " << i;
      } else {
        EXPECT_FALSE(records[i].category.has_value()) << "stream " << i;
      }
      if (want.cause) {
        EXPECT_EQ(records[i].root_cause, std::string(want.cause))
            << "stream " << i;
      } else {
        EXPECT_FALSE(records[i].root_cause.has_value()) << "stream " << i;
      }
    }

    EXPECT_EQ(report.total, 20u);
    EXPECT_EQ(report.consistent.streams, 6u);
    EXPECT_EQ(report.inconsistent.streams, 11u);
    EXPECT_EQ(report.filtered.streams, 3u);
    EXPECT_EQ(report.by_filter.at("sp_fp_access").streams, 1u);
    EXPECT_EQ(report.by_filter.at("branch_normal").streams, 2u);
    EXPECT_EQ(report.by_category.at("other").streams, 1u);
    EXPECT_EQ(report.by_category.at("sig_both_nonzero_differ").streams, 1u);
    EXPECT_EQ(report.by_category.at("sig_emu_only").streams, 1u);
    EXPECT_EQ(report.by_category.at("sig_equal_nonzero_state_differ").streams,
              2u);
    EXPECT_EQ(report.by_category.at("sig_real_only").streams, 2u);
    EXPECT_EQ(report.by_category.at("sig_zero_state_differ").streams, 4u);
    EXPECT_EQ(report.by_cause.at("qemu_bug_candidate").streams, 1u);
    EXPECT_EQ(report.by_cause.at("undefined").streams, 1u);
    EXPECT_EQ(report.by_cause.at("unpredictable").streams, 3u);
    EXPECT_EQ(report.by_cause.at("unknown").streams, 6u);

    // The lone bug candidate is the canonical emulator deviation this
    // tool hunts: SIGSEGV from the emulated backend versus SIGILL from
    // the reference on an undefined-tagged stream.
    EXPECT_EQ(records[0].encoding_id, "STR-imm-T32");
    EXPECT_EQ(records[0].root_cause, std::string("qemu_bug_candidate"));
    EXPECT_EQ(streams[0].tag, DecodeTag::kUndefined);
    const InitialStateSpec init;
    const std::chrono::milliseconds timeout(1000);
    EXPECT_EQ(emu.run(streams[0], init, timeout).sig, 11);
    EXPECT_EQ(real.run(streams[0], init, timeout).sig, 4);
  });
}

// C8: two CLI generation runs with the same seed over the whole corpus
// produce byte-identical stream files.
TEST(Acceptance, C8GenerationDeterminism) {
  run_criterion(8, "generation_determinism", 30.0, [] {
    TempDir a;
    TempDir b;
    for (const TempDir* dir : {&a, &b}) {
      CliResult r = run_cli("generate --corpus " + std::string(kCorpus) +
                            " --out " + dir->path.string() + " --seed 42");
      ASSERT_EQ(r.exit_code, 0) << r.err;
    }
    const std::string first = slurp(a.path / "streams.tsv");
    const std::string second = slurp(b.path / "streams.tsv");
    ASSERT_FALSE(first.empty());
    EXPECT_TRUE(first == second)
        << "stream files differ between identically seeded runs";
  });
}

}  // namespace
}  // namespace specdiff
