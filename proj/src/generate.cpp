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

#include "specdiff/generate.h"

#include <cstdio>
#include <sstream>

#include "specdiff/errors.h"
#include "specdiff/eval.h"
#include "specdiff/util.h"

namespace specdiff {

namespace {

constexpr std::uint64_t kMaxProduct = std::uint64_t{1} << 26;

// True when the symbolized expression mentions only encoding/auxiliary
// symbols, i.e. no leftover variables or architectural-state reads.
bool is_symbol_only(const asl::ExprPtr& e) {
  struct V {
    bool operator()(const asl::SymbolRef&) { return true; }
    bool operator()(const asl::VarRef&) { return false; }
    bool operator()(const asl::BitLit&) { return true; }
    bool operator()(const asl::IntLit&) { return true; }
    bool operator()(const asl::Concat& n) {
      return is_symbol_only(n.lhs) && is_symbol_only(n.rhs);
    }
    bool operator()(const asl::Call& n) {
      for (const auto& a : n.args) {
        if (!is_symbol_only(a)) return false;
      }
      return true;
    }
    bool operator()(const asl::Binary& n) {
      return is_symbol_only(n.lhs) && is_symbol_only(n.rhs);
    }
    bool operator()(const asl::Not& n) { return is_symbol_only(n.operand); }
    bool operator()(const asl::IfExpr& n) {
      return is_symbol_only(n.cond) && is_symbol_only(n.then_value) &&
             is_symbol_only(n.else_value);
    }
    bool operator()(const asl::Element&) { return false; }
  };
  return std::visit(V{}, e->node);
}

bool constraint_is_solvable(const Constraint& c) {
  if (!is_symbol_only(c.expr)) return false;
  for (const auto& p : c.path) {
    if (!is_symbol_only(p)) return false;
  }
  for (const auto& s : c.side) {
    if (!is_symbol_only(s)) return false;
  }
  for (const auto& [name, width] : c.widths) {
    (void)name;
    if (width < 1 || width > 24) return false;
  }
  return true;
}

EncodingGeneration generate_encoding(const InstructionSpec& spec,
                                     const GenerateOptions& options,
                                     IsetStats* stats) {
  EncodingGeneration gen;
  gen.spec = &spec;

  std::vector<asl::StmtPtr> combined = spec.combined_statements();
  std::vector<Constraint> raw_sites = extract_constraints(combined);
  std::vector<std::pair<Constraint, Witness>> solved;

  for (const auto& raw : raw_sites) {
    SolvedSite site;
    ++stats->sites;
    try {
      site.site = symbolize_in_program(combined, raw);
    } catch (const SymbolizeError& e) {
      site.site = raw;
      site.skipped = true;
      site.skip_reason = e.what();
    }
    if (!site.skipped && !constraint_is_solvable(site.site)) {
      site.skipped = true;
      site.skip_reason =
          "constraint depends on architectural state or has an "
          "out-of-range symbol width";
    }
    if (site.skipped) {
      ++stats->skipped_sites;
      if (options.warnings) {
        *options.warnings << "warning: " << spec.id
                          << ": skipping constraint site '"
                          << asl::to_string(raw.expr)
                          << "': " << site.skip_reason << "\n";
      }
      gen.sites.push_back(std::move(site));
      continue;
    }
    std::vector<SymbolDomain> domains = domains_for(site.site);
    std::uint64_t solve_seed =
        derive_seed(options.seed, spec.id, asl::to_string(site.site.expr));
    Constraint assert_c = site.site;
    assert_c.polarity = Polarity::kAssert;
    Constraint negate_c = site.site;
    negate_c.polarity = Polarity::kNegate;
    try {
      site.assert_witness = solve(assert_c, domains, solve_seed);
    } catch (const SolverTimeout&) {
      site.assert_timed_out = true;
      ++stats->solver_timeouts;
      if (options.warnings) {
        *options.warnings << "warning: " << spec.id
                          << ": solver budget exhausted asserting '"
                          << asl::to_string(site.site.expr) << "'\n";
      }
    }
    try {
      site.negate_witness = solve(negate_c, domains, solve_seed);
    } catch (const SolverTimeout&) {
      site.negate_timed_out = true;
      ++stats->solver_timeouts;
      if (options.warnings) {
        *options.warnings << "warning: " << spec.id
                          << ": solver budget exhausted negating '"
                          << asl::to_string(site.site.expr) << "'\n";
      }
    }
    if (site.assert_witness) {
      ++stats->witnesses;
      solved.emplace_back(assert_c, *site.assert_witness);
    }
    if (site.negate_witness) {
      ++stats->witnesses;
      solved.emplace_back(negate_c, *site.negate_witness);
    }
    gen.sites.push_back(std::move(site));
  }

  gen.sets = build_mutation_sets(spec, solved, options.seed,
                                 options.overrides.empty()
                                     ? nullptr
                                     : &options.overrides);
  gen.streams = cartesian_generate(spec, gen.sets, options.mode);
  return gen;
}

}  // namespace

std::vector<InstructionStream> cartesian_generate(
    const InstructionSpec& spec, const std::vector<MutationSet>& sets,
    GenMode mode) {
  if (sets.size() != spec.diagram.fields.size()) {
    throw ValidationError(spec.id,
                          "mutation sets do not match the encoding diagram");
  }
  std::uint64_t total = 1;
  for (const auto& set : sets) {
    if (set.values.empty()) {
      throw ValidationError(spec.id, "empty mutation set for field '" +
                                         set.field_name + "'");
    }
    total *= set.values.size();
    if (total > kMaxProduct) {
      throw ValidationError(
          spec.id, "mutation-set product exceeds the stream budget of 2^26");
    }
  }
  // Row-major strides: the first (highest) field varies slowest.
  const std::size_t nfields = sets.size();
  std::vector<std::uint64_t> stride(nfields, 1);
  for (std::size_t i = nfields; i-- > 1;) {
    stride[i - 1] = stride[i] * sets[i].values.size();
  }

  std::vector<InstructionStream> streams(total);
  bool failed = false;
  std::string failure;

  const bool parallel = mode == GenMode::kParallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
    try {
      InstructionStream s;
      s.encoding_id = spec.id;
      s.iset = spec.iset;
      s.width = spec.diagram.width;
      std::uint32_t word = 0;
      std::map<std::string, std::uint32_t> symbols;
      for (std::size_t fi = 0; fi < nfields; ++fi) {
        const Field& field = spec.diagram.fields[fi];
        std::size_t sel = static_cast<std::size_t>(
            (static_cast<std::uint64_t>(idx) / stride[fi]) %
            sets[fi].values.size());
        std::uint32_t value = sets[fi].values[sel];
        word |= value << field.lo;
        if (!field.is_constant()) {
          s.assignment.emplace_back(field.name, value);
          symbols[field.name] = value;
        }
      }
      s.word = word;
      s.tag = eval_decode(spec.decode, symbols).tag;
      streams[static_cast<std::size_t>(idx)] = std::move(s);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed) {
          failed = true;
          failure = e.what();
        }
      }
    }
  }
  if (failed) {
    throw EvalError("stream generation failed for encoding '" + spec.id +
                    "': " + failure);
  }
  return streams;
}

GenerateResult generate_streams(const Corpus& corpus,
                                const GenerateOptions& options) {
  GenerateResult result;
  if (options.encoding_filter && !corpus.find(*options.encoding_filter)) {
    throw UnknownEncoding(*options.encoding_filter);
  }
  std::set<std::string> attempted_instructions;
  std::set<std::string> covered_instructions;
  for (const auto& spec : corpus.encodings) {
    if (options.iset_filter && spec.iset != *options.iset_filter) continue;
    if (options.encoding_filter && spec.id != *options.encoding_filter)
      continue;
    ++result.attempted_encodings;
    attempted_instructions.insert(spec.name);
    IsetStats& stats = result.by_iset[spec.iset];
    EncodingGeneration gen = generate_encoding(spec, options, &stats);
    stats.encodings.insert(spec.id);
    stats.instructions.insert(spec.name);
    stats.streams += gen.streams.size();
    result.total_streams += gen.streams.size();
    if (!gen.streams.empty()) {
      ++result.covered_encodings;
      covered_instructions.insert(spec.name);
    }
    result.encodings.push_back(std::move(gen));
  }
  result.attempted_instructions = attempted_instructions.size();
  result.covered_instructions = covered_instructions.size();
  if (result.encodings.empty()) {
    throw ValidationError("no encodings matched the requested filters");
  }
  return result;
}

std::string render_summary(const GenerateResult& result, std::uint64_t seed) {
  std::ostringstream out;
  out << "generation summary (seed=" << seed << ")\n";
  out << "  iset  encodings  instructions  streams   sites  witnesses"
         "  timeouts  skipped\n";
  for (const auto& [iset, stats] : result.by_iset) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "  %-4s  %9zu  %12zu  %7zu  %6zu  %9zu  %8zu  %7zu\n",
                  to_string(iset).c_str(), stats.encodings.size(),
                  stats.instructions.size(), stats.streams, stats.sites,
                  stats.witnesses, stats.solver_timeouts,
                  stats.skipped_sites);
    out << buf;
  }
  out << "  generated instruction streams: " << result.total_streams << "\n";
  out << "  encodings covered: " << result.covered_encodings << "/"
      << result.attempted_encodings << "\n";
  out << "  instructions covered: " << result.covered_instructions << "/"
      << result.attempted_instructions << "\n";
  return out.str();
}

}  // namespace specdiff
