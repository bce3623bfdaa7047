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
// Command-line front end.
//
//   specdiff generate  --corpus C --out DIR [--seed N] [--iset I]
//                      [--encoding ID] [--init-fixture F] [--serial]
//   specdiff annotate  --corpus C --streams IN --out OUT
//   specdiff diff      --corpus C --streams IN --out DIR
//                      --backend-e SPEC --backend-r SPEC
//                      [--timeout SECS] [--workers N] [--resume]
//   specdiff report    --journal J [--corpus C] [--json]
//
// Backend SPECs are either `replay:DIR` (pre-recorded state dumps), a bare
// directory path (same), or `process:CMD` / any other string (a command
// template run per stream).
//
// Exit codes: 0 success, 1 usage error, 2 validation/input error,
// 3 backend failure.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "specdiff/backend.h"
#include "specdiff/campaign.h"
#include "specdiff/corpus.h"
#include "specdiff/errors.h"
#include "specdiff/eval.h"
#include "specdiff/generate.h"
#include "specdiff/mutation.h"
#include "specdiff/stream.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw specdiff::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw specdiff::IoError("write failed: " + path.string());
}

std::vector<specdiff::InstructionStream> read_streams_file(
    const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw specdiff::IoError("cannot open streams: " + path.string());
  return specdiff::read_streams(in);
}

std::unique_ptr<specdiff::ExecutorBackend> make_backend(
    const std::string& spec) {
  if (spec.rfind("replay:", 0) == 0) {
    return std::make_unique<specdiff::ReplayBackend>(spec.substr(7));
  }
  if (spec.rfind("process:", 0) == 0) {
    return std::make_unique<specdiff::ProcessBackend>(spec.substr(8));
  }
  std::error_code ec;
  if (fs::is_directory(spec, ec)) {
    return std::make_unique<specdiff::ReplayBackend>(spec);
  }
  return std::make_unique<specdiff::ProcessBackend>(spec);
}

struct GenerateArgs {
  std::string corpus_path;
  std::string out_dir;
  std::uint64_t seed = 42;
  std::string iset;
  std::string encoding;
  std::string init_fixture;
  bool serial = false;
};

json generation_json(const specdiff::GenerateResult& result,
                     std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["total_streams"] = result.total_streams;
  j["attempted_encodings"] = result.attempted_encodings;
  j["covered_encodings"] = result.covered_encodings;
  j["attempted_instructions"] = result.attempted_instructions;
  j["covered_instructions"] = result.covered_instructions;
  j["by_iset"] = json::object();
  for (const auto& [iset, stats] : result.by_iset) {
    json s;
    s["encodings"] = stats.encodings.size();
    s["instructions"] = stats.instructions.size();
    s["streams"] = stats.streams;
    s["constraint_sites"] = stats.sites;
    s["witnesses"] = stats.witnesses;
    s["solver_timeouts"] = stats.solver_timeouts;
    s["skipped_sites"] = stats.skipped_sites;
    j["by_iset"][specdiff::to_string(iset)] = s;
  }
  j["encodings"] = json::array();
  for (const auto& gen : result.encodings) {
    json e;
    e["id"] = gen.spec->id;
    e["name"] = gen.spec->name;
    e["iset"] = specdiff::to_string(gen.spec->iset);
    e["streams"] = gen.streams.size();
    json sizes = json::array();
    json fields = json::array();
    for (const auto& set : gen.sets) {
      sizes.push_back(set.values.size());
      fields.push_back(set.constant ? "" : set.field_name);
    }
    e["field_sizes"] = sizes;
    e["fields"] = fields;
    e["constraint_sites"] = gen.sites.size();
    std::size_t witnesses = 0;
    std::size_t timeouts = 0;
    std::size_t skipped = 0;
    for (const auto& site : gen.sites) {
      if (site.assert_witness) ++witnesses;
      if (site.negate_witness) ++witnesses;
      if (site.assert_timed_out) ++timeouts;
      if (site.negate_timed_out) ++timeouts;
      if (site.skipped) ++skipped;
    }
    e["witnesses"] = witnesses;
    e["solver_timeouts"] = timeouts;
    e["skipped_sites"] = skipped;
    j["encodings"].push_back(e);
  }
  return j;
}

int cmd_generate(const GenerateArgs& args) {
  specdiff::Corpus corpus = specdiff::load_corpus(args.corpus_path);

  specdiff::GenerateOptions options;
  options.seed = args.seed;
  options.mode =
      args.serial ? specdiff::GenMode::kSerial : specdiff::GenMode::kParallel;
  options.warnings = &std::cerr;
  if (!args.iset.empty()) {
    std::string upper = args.iset;
    for (char& c : upper) c = static_cast<char>(std::toupper(
        static_cast<unsigned char>(c)));
    auto iset = specdiff::iset_from_string(upper);
    if (!iset) {
      throw specdiff::ValidationError("", "unknown instruction set: " +
                                              args.iset);
    }
    options.iset_filter = *iset;
  }
  if (!args.encoding.empty()) options.encoding_filter = args.encoding;
  if (!args.init_fixture.empty()) {
    options.overrides = specdiff::InitOverrides::load(args.init_fixture);
  }

  specdiff::GenerateResult result =
      specdiff::generate_streams(corpus, options);

  fs::create_directories(args.out_dir);
  {
    std::ofstream out(fs::path(args.out_dir) / "streams.tsv");
    if (!out) {
      throw specdiff::IoError("cannot write streams.tsv under " +
                              args.out_dir);
    }
    for (const auto& gen : result.encodings) {
      specdiff::emit_streams(gen.streams, out);
    }
  }
  std::string summary = specdiff::render_summary(result, args.seed);
  write_text_file(fs::path(args.out_dir) / "summary.txt", summary);
  write_text_file(fs::path(args.out_dir) / "summary.json",
                  generation_json(result, args.seed).dump(2) + "\n");
  std::cout << summary;
  return kExitOk;
}

struct AnnotateArgs {
  std::string corpus_path;
  std::string streams_path;
  std::string out_path;
};

int cmd_annotate(const AnnotateArgs& args) {
  specdiff::Corpus corpus = specdiff::load_corpus(args.corpus_path);
  auto streams = read_streams_file(args.streams_path);
  for (auto& stream : streams) {
    const specdiff::InstructionSpec* spec = corpus.find(stream.encoding_id);
    if (!spec) throw specdiff::UnknownEncoding(stream.encoding_id);
    auto values = specdiff::decode_word(spec->diagram, stream.word);
    stream.iset = spec->iset;
    stream.width = spec->diagram.width;
    stream.assignment.clear();
    for (const auto& field : spec->diagram.fields) {
      if (field.is_constant()) continue;
      stream.assignment.emplace_back(field.name, values.at(field.name));
    }
    stream.tag = specdiff::eval_decode(spec->decode, values).tag;
    specdiff::validate_stream(stream, corpus);
  }
  std::ostringstream out;
  specdiff::emit_streams(streams, out);
  write_text_file(args.out_path, out.str());
  std::cout << "annotated " << streams.size() << " streams -> "
            << args.out_path << "\n";
  return kExitOk;
}

struct DiffArgs {
  std::string corpus_path;
  std::string streams_path;
  std::string out_dir;
  std::string backend_e;
  std::string backend_r;
  double timeout_s = 5.0;
  int workers = 0;
  bool resume = false;
};

int cmd_diff(const DiffArgs& args) {
  specdiff::Corpus corpus = specdiff::load_corpus(args.corpus_path);
  auto streams = read_streams_file(args.streams_path);
  auto emulated = make_backend(args.backend_e);
  auto reference = make_backend(args.backend_r);

  fs::create_directories(args.out_dir);
  specdiff::CampaignConfig config;
  config.timeout = std::chrono::milliseconds(
      static_cast<long long>(args.timeout_s * 1000.0));
  config.workers = args.workers;
  config.journal_path =
      (fs::path(args.out_dir) / "journal.jsonl").string();
  config.resume = args.resume;

  std::cerr << "emulated:  " << emulated->describe() << "\n"
            << "reference: " << reference->describe() << "\n";
  specdiff::CampaignReport report = specdiff::run_campaign(
      streams, corpus, *emulated, *reference, config);

  std::string text = specdiff::render_report(report);
  write_text_file(fs::path(args.out_dir) / "report.txt", text);
  write_text_file(fs::path(args.out_dir) / "report.json",
                  specdiff::report_json(report) + "\n");
  std::cout << text;
  return kExitOk;
}

struct ReportArgs {
  std::string journal_path;
  std::string corpus_path;
  bool as_json = false;
};

int cmd_report(const ReportArgs& args) {
  auto records = specdiff::read_journal(args.journal_path);
  specdiff::Corpus corpus;
  const specdiff::Corpus* corpus_ptr = nullptr;
  if (!args.corpus_path.empty()) {
    corpus = specdiff::load_corpus(args.corpus_path);
    corpus_ptr = &corpus;
  }
  specdiff::CampaignReport report =
      specdiff::build_report(records, corpus_ptr);
  if (args.as_json) {
    std::cout << specdiff::report_json(report) << "\n";
  } else {
    std::cout << specdiff::render_report(report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "specdiff: specification-driven instruction stream generation and "
      "differential CPU testing"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "generate", "Solve constraints and generate instruction streams");
  gen->add_option("--corpus", gen_args.corpus_path, "Encoding corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  gen->add_option("--out", gen_args.out_dir, "Output directory")->required();
  gen->add_option("--seed", gen_args.seed, "Campaign seed");
  gen->add_option("--iset", gen_args.iset,
                  "Only this instruction set (a64/a32/t32/t16)");
  gen->add_option("--encoding", gen_args.encoding, "Only this encoding id");
  gen->add_option("--init-fixture", gen_args.init_fixture,
                  "Initial mutation-set override file")
      ->check(CLI::ExistingFile);
  gen->add_flag("--serial", gen_args.serial,
                "Use the serial reference expansion kernel");

  AnnotateArgs ann_args;
  CLI::App* ann = app.add_subcommand(
      "annotate", "Recompute decode tags and canonical field assignments");
  ann->add_option("--corpus", ann_args.corpus_path, "Encoding corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  ann->add_option("--streams", ann_args.streams_path, "Input stream file")
      ->required()
      ->check(CLI::ExistingFile);
  ann->add_option("--out", ann_args.out_path, "Output stream file")
      ->required();

  DiffArgs diff_args;
  CLI::App* diff = app.add_subcommand(
      "diff", "Run a differential campaign over generated streams");
  diff->add_option("--corpus", diff_args.corpus_path, "Encoding corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  diff->add_option("--streams", diff_args.streams_path, "Input stream file")
      ->required()
      ->check(CLI::ExistingFile);
  diff->add_option("--out", diff_args.out_dir, "Output directory")
      ->required();
  diff->add_option("--backend-e", diff_args.backend_e,
                   "Emulated backend (replay:DIR or command template)")
      ->required();
  diff->add_option("--backend-r", diff_args.backend_r,
                   "Reference backend (replay:DIR or command template)")
      ->required();
  diff->add_option("--timeout", diff_args.timeout_s,
                   "Per-stream timeout in seconds");
  diff->add_option("--workers", diff_args.workers,
                   "Worker threads (0 = all)");
  diff->add_flag("--resume", diff_args.resume,
                 "Skip streams already present in the journal");

  ReportArgs rep_args;
  CLI::App* rep =
      app.add_subcommand("report", "Aggregate a journal into a report");
  rep->add_option("--journal", rep_args.journal_path, "Journal file")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--corpus", rep_args.corpus_path,
                  "Corpus for instruction names and denominators")
      ->check(CLI::ExistingFile);
  rep->add_flag("--json", rep_args.as_json, "Print the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (ann->parsed()) return cmd_annotate(ann_args);
    if (diff->parsed()) return cmd_diff(diff_args);
    if (rep->parsed()) return cmd_report(rep_args);
    std::cerr << "no subcommand selected\n";
    return kExitUsage;
  } catch (const specdiff::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const specdiff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
