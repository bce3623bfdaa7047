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

#include "specdiff/campaign.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "specdiff/errors.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specdiff {

namespace {

using nlohmann::json;

json optional_string(const std::optional<std::string>& v) {
  if (v) return json(*v);
  return json(nullptr);
}

}  // namespace

std::string format_journal_line(const JournalRecord& record) {
  json j;
  j["encoding_id"] = record.encoding_id;
  j["word"] = record.word_hex;
  j["verdict"] = record.verdict;
  j["category"] = optional_string(record.category);
  j["root_cause"] = optional_string(record.root_cause);
  return j.dump();
}

JournalRecord parse_journal_line(const std::string& line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw JournalCorrupt("journal line is not a JSON object: " + line);
  }
  for (const char* key :
       {"encoding_id", "word", "verdict", "category", "root_cause"}) {
    if (!j.contains(key)) {
      throw JournalCorrupt(std::string("journal line is missing \"") + key +
                           "\": " + line);
    }
  }
  if (j.size() != 5) {
    throw JournalCorrupt("journal line has unexpected keys: " + line);
  }
  JournalRecord record;
  for (const char* key : {"encoding_id", "word", "verdict"}) {
    if (!j[key].is_string()) {
      throw JournalCorrupt(std::string("journal key \"") + key +
                           "\" must be a string: " + line);
    }
  }
  record.encoding_id = j["encoding_id"].get<std::string>();
  record.word_hex = j["word"].get<std::string>();
  record.verdict = j["verdict"].get<std::string>();
  for (const char* key : {"category", "root_cause"}) {
    const json& v = j[key];
    if (v.is_null()) continue;
    if (!v.is_string()) {
      throw JournalCorrupt(std::string("journal key \"") + key +
                           "\" must be a string or null: " + line);
    }
    if (std::string(key) == "category") {
      record.category = v.get<std::string>();
    } else {
      record.root_cause = v.get<std::string>();
    }
  }
  return record;
}

std::vector<JournalRecord> read_journal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open journal: " + path);
  std::vector<JournalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      records.push_back(parse_journal_line(line));
    } catch (const JournalCorrupt& e) {
      throw JournalCorrupt(path + ":" + std::to_string(line_no) + ": " +
                           e.what());
    }
  }
  return records;
}

JournalRecord judge_stream(const InstructionStream& stream,
                           const InstructionSpec& spec,
                           ExecutorBackend& emulated,
                           ExecutorBackend& reference,
                           const CampaignConfig& config) {
  JournalRecord record;
  record.encoding_id = stream.encoding_id;
  record.word_hex = stream.hex_word();

  if (auto reason = prefilter(stream, spec)) {
    record.verdict = to_string(VerdictKind::kFiltered);
    record.category = to_string(*reason);
    return record;
  }

  CpuState emu = emulated.run(stream, config.init, config.timeout);
  CpuState real = reference.run(stream, config.init, config.timeout);

  if (branch_completed_normally(spec, emu.sig, real.sig)) {
    record.verdict = to_string(VerdictKind::kFiltered);
    record.category = to_string(FilterReason::kBranchNormal);
    return record;
  }

  Verdict verdict = compare_final(emu, real);
  record.verdict = to_string(verdict.kind);
  if (verdict.kind == VerdictKind::kInconsistent) {
    record.category = to_string(*verdict.category);
    record.root_cause = to_string(classify_root_cause(stream, spec, verdict));
  }
  return record;
}

CampaignReport build_report(const std::vector<JournalRecord>& records,
                            const Corpus* corpus) {
  CampaignReport report;
  report.total = records.size();
  if (corpus) {
    report.corpus_encodings = corpus->encodings.size();
    std::set<std::string> names;
    for (const auto& spec : corpus->encodings) names.insert(spec.name);
    report.corpus_instructions = names.size();
  }

  auto add = [&](GroupStat& group, const JournalRecord& record) {
    ++group.streams;
    group.encodings.insert(record.encoding_id);
    std::string name = record.encoding_id;
    if (corpus) {
      if (const InstructionSpec* spec = corpus->find(record.encoding_id)) {
        name = spec->name;
      }
    }
    group.instructions.insert(name);
  };

  for (const auto& record : records) {
    if (record.verdict == to_string(VerdictKind::kConsistent)) {
      add(report.consistent, record);
    } else if (record.verdict == to_string(VerdictKind::kInconsistent)) {
      add(report.inconsistent, record);
      if (record.category) add(report.by_category[*record.category], record);
      if (record.root_cause) add(report.by_cause[*record.root_cause], record);
    } else if (record.verdict == to_string(VerdictKind::kFiltered)) {
      add(report.filtered, record);
      if (record.category) add(report.by_filter[*record.category], record);
    } else {
      throw JournalCorrupt("unknown verdict in journal: " + record.verdict);
    }
  }
  return report;
}

namespace {

std::string stat_suffix(const GroupStat& g) {
  std::ostringstream os;
  os << "[" << g.encodings.size() << " enc | " << g.instructions.size()
     << " inst]";
  return os.str();
}

void render_group_line(std::ostringstream& os, const std::string& label,
                       const GroupStat& g, std::size_t total) {
  char buf[160];
  double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(g.streams) /
                                      static_cast<double>(total);
  std::snprintf(buf, sizeof buf, "  %-34s %8zu  (%5.1f%%)  %s\n",
                label.c_str(), g.streams, pct, stat_suffix(g).c_str());
  os << buf;
}

json group_json(const GroupStat& g) {
  json j;
  j["streams"] = g.streams;
  j["encodings"] = json::array();
  for (const auto& e : g.encodings) j["encodings"].push_back(e);
  j["instructions"] = json::array();
  for (const auto& i : g.instructions) j["instructions"].push_back(i);
  return j;
}

}  // namespace

std::string render_report(const CampaignReport& report) {
  std::ostringstream os;
  os << "differential campaign: " << report.total << " streams judged\n";
  render_group_line(os, "consistent", report.consistent, report.total);
  render_group_line(os, "inconsistent", report.inconsistent, report.total);
  render_group_line(os, "filtered", report.filtered, report.total);
  if (!report.by_category.empty()) {
    os << "inconsistencies by category:\n";
    for (const auto& [name, stat] : report.by_category) {
      render_group_line(os, name, stat, report.total);
    }
  }
  if (!report.by_filter.empty()) {
    os << "filtered by reason:\n";
    for (const auto& [name, stat] : report.by_filter) {
      render_group_line(os, name, stat, report.total);
    }
  }
  if (!report.by_cause.empty()) {
    os << "inconsistencies by root cause:\n";
    for (const auto& [name, stat] : report.by_cause) {
      render_group_line(os, name, stat, report.total);
    }
  }
  if (report.corpus_encodings > 0) {
    std::set<std::string> enc;
    std::set<std::string> inst;
    for (const GroupStat* g :
         {&report.consistent, &report.inconsistent, &report.filtered}) {
      enc.insert(g->encodings.begin(), g->encodings.end());
      inst.insert(g->instructions.begin(), g->instructions.end());
    }
    os << "coverage: " << enc.size() << " of " << report.corpus_encodings
       << " encodings, " << inst.size() << " of "
       << report.corpus_instructions << " instructions\n";
  }
  return os.str();
}

std::string report_json(const CampaignReport& report) {
  json j;
  j["total"] = report.total;
  j["consistent"] = group_json(report.consistent);
  j["inconsistent"] = group_json(report.inconsistent);
  j["filtered"] = group_json(report.filtered);
  j["by_category"] = json::object();
  for (const auto& [name, stat] : report.by_category) {
    j["by_category"][name] = group_json(stat);
  }
  j["by_filter"] = json::object();
  for (const auto& [name, stat] : report.by_filter) {
    j["by_filter"][name] = group_json(stat);
  }
  j["by_cause"] = json::object();
  for (const auto& [name, stat] : report.by_cause) {
    j["by_cause"][name] = group_json(stat);
  }
  j["corpus"] = {{"encodings", report.corpus_encodings},
                 {"instructions", report.corpus_instructions}};
  return j.dump(2);
}

CampaignReport run_campaign(const std::vector<InstructionStream>& streams,
                            const Corpus& corpus, ExecutorBackend& emulated,
                            ExecutorBackend& reference,
                            const CampaignConfig& config) {
  std::vector<const InstructionSpec*> specs;
  specs.reserve(streams.size());
  for (const auto& stream : streams) {
    validate_stream(stream, corpus);
    specs.push_back(corpus.find(stream.encoding_id));
  }

  const bool use_file = !config.journal_path.empty();
  std::set<std::pair<std::string, std::string>> already_done;
  if (use_file) {
    const bool exists = std::filesystem::exists(config.journal_path);
    if (config.resume && exists) {
      for (const auto& record : read_journal(config.journal_path)) {
        already_done.insert({record.encoding_id, record.word_hex});
      }
    } else {
      std::ofstream fresh(config.journal_path, std::ios::trunc);
      if (!fresh) {
        throw IoError("cannot open journal for writing: " +
                      config.journal_path);
      }
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (already_done.count(
            {streams[i].encoding_id, streams[i].hex_word()}) == 0) {
      pending.push_back(i);
    }
  }

  int workers = config.workers;
  if (workers <= 0) {
#ifdef _OPENMP
    workers = omp_get_max_threads();
#else
    workers = 1;
#endif
  }

  std::ofstream out;
  if (use_file) {
    out.open(config.journal_path, std::ios::app);
    if (!out) {
      throw IoError("cannot open journal for appending: " +
                    config.journal_path);
    }
  }
  std::vector<JournalRecord> memory_records;

  const std::size_t chunk_size = static_cast<std::size_t>(workers) * 8;
  for (std::size_t chunk_start = 0; chunk_start < pending.size();
       chunk_start += chunk_size) {
    const std::size_t n =
        std::min(chunk_size, pending.size() - chunk_start);
    std::vector<JournalRecord> chunk(n);
    long long error_at = -1;
    std::exception_ptr error;

#ifdef _OPENMP
#pragma omp parallel for num_threads(workers) schedule(dynamic)
#endif
    for (long long k = 0; k < static_cast<long long>(n); ++k) {
      const std::size_t idx = pending[chunk_start + static_cast<std::size_t>(k)];
      try {
        chunk[static_cast<std::size_t>(k)] = judge_stream(
            streams[idx], *specs[idx], emulated, reference, config);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(specdiff_campaign_error)
#endif
        {
          if (error_at < 0 || k < error_at) {
            error_at = k;
            error = std::current_exception();
          }
        }
      }
    }

    const std::size_t flush_count =
        error_at >= 0 ? static_cast<std::size_t>(error_at) : n;
    for (std::size_t k = 0; k < flush_count; ++k) {
      if (use_file) {
        out << format_journal_line(chunk[k]) << '\n';
      } else {
        memory_records.push_back(chunk[k]);
      }
    }
    if (use_file) out.flush();
    if (error_at >= 0) std::rethrow_exception(error);
  }

  if (use_file) {
    out.close();
    return build_report(read_journal(config.journal_path), &corpus);
  }
  return build_report(memory_records, &corpus);
}

}  // namespace specdiff
