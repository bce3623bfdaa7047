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
// Differential campaign driver: runs every stream on two backends, judges
// the final states, journals one JSONL record per stream and aggregates a
// report. The journal is append-only and is the single source of truth for
// reporting, which makes interrupted campaigns resumable.

#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "specdiff/backend.h"
#include "specdiff/corpus.h"
#include "specdiff/stream.h"
#include "specdiff/verdict.h"

namespace specdiff {

struct CampaignConfig {
  std::chrono::milliseconds timeout{5000};
  int workers = 0;           // 0 = all hardware threads
  std::string journal_path;  // empty = keep records in memory only
  bool resume = false;       // skip streams already present in the journal
  InitialStateSpec init;
  std::vector<std::string>* warnings = nullptr;
};

// One journaled judgement. `word_hex` is the zero-padded lowercase hex
// instruction word (width/4 digits), `verdict` is the verdict kind string;
// `category` holds the behavior category (inconsistent) or the filter
// reason (filtered); `root_cause` is present only for inconsistencies.
struct JournalRecord {
  std::string encoding_id;
  std::string word_hex;
  std::string verdict;
  std::optional<std::string> category;
  std::optional<std::string> root_cause;
};

// JSONL codec. Every line is one JSON object with exactly the keys
// {encoding_id, word, verdict, category, root_cause}; absent fields are
// null. parse_journal_line / read_journal raise JournalCorrupt on any
// malformed or incomplete line.
std::string format_journal_line(const JournalRecord& record);
JournalRecord parse_journal_line(const std::string& line);
std::vector<JournalRecord> read_journal(const std::string& path);

// Judges one stream: prefilter, execution on both backends, the
// normal-branch post-filter, state comparison and root-cause
// classification, folded into a journal record.
JournalRecord judge_stream(const InstructionStream& stream,
                           const InstructionSpec& spec,
                           ExecutorBackend& emulated,
                           ExecutorBackend& reference,
                           const CampaignConfig& config);

struct GroupStat {
  std::size_t streams = 0;
  std::set<std::string> encodings;
  std::set<std::string> instructions;  // distinct instruction names
};

struct CampaignReport {
  std::size_t total = 0;
  GroupStat consistent;
  GroupStat inconsistent;
  GroupStat filtered;
  std::map<std::string, GroupStat> by_category;  // inconsistent only
  std::map<std::string, GroupStat> by_filter;
  std::map<std::string, GroupStat> by_cause;
  // Denominators for coverage ratios; zero when no corpus was supplied.
  std::size_t corpus_encodings = 0;
  std::size_t corpus_instructions = 0;
};

// Aggregates journal records. When `corpus` is null, instruction names are
// unknown and encoding ids stand in for them.
CampaignReport build_report(const std::vector<JournalRecord>& records,
                            const Corpus* corpus);

std::string render_report(const CampaignReport& report);
std::string report_json(const CampaignReport& report);

// Runs the full campaign. All streams are validated against the corpus up
// front. Streams are judged in parallel chunks; records are journaled in
// input order. A BackendError aborts the campaign after flushing the
// records that preceded the failing stream, so a rerun with resume=true
// picks up where it stopped. The report is built from the journal
// (including records from previous runs when resuming).
CampaignReport run_campaign(const std::vector<InstructionStream>& streams,
                            const Corpus& corpus, ExecutorBackend& emulated,
                            ExecutorBackend& reference,
                            const CampaignConfig& config);

}  // namespace specdiff
