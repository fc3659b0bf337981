// Copyright 2026 The TBP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tbp/eval.hpp"
#include "tbp/memory.hpp"
#include "tbp/model.hpp"

namespace tbp {

/// Paths of the artifacts written by emit_report.
struct ReportFiles {
  std::filesystem::path model;
  std::filesystem::path trace;
  std::filesystem::path memory;
  std::filesystem::path topics;
};

ReportFiles report_files(const std::filesystem::path& outdir);

/// Tab-separated "topic_id rank word probability" with a header row; topic
/// ids and ranks are 1-based.
void write_topics_table(const std::vector<std::vector<RankedWord>>& topics, std::ostream& out);

/// Writes model.txt, trace.csv, memory.txt and topics.tsv into `outdir`,
/// creating it if needed. Throws std::runtime_error naming the failing path.
ReportFiles emit_report(const TopicModel& model, const Hyperparams& hp,
                        const PerplexityTrace& trace, const MemoryReport& memory,
                        const std::vector<std::string>& vocab, std::size_t top_n,
                        bool include_seconds, const std::filesystem::path& outdir);

}  // namespace tbp
