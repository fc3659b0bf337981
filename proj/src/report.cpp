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

#include "tbp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tbp {
namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

ReportFiles report_files(const std::filesystem::path& outdir) {
  return {outdir / "model.txt", outdir / "trace.csv", outdir / "memory.txt",
          outdir / "topics.tsv"};
}

void write_topics_table(const std::vector<std::vector<RankedWord>>& topics, std::ostream& out) {
  out << "topic_id\trank\tword\tprobability\n";
  char buf[32];
  for (std::size_t k = 0; k < topics.size(); ++k) {
    for (std::size_t r = 0; r < topics[k].size(); ++r) {
      std::snprintf(buf, sizeof buf, "%.6g", topics[k][r].probability);
      out << k + 1 << '\t' << r + 1 << '\t' << topics[k][r].label << '\t' << buf << '\n';
    }
  }
}

ReportFiles emit_report(const TopicModel& model, const Hyperparams& hp,
                        const PerplexityTrace& trace, const MemoryReport& memory,
                        const std::vector<std::string>& vocab, std::size_t top_n,
                        bool include_seconds, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw std::runtime_error("cannot create " + outdir.string() + ": " + ec.message());

  const ReportFiles files = report_files(outdir);
  write_file(files.model, [&](std::ostream& out) { write_model(model, hp, out); });
  write_file(files.trace,
             [&](std::ostream& out) { write_trace_csv(trace, out, include_seconds); });
  write_file(files.memory, [&](std::ostream& out) { write_memory_report(memory, out); });
  const std::size_t n = std::min(top_n, model.num_words());
  write_file(files.topics,
             [&](std::ostream& out) { write_topics_table(top_words(model, vocab, n), out); });
  return files;
}

}  // namespace tbp
