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

#include "tbp/memory.hpp"

#include <cstdio>
#include <ostream>

namespace tbp {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kStbp: return "stbp";
    case Algorithm::kAtbp: return "atbp";
    case Algorithm::kGs: return "gs";
    case Algorithm::kBpSync: return "bp-sync";
    case Algorithm::kBpAsync: return "bp-async";
    case Algorithm::kVb: return "vb";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kStbp, Algorithm::kAtbp, Algorithm::kGs, Algorithm::kBpSync,
                 Algorithm::kBpAsync, Algorithm::kVb}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

bool supports_streaming(Algorithm algorithm) {
  return algorithm == Algorithm::kStbp || algorithm == Algorithm::kAtbp;
}

CorpusStats stats_of(const SparseCorpus& corpus) {
  return {corpus.num_docs(), corpus.num_words(), corpus.nnz(), corpus.token_total()};
}

CorpusStats scan_stats(const DocumentSource& source) {
  CorpusStats stats{source.num_docs(), source.num_words(), 0, 0};
  source.for_each_document([&](const DocumentRef& doc) {
    stats.nnz += doc.entries.size();
    stats.token_total += doc.tokens();
  });
  return stats;
}

MemoryReport estimate_message_memory(Algorithm algorithm, const CorpusStats& stats,
                                     std::uint64_t num_topics) {
  MemoryReport r;
  r.algorithm = algorithm;
  r.data_bytes = 3 * 4 * stats.nnz;
  switch (algorithm) {
    case Algorithm::kGs:
      r.message_bytes = 4 * stats.token_total;
      break;
    case Algorithm::kBpSync:
    case Algorithm::kBpAsync:
    case Algorithm::kVb:
      r.message_bytes = 8 * num_topics * stats.nnz;
      break;
    case Algorithm::kStbp:
    case Algorithm::kAtbp:
      r.message_bytes = 0;
      break;
  }
  r.parameter_bytes = 8 * num_topics * (stats.num_words + stats.num_docs);
  if (algorithm == Algorithm::kStbp) r.parameter_bytes *= 2;
  r.total_bytes = r.data_bytes + r.message_bytes + r.parameter_bytes;
  return r;
}

void write_memory_report(const MemoryReport& report, std::ostream& out) {
  char buf[64];
  const auto mb = [&](std::uint64_t bytes, double unit) {
    std::snprintf(buf, sizeof buf, "%.1f", static_cast<double>(bytes) / unit);
    return std::string(buf);
  };
  out << "algorithm=" << to_string(report.algorithm) << '\n'
      << "data_bytes=" << report.data_bytes << '\n'
      << "message_bytes=" << report.message_bytes << '\n'
      << "parameter_bytes=" << report.parameter_bytes << '\n'
      << "total_bytes=" << report.total_bytes << '\n'
      << "message_mb=" << mb(report.message_bytes, 1e6) << '\n'
      << "message_mib=" << mb(report.message_bytes, 1048576.0) << '\n'
      << "total_mb=" << mb(report.total_bytes, 1e6) << '\n'
      << "total_mib=" << mb(report.total_bytes, 1048576.0) << '\n';
}

}  // namespace tbp
