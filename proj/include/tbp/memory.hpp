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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "tbp/corpus.hpp"

namespace tbp {

enum class Algorithm { kStbp, kAtbp, kGs, kBpSync, kBpAsync, kVb };

/// CLI spelling: stbp, atbp, gs, bp-sync, bp-async, vb.
std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// True for the algorithms that keep no per-element state and can therefore
/// train from a streamed corpus.
bool supports_streaming(Algorithm algorithm);

struct CorpusStats {
  std::uint64_t num_docs = 0;
  std::uint64_t num_words = 0;
  std::uint64_t nnz = 0;
  std::uint64_t token_total = 0;
};

CorpusStats stats_of(const SparseCorpus& corpus);
/// One streaming pass; memory does not grow with the corpus.
CorpusStats scan_stats(const DocumentSource& source);

/// Byte accounting: total = data + message + parameter.
///   data      12 * NNZ          (doc id, word id, count as 4-byte ints)
///   message   GS 4 * tokens; BP, VB 8 * K * NNZ; sTBP, aTBP 0
///   parameter 8 * K * (W + D), doubled for sTBP's temporaries
struct MemoryReport {
  Algorithm algorithm = Algorithm::kStbp;
  std::uint64_t data_bytes = 0;
  std::uint64_t message_bytes = 0;
  std::uint64_t parameter_bytes = 0;
  std::uint64_t total_bytes = 0;
};

MemoryReport estimate_message_memory(Algorithm algorithm, const CorpusStats& stats,
                                     std::uint64_t num_topics);

/// key=value lines, with decimal (1e6) and binary (2^20) megabyte conversions.
void write_memory_report(const MemoryReport& report, std::ostream& out);

}  // namespace tbp
