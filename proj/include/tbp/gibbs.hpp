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
#include <functional>
#include <stdexcept>
#include <vector>

#include "tbp/corpus.hpp"
#include "tbp/model.hpp"
#include "tbp/random.hpp"

namespace tbp {

/// Collapsed Gibbs sampling state: one topic label per token plus the count
/// tables aggregated from them. Tokens are ordered document-major,
/// word-ascending, and by copy within an element.
struct GsState {
  std::size_t num_topics = 0;
  std::vector<std::uint32_t> labels;
  std::vector<std::int64_t> doc_topic;   // D x K
  std::vector<std::int64_t> word_topic;  // W x K
  std::vector<std::int64_t> topic_totals;
  std::vector<std::uint64_t> doc_tokens;

  bool operator==(const GsState&) const = default;
};

/// Raised when a decrement would drive a count below zero.
class GibbsConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Every token of an element starts on the topic drawn for that element by
/// the shared initializer (see init_random).
GsState init_gibbs(const SparseCorpus& corpus, const Hyperparams& hp, std::uint64_t seed);

/// Rebuilds the count tables from the labels.
GsState recount(const SparseCorpus& corpus, std::size_t num_topics,
                std::vector<std::uint32_t> labels);

/// One sweep over all tokens. For each token the current label is removed
/// from the counts, the conditional
///   p(k) ∝ (n_dk + alpha) (n_wk + beta) / (n_k + W beta)
/// is formed, a topic is drawn by inverse CDF on `uniform()` in [0, 1), and
/// the counts are restored with the new label.
void gs_iteration(const SparseCorpus& corpus, GsState& state, const Hyperparams& hp,
                  const std::function<double()>& uniform);
void gs_iteration(const SparseCorpus& corpus, GsState& state, const Hyperparams& hp,
                  SplitMix64& rng);

/// phi[w,k] = (n_wk + beta) / (n_k + W beta), theta[d,k] = (n_dk + alpha) / (N_d + K alpha).
TopicModel gs_estimate(const GsState& state, const Hyperparams& hp);

}  // namespace tbp
