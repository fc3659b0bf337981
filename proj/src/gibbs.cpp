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

#include "tbp/gibbs.hpp"

#include <string>

namespace tbp {

GsState recount(const SparseCorpus& corpus, std::size_t num_topics,
                std::vector<std::uint32_t> labels) {
  if (labels.size() != corpus.token_total()) {
    throw GibbsConsistencyError("label count differs from the corpus token total");
  }
  const std::size_t K = num_topics;
  GsState s{K,
            std::move(labels),
            std::vector<std::int64_t>(corpus.num_docs() * K, 0),
            std::vector<std::int64_t>(corpus.num_words() * K, 0),
            std::vector<std::int64_t>(K, 0),
            std::vector<std::uint64_t>(corpus.num_docs(), 0)};
  std::size_t token = 0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& e : corpus.document(d).entries) {
      for (std::uint32_t n = 0; n < e.count; ++n, ++token) {
        const std::uint32_t k = s.labels[token];
        if (k >= K) throw GibbsConsistencyError("label out of range");
        ++s.doc_topic[d * K + k];
        ++s.word_topic[e.word * K + k];
        ++s.topic_totals[k];
      }
    }
    s.doc_tokens[d] = corpus.doc_tokens(d);
  }
  return s;
}

GsState init_gibbs(const SparseCorpus& corpus, const Hyperparams& hp, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> labels;
  labels.reserve(corpus.token_total());
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& e : corpus.document(d).entries) {
      const auto k = static_cast<std::uint32_t>(rng.uniform_index(hp.num_topics));
      labels.insert(labels.end(), e.count, k);
    }
  }
  return recount(corpus, hp.num_topics, std::move(labels));
}

void gs_iteration(const SparseCorpus& corpus, GsState& state, const Hyperparams& hp,
                  const std::function<double()>& uniform) {
  const std::size_t K = state.num_topics;
  if (K != hp.num_topics || state.labels.size() != corpus.token_total()) {
    throw GibbsConsistencyError("sampler state does not match corpus or hyperparameters");
  }
  const double w_beta = static_cast<double>(corpus.num_words()) * hp.beta;
  std::vector<double> weights(K);

  const auto decrement = [](std::int64_t& c) {
    if (c <= 0) throw GibbsConsistencyError("count would become negative");
    --c;
  };

  std::size_t token = 0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    std::int64_t* doc_row = state.doc_topic.data() + d * K;
    for (const auto& e : corpus.document(d).entries) {
      std::int64_t* word_row = state.word_topic.data() + e.word * K;
      for (std::uint32_t n = 0; n < e.count; ++n, ++token) {
        const std::uint32_t old_k = state.labels[token];
        decrement(doc_row[old_k]);
        decrement(word_row[old_k]);
        decrement(state.topic_totals[old_k]);

        for (std::size_t k = 0; k < K; ++k) {
          weights[k] = (static_cast<double>(doc_row[k]) + hp.alpha) *
                       (static_cast<double>(word_row[k]) + hp.beta) /
                       (static_cast<double>(state.topic_totals[k]) + w_beta);
        }
        const auto new_k = static_cast<std::uint32_t>(sample_categorical(weights, uniform()));

        state.labels[token] = new_k;
        ++doc_row[new_k];
        ++word_row[new_k];
        ++state.topic_totals[new_k];
      }
    }
  }
}

void gs_iteration(const SparseCorpus& corpus, GsState& state, const Hyperparams& hp,
                  SplitMix64& rng) {
  gs_iteration(corpus, state, hp, [&rng] { return rng.uniform(); });
}

TopicModel gs_estimate(const GsState& state, const Hyperparams& hp) {
  const std::size_t K = state.num_topics;
  const std::size_t W = state.word_topic.size() / K;
  const std::size_t D = state.doc_topic.size() / K;
  TopicModel model{Matrix(W, K), Matrix(D, K)};
  for (std::size_t w = 0; w < W; ++w) {
    for (std::size_t k = 0; k < K; ++k) {
      model.phi(w, k) = (static_cast<double>(state.word_topic[w * K + k]) + hp.beta) /
                        (static_cast<double>(state.topic_totals[k]) + static_cast<double>(W) * hp.beta);
    }
  }
  for (std::size_t d = 0; d < D; ++d) {
    const double denom =
        static_cast<double>(state.doc_tokens[d]) + static_cast<double>(K) * hp.alpha;
    for (std::size_t k = 0; k < K; ++k) {
      model.theta(d, k) = (static_cast<double>(state.doc_topic[d * K + k]) + hp.alpha) / denom;
    }
  }
  return model;
}

}  // namespace tbp
