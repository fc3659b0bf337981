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

#include "tbp/message_passing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tbp/random.hpp"
#include "tbp/special.hpp"

namespace tbp {
namespace {

void normalize_in_place(std::span<double> mu) {
  double total = 0.0;
  for (double v : mu) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(mu.begin(), mu.end(), 1.0 / static_cast<double>(mu.size()));
    return;
  }
  for (double& v : mu) v /= total;
}

void accumulate(FactorState& agg, std::size_t word, std::size_t doc, double x,
                std::span<const double> mu, double sign) {
  auto word_row = agg.word_topic.row(word);
  auto doc_row = agg.doc_topic.row(doc);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double m = sign * x * mu[k];
    word_row[k] += m;
    doc_row[k] += m;
    agg.topic_mass[k] += m;
  }
}

FactorState aggregate(const SparseCorpus& corpus, std::size_t K,
                      const std::vector<double>& messages) {
  FactorState agg = FactorState::zeros(corpus.num_words(), corpus.num_docs(), K);
  std::size_t element = 0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    agg.doc_tokens[d] = corpus.doc_tokens(d);
    for (const auto& e : corpus.document(d).entries) {
      accumulate(agg, e.word, d, e.count, {messages.data() + element * K, K}, 1.0);
      ++element;
    }
  }
  return agg;
}

void check_state(const SparseCorpus& corpus, const MessageState& state, const Hyperparams& hp) {
  if (state.num_topics() != hp.num_topics ||
      state.messages.size() != corpus.nnz() * hp.num_topics ||
      state.aggregates.num_words() != corpus.num_words() ||
      state.aggregates.num_docs() != corpus.num_docs()) {
    throw ModelError("message state does not match corpus or hyperparameters");
  }
}

// Exclusive BP update for one element given inclusive aggregates `agg` that
// still contain the element's contribution x * old_mu.
void bp_message(const FactorState& agg, std::size_t word, std::size_t doc, double x,
                std::span<const double> old_mu, const Hyperparams& hp, std::span<double> out) {
  const double w_beta = static_cast<double>(agg.num_words()) * hp.beta;
  const auto word_row = agg.word_topic.row(word);
  const auto doc_row = agg.doc_topic.row(doc);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double own = x * old_mu[k];
    const double doc_excl = std::max(doc_row[k] - own, 0.0);
    const double word_excl = std::max(word_row[k] - own, 0.0);
    const double topic_excl = std::max(agg.topic_mass[k] - own, 0.0);
    out[k] = (doc_excl + hp.alpha) * (word_excl + hp.beta) / (topic_excl + w_beta);
  }
  normalize_in_place(out);
}

}  // namespace

MessageState messages_to_state(const SparseCorpus& corpus, std::size_t num_topics,
                               std::vector<double> messages) {
  if (messages.size() != corpus.nnz() * num_topics) {
    throw ModelError("message buffer must hold NNZ x K values");
  }
  MessageState s;
  s.aggregates = aggregate(corpus, num_topics, messages);
  s.messages = std::move(messages);
  return s;
}

MessageState init_messages(const SparseCorpus& corpus, const Hyperparams& hp,
                           std::uint64_t seed) {
  const std::size_t K = hp.num_topics;
  std::vector<double> messages(corpus.nnz() * K, 0.0);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < corpus.nnz(); ++i) {
    messages[i * K + rng.uniform_index(K)] = 1.0;
  }
  return messages_to_state(corpus, K, std::move(messages));
}

void bp_iteration(const SparseCorpus& corpus, BpState& state, const Hyperparams& hp,
                  Schedule schedule) {
  check_state(corpus, state, hp);
  const std::size_t K = hp.num_topics;

  if (schedule == Schedule::kSynchronous) {
    std::vector<double> next(state.messages.size());
    std::size_t element = 0;
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
      for (const auto& e : corpus.document(d).entries) {
        bp_message(state.aggregates, e.word, d, e.count, state.message(element), hp,
                   {next.data() + element * K, K});
        ++element;
      }
    }
    state.messages = std::move(next);
    state.aggregates = aggregate(corpus, K, state.messages);
    return;
  }

  std::vector<double> fresh(K);
  std::size_t element = 0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& e : corpus.document(d).entries) {
      std::span<double> mu(state.messages.data() + element * K, K);
      bp_message(state.aggregates, e.word, d, e.count, mu, hp, fresh);
      accumulate(state.aggregates, e.word, d, e.count, mu, -1.0);
      std::copy(fresh.begin(), fresh.end(), mu.begin());
      accumulate(state.aggregates, e.word, d, e.count, mu, 1.0);
      ++element;
    }
  }
}

void vb_iteration(const SparseCorpus& corpus, VbState& state, const Hyperparams& hp) {
  check_state(corpus, state, hp);
  const std::size_t K = hp.num_topics;
  const FactorState& agg = state.aggregates;
  const double w_beta = static_cast<double>(corpus.num_words()) * hp.beta;

  std::vector<double> next(state.messages.size());
  std::vector<double> doc_log(K);
  std::size_t element = 0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto doc_row = agg.doc_topic.row(d);
    const double doc_norm =
        digamma(static_cast<double>(agg.doc_tokens[d]) + static_cast<double>(K) * hp.alpha);
    for (std::size_t k = 0; k < K; ++k) doc_log[k] = digamma(doc_row[k] + hp.alpha) - doc_norm;

    for (const auto& e : corpus.document(d).entries) {
      std::span<double> out(next.data() + element * K, K);
      const auto word_row = agg.word_topic.row(e.word);
      double max_log = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < K; ++k) {
        out[k] = doc_log[k] + std::log((word_row[k] + hp.beta) / (agg.topic_mass[k] + w_beta));
        max_log = std::max(max_log, out[k]);
      }
      for (double& v : out) v = std::exp(v - max_log);
      normalize_in_place(out);
      ++element;
    }
  }
  state.messages = std::move(next);
  state.aggregates = aggregate(corpus, K, state.messages);
}

TopicModel bp_estimate(const BpState& state, const Hyperparams& hp) {
  return normalize(state.aggregates, hp);
}

TopicModel vb_estimate(const VbState& state, const Hyperparams& hp) {
  return normalize(state.aggregates, hp);
}

}  // namespace tbp
