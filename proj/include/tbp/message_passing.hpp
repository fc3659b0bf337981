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

// Baselines that keep one K-vector message per nonzero element: loopy belief
// propagation in the collapsed space and variational Bayes.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tbp/corpus.hpp"
#include "tbp/model.hpp"

namespace tbp {

/// Stored messages (NNZ x K, element order of the corpus) and the inclusive
/// aggregates sum x * mu over documents, words and topics.
struct MessageState {
  std::vector<double> messages;
  FactorState aggregates;

  std::size_t num_topics() const { return aggregates.num_topics(); }
  std::span<const double> message(std::size_t element) const {
    const std::size_t K = num_topics();
    return {messages.data() + element * K, K};
  }
};

using BpState = MessageState;
using VbState = MessageState;

enum class Schedule { kSynchronous, kAsynchronous };

/// One-hot messages on the topics drawn by the shared initializer.
MessageState init_messages(const SparseCorpus& corpus, const Hyperparams& hp, std::uint64_t seed);

/// Builds a state from explicit messages (NNZ x K, each row on the simplex).
MessageState messages_to_state(const SparseCorpus& corpus, std::size_t num_topics,
                               std::vector<double> messages);

/// Loopy BP sweep. Each message becomes
///   mu(k) ∝ (doc_excl(k) + alpha) (word_excl(k) + beta) / (topic_excl(k) + W beta)
/// where the *_excl aggregates leave out the element's own x * mu.
/// Synchronous sweeps read only the previous iteration's messages;
/// asynchronous sweeps update the aggregates after every element.
void bp_iteration(const SparseCorpus& corpus, BpState& state, const Hyperparams& hp,
                  Schedule schedule);

/// Synchronous variational sweep using the inclusive aggregates:
///   mu(k) ∝ exp(psi(doc(k) + alpha) - psi(N_d + K alpha))
///           * (word(k) + beta) / (topic(k) + W beta).
void vb_iteration(const SparseCorpus& corpus, VbState& state, const Hyperparams& hp);

TopicModel bp_estimate(const BpState& state, const Hyperparams& hp);
TopicModel vb_estimate(const VbState& state, const Hyperparams& hp);

}  // namespace tbp
