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

// Tiny belief propagation: the per-element message is folded straight into
// the unnormalized factor matrices, so no K x NNZ message buffer exists. With
// alpha = beta = 0 one synchronous sweep is exactly one round of the KL-NMF
// multiplicative updates on simplex-normalized factors.

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "tbp/corpus.hpp"
#include "tbp/model.hpp"

namespace tbp {

/// Writes the normalized message for element (word, doc) into `out` (size K):
///   out[k] ∝ (word_topic[word,k] + beta) / (topic_mass[k] + W beta)
///            * (doc_topic[doc,k] + alpha).
/// Terms with a zero denominator contribute zero; an all-zero message becomes
/// uniform.
void compute_message(std::size_t word, std::size_t doc, const FactorState& state,
                     const Hyperparams& hp, std::span<double> out);
std::vector<double> compute_message(std::size_t word, std::size_t doc, const FactorState& state,
                                    const Hyperparams& hp);

/// One synchronous sweep. Messages are computed from the frozen input `state`
/// and accumulated into fresh zeroed matrices, which are returned.
FactorState stbp_iteration(const DocumentSource& source, const FactorState& state,
                           const Hyperparams& hp);

/// Called after every element update of an asynchronous sweep.
using ElementObserver = std::function<void(const FactorState&)>;

/// One asynchronous sweep, in place. For every element the message under the
/// current state is removed from the matrices (never below zero), a new
/// message is computed from the reduced state, and the removed mass is put
/// back along the new message. Per-element mass is conserved.
void atbp_iteration(const DocumentSource& source, FactorState& state, const Hyperparams& hp,
                    const ElementObserver& observer = {});

/// stbp_iteration over a docword file read one document at a time.
FactorState stream_stbp_iteration(const std::filesystem::path& docword, const FactorState& state,
                                  const Hyperparams& hp);
void stream_atbp_iteration(const std::filesystem::path& docword, FactorState& state,
                           const Hyperparams& hp);

}  // namespace tbp
