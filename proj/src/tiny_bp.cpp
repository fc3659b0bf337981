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

#include "tbp/tiny_bp.hpp"

#include <algorithm>
#include <cmath>

namespace tbp {
namespace {

void check_dimensions(const DocumentSource& source, const FactorState& state,
                      const Hyperparams& hp) {
  if (source.num_words() != state.num_words() || source.num_docs() != state.num_docs()) {
    throw ModelError("corpus dimensions do not match the factor state");
  }
  if (state.num_topics() != hp.num_topics) {
    throw ModelError("factor state has a different number of topics");
  }
}

}  // namespace

void compute_message(std::size_t word, std::size_t doc, const FactorState& state,
                     const Hyperparams& hp, std::span<double> out) {
  const std::size_t K = state.num_topics();
  if (out.size() != K || word >= state.num_words() || doc >= state.num_docs()) {
    throw ModelError("compute_message: index or buffer size out of range");
  }
  const double w_beta = static_cast<double>(state.num_words()) * hp.beta;
  const auto word_row = state.word_topic.row(word);
  const auto doc_row = state.doc_topic.row(doc);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = state.topic_mass[k] + w_beta;
    const double v = denom > 0.0 ? (word_row[k] + hp.beta) / denom * (doc_row[k] + hp.alpha) : 0.0;
    out[k] = v;
    total += v;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(K));
    return;
  }
  for (double& v : out) v /= total;
}

std::vector<double> compute_message(std::size_t word, std::size_t doc, const FactorState& state,
                                    const Hyperparams& hp) {
  std::vector<double> out(state.num_topics());
  compute_message(word, doc, state, hp, out);
  return out;
}

FactorState stbp_iteration(const DocumentSource& source, const FactorState& state,
                           const Hyperparams& hp) {
  check_dimensions(source, state, hp);
  const std::size_t K = state.num_topics();
  FactorState next = FactorState::zeros(state.num_words(), state.num_docs(), K);
  next.doc_tokens = state.doc_tokens;
  std::vector<double> eta(K);
  source.for_each_document([&](const DocumentRef& doc) {
    auto doc_row = next.doc_topic.row(doc.index);
    for (const auto& e : doc.entries) {
      compute_message(e.word, doc.index, state, hp, eta);
      auto word_row = next.word_topic.row(e.word);
      const double x = e.count;
      for (std::size_t k = 0; k < K; ++k) {
        const double mass = x * eta[k];
        word_row[k] += mass;
        doc_row[k] += mass;
        next.topic_mass[k] += mass;
      }
    }
  });
  return next;
}

void atbp_iteration(const DocumentSource& source, FactorState& state, const Hyperparams& hp,
                    const ElementObserver& observer) {
  check_dimensions(source, state, hp);
  const std::size_t K = state.num_topics();
  std::vector<double> eta(K);
  source.for_each_document([&](const DocumentRef& doc) {
    auto doc_row = state.doc_topic.row(doc.index);
    for (const auto& e : doc.entries) {
      auto word_row = state.word_topic.row(e.word);
      const double x = e.count;

      compute_message(e.word, doc.index, state, hp, eta);
      // The same amount leaves all three matrices, so clamping at zero keeps
      // every marginal balanced.
      double removed = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double r = std::min({x * eta[k], word_row[k], doc_row[k], state.topic_mass[k]});
        const double take = std::max(r, 0.0);
        word_row[k] -= take;
        doc_row[k] -= take;
        state.topic_mass[k] -= take;
        removed += take;
      }

      compute_message(e.word, doc.index, state, hp, eta);
      for (std::size_t k = 0; k < K; ++k) {
        const double mass = removed * eta[k];
        word_row[k] += mass;
        doc_row[k] += mass;
        state.topic_mass[k] += mass;
      }
      if (observer) observer(state);
    }
  });
}

FactorState stream_stbp_iteration(const std::filesystem::path& docword, const FactorState& state,
                                  const Hyperparams& hp) {
  return stbp_iteration(FileSource(docword), state, hp);
}

void stream_atbp_iteration(const std::filesystem::path& docword, FactorState& state,
                           const Hyperparams& hp) {
  atbp_iteration(FileSource(docword), state, hp);
}

}  // namespace tbp
