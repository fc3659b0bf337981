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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbp/corpus.hpp"
#include "tbp/matrix.hpp"

namespace tbp {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of topics and symmetric Dirichlet smoothing.
struct Hyperparams {
  std::size_t num_topics = 1;
  double alpha = 2.0;
  double beta = 0.01;

  /// alpha = 2/K, beta = 0.01.
  static Hyperparams defaults(std::size_t num_topics) {
    return {num_topics, 2.0 / static_cast<double>(num_topics), 0.01};
  }

  /// Throws ModelError unless K >= 1 and alpha, beta are positive. With
  /// `allow_zero_smoothing`, zero alpha/beta are accepted (TBP only).
  void validate(bool allow_zero_smoothing = false) const;
};

/// Unnormalized sufficient statistics shared by TBP and the message-passing
/// baselines: expected topic mass per word, per document, and per topic.
struct FactorState {
  Matrix word_topic;                     // W x K
  Matrix doc_topic;                      // D x K
  std::vector<double> topic_mass;        // K, equals column sums of word_topic
  std::vector<std::uint64_t> doc_tokens; // D, token count of each document

  std::size_t num_topics() const { return topic_mass.size(); }
  std::size_t num_words() const { return word_topic.rows(); }
  std::size_t num_docs() const { return doc_topic.rows(); }

  static FactorState zeros(std::size_t num_words, std::size_t num_docs, std::size_t num_topics);

  bool operator==(const FactorState&) const = default;
};

/// Normalized multinomials. phi columns and theta rows sum to one.
struct TopicModel {
  Matrix phi;    // W x K
  Matrix theta;  // D x K

  std::size_t num_topics() const { return phi.cols(); }
  std::size_t num_words() const { return phi.rows(); }
  std::size_t num_docs() const { return theta.rows(); }

  bool operator==(const TopicModel&) const = default;
};

/// Draws one topic uniformly per nonzero element and assigns the element's
/// whole count to it. Elements are visited document-major, word-ascending,
/// one `SplitMix64(seed).uniform_index(K)` draw each; the GS/BP/VB
/// initializers replay exactly this stream.
FactorState init_random(const DocumentSource& source, const Hyperparams& hp, std::uint64_t seed);

/// phi[w,k] = (word_topic[w,k] + beta) / (topic_mass[k] + W beta),
/// theta[d,k] = (doc_topic[d,k] + alpha) / (N_d + K alpha).
/// With zero smoothing an empty topic or document falls back to uniform.
TopicModel normalize(const FactorState& state, const Hyperparams& hp);
TopicModel normalize(const FactorState& state, const DocumentSource& corpus, const Hyperparams& hp);

struct RankedWord {
  std::uint32_t word = 0;  // 0-based id
  std::string label;       // vocabulary entry, or the 1-based id when no vocabulary
  double probability = 0.0;
};

/// The n most probable words of each topic, descending; ties go to the
/// smaller word id.
std::vector<std::vector<RankedWord>> top_words(const TopicModel& model,
                                               const std::vector<std::string>& vocab,
                                               std::size_t n);

/// Text format: "K W D alpha beta", W rows of K phi values, D rows of K theta
/// values, 17 significant digits.
void write_model(const TopicModel& model, const Hyperparams& hp, std::ostream& out);
void save_model(const TopicModel& model, const Hyperparams& hp, const std::filesystem::path& path);

struct LoadedModel {
  TopicModel model;
  Hyperparams hp;
};

LoadedModel read_model(std::istream& in);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace tbp
