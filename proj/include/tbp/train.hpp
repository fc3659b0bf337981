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
#include <functional>

#include "tbp/corpus.hpp"
#include "tbp/eval.hpp"
#include "tbp/memory.hpp"
#include "tbp/model.hpp"

namespace tbp {

struct TrainOptions {
  Algorithm algorithm = Algorithm::kStbp;
  std::size_t max_iterations = 500;
  double threshold = 1.0;
  std::uint64_t seed = 1;
  /// Invoked after every iteration with the trace so far.
  std::function<void(const TracePoint&)> on_iteration;
};

struct TrainResult {
  TopicModel model;
  PerplexityTrace trace;
  MemoryReport memory;
  bool converged = false;
};

/// Seeds the shared initializer, then iterates until the training perplexity
/// changes by less than `threshold` between successive iterations or
/// `max_iterations` is reached. Perplexity is evaluated on the training
/// corpus after every iteration. Zero alpha/beta are accepted for sTBP/aTBP.
TrainResult train(const SparseCorpus& corpus, const Hyperparams& hp, const TrainOptions& options);

/// Same loop for sTBP/aTBP with the corpus streamed from disk on every pass.
/// Other algorithms are rejected with std::invalid_argument.
TrainResult train_streaming(const std::filesystem::path& docword, const Hyperparams& hp,
                            const TrainOptions& options);

struct ProtocolOptions {
  double train_fraction = 0.5;
  double observed_fraction = 0.8;
  /// Fold-in sweeps; 0 means "same as options.max_iterations".
  std::size_t fold_in_iterations = 0;
};

struct ProtocolResult {
  TrainResult training;
  double predictive_perplexity = 0.0;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
};

/// Held-out evaluation: split documents into train/test, train on the first
/// part, split every test document's tokens into observed/held-out, fold in
/// theta on the observed tokens with phi fixed, and score the held-out tokens.
/// All random choices derive from options.seed.
ProtocolResult run_protocol(const SparseCorpus& corpus, const Hyperparams& hp,
                            const TrainOptions& options, const ProtocolOptions& protocol);

}  // namespace tbp
