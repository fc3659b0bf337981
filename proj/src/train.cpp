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

#include "tbp/train.hpp"

#include <chrono>
#include <stdexcept>

#include "tbp/gibbs.hpp"
#include "tbp/message_passing.hpp"
#include "tbp/random.hpp"
#include "tbp/tiny_bp.hpp"

namespace tbp {
namespace {

// Sub-stream ids for derive_seed.
constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kFoldInStream = 2;
constexpr std::uint64_t kDocSplitStream = 3;
constexpr std::uint64_t kWordSplitStream = 4;

bool is_tbp(Algorithm a) { return a == Algorithm::kStbp || a == Algorithm::kAtbp; }

// Runs `step` and scores `estimate()` on `source` until convergence.
TrainResult drive(const DocumentSource& source, const TrainOptions& options,
                  const std::function<void()>& step,
                  const std::function<TopicModel()>& estimate) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  TrainResult result;
  for (std::size_t t = 1; t <= options.max_iterations; ++t) {
    step();
    result.model = estimate();
    const double ppl = perplexity(source, result.model);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.trace.points.push_back({t, ppl, seconds});
    if (options.on_iteration) options.on_iteration(result.trace.points.back());
    if (has_converged(result.trace, options.threshold)) {
      result.trace.converged_at = t;
      result.converged = true;
      break;
    }
  }
  if (options.max_iterations == 0) result.model = estimate();
  return result;
}

void validate(const Hyperparams& hp, const TrainOptions& options) {
  hp.validate(is_tbp(options.algorithm));
  if (!(options.threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
}

}  // namespace

TrainResult train(const SparseCorpus& corpus, const Hyperparams& hp, const TrainOptions& options) {
  validate(hp, options);
  TrainResult result;
  switch (options.algorithm) {
    case Algorithm::kStbp:
    case Algorithm::kAtbp: {
      FactorState state = init_random(corpus, hp, options.seed);
      const bool sync = options.algorithm == Algorithm::kStbp;
      result = drive(
          corpus, options,
          [&] {
            if (sync) {
              state = stbp_iteration(corpus, state, hp);
            } else {
              atbp_iteration(corpus, state, hp);
            }
          },
          [&] { return normalize(state, hp); });
      break;
    }
    case Algorithm::kGs: {
      GsState state = init_gibbs(corpus, hp, options.seed);
      SplitMix64 rng(derive_seed(options.seed, kSamplingStream));
      result = drive(
          corpus, options, [&] { gs_iteration(corpus, state, hp, rng); },
          [&] { return gs_estimate(state, hp); });
      break;
    }
    case Algorithm::kBpSync:
    case Algorithm::kBpAsync: {
      BpState state = init_messages(corpus, hp, options.seed);
      const auto schedule = options.algorithm == Algorithm::kBpSync ? Schedule::kSynchronous
                                                                    : Schedule::kAsynchronous;
      result = drive(
          corpus, options, [&] { bp_iteration(corpus, state, hp, schedule); },
          [&] { return bp_estimate(state, hp); });
      break;
    }
    case Algorithm::kVb: {
      VbState state = init_messages(corpus, hp, options.seed);
      result = drive(
          corpus, options, [&] { vb_iteration(corpus, state, hp); },
          [&] { return vb_estimate(state, hp); });
      break;
    }
  }
  result.memory = estimate_message_memory(options.algorithm, stats_of(corpus), hp.num_topics);
  return result;
}

TrainResult train_streaming(const std::filesystem::path& docword, const Hyperparams& hp,
                            const TrainOptions& options) {
  if (!supports_streaming(options.algorithm)) {
    throw std::invalid_argument(std::string("streaming is not available for ") +
                                std::string(to_string(options.algorithm)));
  }
  validate(hp, options);
  const FileSource source(docword);
  FactorState state = init_random(source, hp, options.seed);
  const bool sync = options.algorithm == Algorithm::kStbp;
  TrainResult result = drive(
      source, options,
      [&] {
        if (sync) {
          state = stbp_iteration(source, state, hp);
        } else {
          atbp_iteration(source, state, hp);
        }
      },
      [&] { return normalize(state, hp); });
  result.memory = estimate_message_memory(options.algorithm, scan_stats(source), hp.num_topics);
  return result;
}

ProtocolResult run_protocol(const SparseCorpus& corpus, const Hyperparams& hp,
                            const TrainOptions& options, const ProtocolOptions& protocol) {
  auto [train_part, test_part] =
      split_corpus(corpus, protocol.train_fraction, derive_seed(options.seed, kDocSplitStream));
  auto [observed, heldout] = split_document_words(test_part, protocol.observed_fraction,
                                                  derive_seed(options.seed, kWordSplitStream));
  ProtocolResult out;
  out.train_docs = train_part.num_docs();
  out.test_docs = test_part.num_docs();
  out.training = train(train_part, hp, options);
  const std::size_t sweeps =
      protocol.fold_in_iterations ? protocol.fold_in_iterations : options.max_iterations;
  const Matrix theta = fold_in(observed, out.training.model.phi, hp, sweeps,
                               derive_seed(options.seed, kFoldInStream));
  out.predictive_perplexity = predictive_perplexity(heldout, out.training.model.phi, theta);
  return out;
}

}  // namespace tbp
