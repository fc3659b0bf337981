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
#include <stdexcept>
#include <vector>

#include "tbp/corpus.hpp"
#include "tbp/matrix.hpp"
#include "tbp/model.hpp"

namespace tbp {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TracePoint {
  std::size_t iteration = 0;  // 1-based
  double perplexity = 0.0;
  double seconds = 0.0;       // wall time since training started
};

struct PerplexityTrace {
  std::vector<TracePoint> points;
  std::optional<std::size_t> converged_at;
};

/// Sum over nonzeros of -x log((phi theta)_{w,d}). The product is a K-term dot
/// product per element; the dense W x D product is never formed.
double kl_objective(const DocumentSource& corpus, const TopicModel& model);

/// exp(kl_objective / token_total).
double perplexity(const DocumentSource& corpus, const TopicModel& model);

/// Estimates document-topic proportions for `observed` with `phi` held fixed.
/// Each nonzero starts on a topic drawn as in init_random; every sweep then
/// sets doc_topic[d,k] = sum_w x * eta_k with eta_k ∝ phi[w,k] (doc_topic[d,k] + alpha).
/// Returns theta[d,k] = (doc_topic[d,k] + alpha) / (N_d + K alpha).
Matrix fold_in(const DocumentSource& observed, const Matrix& phi, const Hyperparams& hp,
               std::size_t iterations, std::uint64_t seed);

/// Perplexity of held-out counts under phi and the folded-in theta.
double predictive_perplexity(const DocumentSource& heldout, const Matrix& phi,
                             const Matrix& theta);

/// |ppl_t - ppl_{t-1}| < threshold on the last two points.
bool has_converged(const PerplexityTrace& trace, double threshold);

/// CSV "iteration,perplexity,seconds". With `include_seconds` false the
/// seconds column is left empty so that reruns are byte-identical.
void write_trace_csv(const PerplexityTrace& trace, std::ostream& out, bool include_seconds);

}  // namespace tbp
