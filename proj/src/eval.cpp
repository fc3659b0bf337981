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

#include "tbp/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "tbp/random.hpp"

namespace tbp {
namespace {

struct LogLikelihood {
  double neg_log = 0.0;
  std::uint64_t tokens = 0;
};

LogLikelihood score(const DocumentSource& corpus, const Matrix& phi, const Matrix& theta) {
  if (phi.rows() != corpus.num_words() || theta.rows() != corpus.num_docs() ||
      phi.cols() != theta.cols()) {
    throw EvalError("model dimensions do not match the corpus");
  }
  const std::size_t K = phi.cols();
  LogLikelihood out;
  corpus.for_each_document([&](const DocumentRef& doc) {
    const auto theta_row = theta.row(doc.index);
    for (const auto& e : doc.entries) {
      const auto phi_row = phi.row(e.word);
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) p += phi_row[k] * theta_row[k];
      if (!(p > 0.0)) {
        throw EvalError("zero predicted probability for word " + std::to_string(e.word + 1) +
                        " in document " + std::to_string(doc.index + 1));
      }
      out.neg_log -= static_cast<double>(e.count) * std::log(p);
      out.tokens += e.count;
    }
  });
  return out;
}

double to_perplexity(const LogLikelihood& ll) {
  if (ll.tokens == 0) throw EvalError("perplexity of an empty corpus is undefined");
  return std::exp(ll.neg_log / static_cast<double>(ll.tokens));
}

}  // namespace

double kl_objective(const DocumentSource& corpus, const TopicModel& model) {
  return score(corpus, model.phi, model.theta).neg_log;
}

double perplexity(const DocumentSource& corpus, const TopicModel& model) {
  return to_perplexity(score(corpus, model.phi, model.theta));
}

Matrix fold_in(const DocumentSource& observed, const Matrix& phi, const Hyperparams& hp,
               std::size_t iterations, std::uint64_t seed) {
  const std::size_t K = hp.num_topics;
  if (phi.rows() != observed.num_words() || phi.cols() != K) {
    throw EvalError("phi dimensions do not match the observed corpus");
  }
  Matrix theta(observed.num_docs(), K);
  std::vector<double> mass(K), next(K), eta(K);
  SplitMix64 rng(seed);

  // Documents are independent once phi is fixed, so each one runs all of its
  // sweeps before the next document is touched.
  observed.for_each_document([&](const DocumentRef& doc) {
    std::fill(mass.begin(), mass.end(), 0.0);
    double tokens = 0.0;
    for (const auto& e : doc.entries) {
      mass[rng.uniform_index(K)] += e.count;
      tokens += e.count;
    }
    for (std::size_t it = 0; it < iterations; ++it) {
      std::fill(next.begin(), next.end(), 0.0);
      for (const auto& e : doc.entries) {
        const auto phi_row = phi.row(e.word);
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          eta[k] = phi_row[k] * (mass[k] + hp.alpha);
          total += eta[k];
        }
        if (!(total > 0.0)) continue;
        const double scale = static_cast<double>(e.count) / total;
        for (std::size_t k = 0; k < K; ++k) next[k] += scale * eta[k];
      }
      mass.swap(next);
    }
    auto row = theta.row(doc.index);
    const double denom = tokens + static_cast<double>(K) * hp.alpha;
    for (std::size_t k = 0; k < K; ++k) {
      row[k] = denom > 0.0 ? (mass[k] + hp.alpha) / denom : 1.0 / static_cast<double>(K);
    }
  });
  return theta;
}

double predictive_perplexity(const DocumentSource& heldout, const Matrix& phi,
                             const Matrix& theta) {
  return to_perplexity(score(heldout, phi, theta));
}

bool has_converged(const PerplexityTrace& trace, double threshold) {
  const auto& p = trace.points;
  if (p.size() < 2) return false;
  return std::abs(p.back().perplexity - p[p.size() - 2].perplexity) < threshold;
}

void write_trace_csv(const PerplexityTrace& trace, std::ostream& out, bool include_seconds) {
  out << "iteration,perplexity,seconds\n";
  char buf[64];
  for (const auto& pt : trace.points) {
    std::snprintf(buf, sizeof buf, "%.17g", pt.perplexity);
    out << pt.iteration << ',' << buf << ',';
    if (include_seconds) {
      std::snprintf(buf, sizeof buf, "%.6f", pt.seconds);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace tbp
