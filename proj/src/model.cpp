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

#include "tbp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tbp/random.hpp"

namespace tbp {

void Hyperparams::validate(bool allow_zero_smoothing) const {
  if (num_topics < 1) throw ModelError("number of topics must be at least 1");
  const auto ok = [&](double v) {
    return std::isfinite(v) && (allow_zero_smoothing ? v >= 0.0 : v > 0.0);
  };
  if (!ok(alpha) || !ok(beta)) {
    throw ModelError(allow_zero_smoothing ? "alpha and beta must be non-negative"
                                          : "alpha and beta must be positive");
  }
}

FactorState FactorState::zeros(std::size_t num_words, std::size_t num_docs,
                               std::size_t num_topics) {
  return {Matrix(num_words, num_topics), Matrix(num_docs, num_topics),
          std::vector<double>(num_topics, 0.0), std::vector<std::uint64_t>(num_docs, 0)};
}

FactorState init_random(const DocumentSource& source, const Hyperparams& hp,
                        std::uint64_t seed) {
  const std::size_t K = hp.num_topics;
  FactorState state = FactorState::zeros(source.num_words(), source.num_docs(), K);
  // Integer accumulators keep the conservation identities exact.
  std::vector<std::uint64_t> word_topic(source.num_words() * K, 0);
  std::vector<std::uint64_t> topic_mass(K, 0);
  SplitMix64 rng(seed);
  source.for_each_document([&](const DocumentRef& doc) {
    auto doc_row = state.doc_topic.row(doc.index);
    std::uint64_t tokens = 0;
    for (const auto& e : doc.entries) {
      const auto k = static_cast<std::size_t>(rng.uniform_index(K));
      word_topic[e.word * K + k] += e.count;
      topic_mass[k] += e.count;
      doc_row[k] += e.count;
      tokens += e.count;
    }
    state.doc_tokens[doc.index] = tokens;
  });
  auto out = state.word_topic.data();
  for (std::size_t i = 0; i < word_topic.size(); ++i) out[i] = static_cast<double>(word_topic[i]);
  for (std::size_t k = 0; k < K; ++k) state.topic_mass[k] = static_cast<double>(topic_mass[k]);
  return state;
}

TopicModel normalize(const FactorState& state, const Hyperparams& hp) {
  const std::size_t K = state.num_topics();
  const std::size_t W = state.num_words();
  const std::size_t D = state.num_docs();
  if (K != hp.num_topics) throw ModelError("state has a different number of topics");
  TopicModel model{Matrix(W, K), Matrix(D, K)};

  for (std::size_t k = 0; k < K; ++k) {
    const double denom = state.topic_mass[k] + static_cast<double>(W) * hp.beta;
    for (std::size_t w = 0; w < W; ++w) {
      model.phi(w, k) = denom > 0.0 ? (state.word_topic(w, k) + hp.beta) / denom
                                    : 1.0 / static_cast<double>(W);
    }
  }
  for (std::size_t d = 0; d < D; ++d) {
    const double denom =
        static_cast<double>(state.doc_tokens[d]) + static_cast<double>(K) * hp.alpha;
    auto src = state.doc_topic.row(d);
    auto dst = model.theta.row(d);
    for (std::size_t k = 0; k < K; ++k) {
      dst[k] = denom > 0.0 ? (src[k] + hp.alpha) / denom : 1.0 / static_cast<double>(K);
    }
  }
  return model;
}

TopicModel normalize(const FactorState& state, const DocumentSource& corpus,
                     const Hyperparams& hp) {
  if (corpus.num_words() != state.num_words() || corpus.num_docs() != state.num_docs()) {
    throw ModelError("corpus and state dimensions differ");
  }
  return normalize(state, hp);
}

std::vector<std::vector<RankedWord>> top_words(const TopicModel& model,
                                               const std::vector<std::string>& vocab,
                                               std::size_t n) {
  const std::size_t W = model.num_words();
  if (n > W) throw ModelError("requested more top words than the vocabulary holds");
  const bool have_vocab = vocab.size() == W;
  std::vector<std::vector<RankedWord>> out(model.num_topics());
  std::vector<std::uint32_t> ids(W);
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    std::iota(ids.begin(), ids.end(), 0u);
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        const double pa = model.phi(a, k), pb = model.phi(b, k);
                        return pa != pb ? pa > pb : a < b;
                      });
    out[k].reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint32_t w = ids[r];
      out[k].push_back({w, have_vocab ? vocab[w] : std::to_string(w + 1), model.phi(w, k)});
    }
  }
  return out;
}

namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void put_row(std::ostream& out, std::span<const double> row) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) out << ' ';
    put_double(out, row[k]);
  }
  out << '\n';
}

void read_rows(std::istream& in, Matrix& m, const char* what) {
  for (double& v : m.data()) {
    std::string token;
    if (!(in >> token)) throw ModelError(std::string("model file truncated in ") + what);
    char* end = nullptr;
    v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw ModelError(std::string("bad number '") + token + "' in " + what);
    }
  }
}

}  // namespace

void write_model(const TopicModel& model, const Hyperparams& hp, std::ostream& out) {
  out << model.num_topics() << ' ' << model.num_words() << ' ' << model.num_docs() << ' ';
  put_double(out, hp.alpha);
  out << ' ';
  put_double(out, hp.beta);
  out << '\n';
  for (std::size_t w = 0; w < model.num_words(); ++w) put_row(out, model.phi.row(w));
  for (std::size_t d = 0; d < model.num_docs(); ++d) put_row(out, model.theta.row(d));
}

void save_model(const TopicModel& model, const Hyperparams& hp,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path.string());
  write_model(model, hp, out);
  if (!out) throw ModelError("write failed: " + path.string());
}

LoadedModel read_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ModelError("empty model file");
  std::istringstream hs(header);
  std::size_t K = 0, W = 0, D = 0;
  std::string alpha, beta;
  if (!(hs >> K >> W >> D >> alpha >> beta) || K == 0 || W == 0) {
    throw ModelError("bad model header '" + header + "'");
  }
  LoadedModel out{{Matrix(W, K), Matrix(D, K)},
                  {K, std::strtod(alpha.c_str(), nullptr), std::strtod(beta.c_str(), nullptr)}};
  read_rows(in, out.model.phi, "phi");
  read_rows(in, out.model.theta, "theta");
  std::string extra;
  if (in >> extra) throw ModelError("trailing data after theta rows");
  return out;
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace tbp
