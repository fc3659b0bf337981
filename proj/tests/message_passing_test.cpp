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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbp/corpus.hpp"
#include "tbp/random.hpp"

namespace tbp {
namespace {

// W=3 words by D=2 documents, five nonzeros.
SparseCorpus toy() { return SparseCorpus::from_documents(3, {{{0, 2}, {1, 1}, {2, 3}}, {{0, 1}, {2, 2}}}); }

std::vector<oracle::Element> elements_of(const SparseCorpus& c) {
  std::vector<oracle::Element> out;
  for (std::size_t d = 0; d < c.num_docs(); ++d)
    for (const auto& e : c.document(d).entries) out.push_back({e.word, d, static_cast<double>(e.count)});
  return out;
}

std::vector<double> random_messages(std::size_t nnz, std::size_t K, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> m(nnz * K);
  for (std::size_t i = 0; i < nnz; ++i) sample_flat_dirichlet(std::span<double>(m.data() + i * K, K), rng);
  return m;
}

oracle::Dense as_dense(const std::vector<double>& flat, std::size_t K) {
  oracle::Dense out(flat.size() / K, std::vector<double>(K));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = 0; k < K; ++k) out[i][k] = flat[i * K + k];
  return out;
}

void expect_aggregates_match(const SparseCorpus& c, const MessageState& s) {
  const MessageState fresh = messages_to_state(c, s.num_topics(), s.messages);
  const std::size_t K = s.num_topics();
  for (std::size_t k = 0; k < K; ++k) {
    EXPECT_NEAR(s.aggregates.topic_mass[k], fresh.aggregates.topic_mass[k], 1e-9);
    for (std::size_t w = 0; w < c.num_words(); ++w)
      EXPECT_NEAR(s.aggregates.word_topic(w, k), fresh.aggregates.word_topic(w, k), 1e-9);
    for (std::size_t d = 0; d < c.num_docs(); ++d)
      EXPECT_NEAR(s.aggregates.doc_topic(d, k), fresh.aggregates.doc_topic(d, k), 1e-9);
  }
}

TEST(BpTest, SynchronousSweepMatchesLiteralOracle) {
  const SparseCorpus c = toy();
  const Hyperparams hp{2, 0.3, 0.01};
  MessageState s = messages_to_state(c, 2, random_messages(c.nnz(), 2, 5));
  const oracle::Dense want = oracle::bp_literal_sync(elements_of(c), as_dense(s.messages, 2), 3, hp.alpha, hp.beta);
  bp_iteration(c, s, hp, Schedule::kSynchronous);
  const oracle::Dense got = as_dense(s.messages, 2);
  for (std::size_t i = 0; i < want.size(); ++i)
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(got[i][k], want[i][k], 1e-10);
  expect_aggregates_match(c, s);
}

TEST(BpTest, AsynchronousKeepsAggregatesConsistent) {
  const SparseCorpus c = synthesize_corpus(3, 12, 10, 20, 3).corpus;
  const Hyperparams hp = Hyperparams::defaults(3);
  MessageState s = init_messages(c, hp, 2);
  for (int it = 0; it < 10; ++it) bp_iteration(c, s, hp, Schedule::kAsynchronous);
  expect_aggregates_match(c, s);
  for (std::size_t i = 0; i < c.nnz(); ++i) {
    double sum = 0.0;
    for (double v : s.message(i)) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(BpTest, SingleTopicAndEmptyContext) {
  const SparseCorpus c = toy();
  MessageState one = init_messages(c, Hyperparams{1, 0.5, 0.01}, 1);
  const FactorState before = one.aggregates;
  bp_iteration(c, one, Hyperparams{1, 0.5, 0.01}, Schedule::kSynchronous);
  for (double v : one.messages) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(one.aggregates, before);

  const SparseCorpus single = SparseCorpus::from_documents(1, {{{0, 3}}});
  for (auto schedule : {Schedule::kSynchronous, Schedule::kAsynchronous}) {
    MessageState s = init_messages(single, Hyperparams{2, 0.5, 0.01}, 7);
    bp_iteration(single, s, Hyperparams{2, 0.5, 0.01}, schedule);
    EXPECT_NEAR(s.messages[0], 0.5, 1e-15);
    EXPECT_NEAR(s.messages[1], 0.5, 1e-15);
  }
}

TEST(VbTest, SweepMatchesLiteralOracle) {
  const SparseCorpus c = toy();
  const Hyperparams hp{2, 0.3, 0.01};
  MessageState s = messages_to_state(c, 2, random_messages(c.nnz(), 2, 6));
  const oracle::Dense want = oracle::vb_literal(elements_of(c), as_dense(s.messages, 2), 3, hp.alpha, hp.beta);
  vb_iteration(c, s, hp);
  const oracle::Dense got = as_dense(s.messages, 2);
  for (std::size_t i = 0; i < want.size(); ++i)
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(got[i][k], want[i][k], 1e-10);
  expect_aggregates_match(c, s);
}

TEST(VbTest, SingleElementUniformStart) {
  const SparseCorpus c = SparseCorpus::from_documents(1, {{{0, 1}}});
  const Hyperparams hp{2, 0.05, 0.01};
  MessageState s = messages_to_state(c, 2, {0.5, 0.5});
  const oracle::Dense want = oracle::vb_literal(elements_of(c), {{0.5, 0.5}}, 1, hp.alpha, hp.beta);
  vb_iteration(c, s, hp);
  EXPECT_NEAR(s.messages[0], want[0][0], 1e-12);
  EXPECT_NEAR(s.messages[1], want[0][1], 1e-12);
  EXPECT_NEAR(s.messages[0], 0.5, 1e-12);
}

TEST(VbTest, SingleTopicAndUniformAggregates) {
  const SparseCorpus c = toy();
  MessageState one = init_messages(c, Hyperparams{1, 0.5, 0.01}, 1);
  vb_iteration(c, one, Hyperparams{1, 0.5, 0.01});
  for (double v : one.messages) EXPECT_EQ(v, 1.0);

  std::vector<double> flat(c.nnz() * 3, 1.0 / 3.0);
  MessageState u = messages_to_state(c, 3, flat);
  vb_iteration(c, u, Hyperparams{3, 0.5, 0.01});
  for (double v : u.messages) EXPECT_NEAR(v, 1.0 / 3.0, 1e-14);
}

TEST(EstimateTest, InclusiveAggregatesWithSmoothing) {
  const SparseCorpus c = SparseCorpus::from_documents(2, {{{0, 2}, {1, 1}}});
  const Hyperparams hp{1, 0.5, 0.01};
  const MessageState s = init_messages(c, hp, 1);
  for (const TopicModel& m : {bp_estimate(s, hp), vb_estimate(s, hp)}) {
    EXPECT_NEAR(m.phi(0, 0), 0.6655629139072847, 1e-15);
    EXPECT_NEAR(m.phi(1, 0), 0.3344370860927152, 1e-15);
    EXPECT_DOUBLE_EQ(m.theta(0, 0), 1.0);
  }
}

TEST(InitMessagesTest, OneHotAndMismatchRejected) {
  const SparseCorpus c = toy();
  const MessageState s = init_messages(c, Hyperparams{4, 0.5, 0.01}, 3);
  for (std::size_t i = 0; i < c.nnz(); ++i) {
    int ones = 0;
    for (double v : s.message(i)) ones += v == 1.0;
    EXPECT_EQ(ones, 1);
  }
  EXPECT_THROW(messages_to_state(c, 2, {0.5, 0.5}), ModelError);
  MessageState bad = s;
  EXPECT_THROW(bp_iteration(c, bad, Hyperparams{3, 0.5, 0.01}, Schedule::kSynchronous), ModelError);
}

}  // namespace
}  // namespace tbp
