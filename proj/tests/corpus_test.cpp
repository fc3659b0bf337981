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

#include "tbp/corpus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tbp/random.hpp"

namespace tbp {
namespace {

SparseCorpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_uci_bow(in);
}

CorpusError::Kind parse_error_kind(const std::string& text) {
  try {
    parse(text);
  } catch (const CorpusError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a CorpusError";
  return CorpusError::Kind::kIo;
}

// Random corpus with some empty documents.
SparseCorpus random_corpus(std::uint64_t seed, std::size_t D, std::size_t W) {
  SplitMix64 rng(seed);
  std::vector<std::vector<WordCount>> docs(D);
  for (auto& doc : docs) {
    for (std::uint32_t w = 0; w < W; ++w) {
      if (rng.uniform() < 0.3) doc.push_back({w, static_cast<std::uint32_t>(1 + rng.uniform_index(6))});
    }
  }
  return SparseCorpus::from_documents(W, docs);
}

TEST(ParseUciBowTest, TwoDocuments) {
  const SparseCorpus c = parse("2\n3\n2\n1 1 5\n2 3 1");
  EXPECT_EQ(c.num_docs(), 2u);
  EXPECT_EQ(c.num_words(), 3u);
  EXPECT_EQ(c.nnz(), 2u);
  EXPECT_EQ(c.token_total(), 6u);
  ASSERT_EQ(c.document(0).entries.size(), 1u);
  EXPECT_EQ(c.document(0).entries[0], (WordCount{0, 5}));
  ASSERT_EQ(c.document(1).entries.size(), 1u);
  EXPECT_EQ(c.document(1).entries[0], (WordCount{2, 1}));
}

TEST(ParseUciBowTest, MinimalCorpus) {
  const SparseCorpus c = parse("1\n1\n1\n1 1 1");
  EXPECT_EQ(c.num_docs(), 1u);
  EXPECT_EQ(c.num_words(), 1u);
  EXPECT_EQ(c.nnz(), 1u);
  EXPECT_EQ(c.token_total(), 1u);
}

TEST(ParseUciBowTest, SortsWordsWithinDocumentAndToleratesCrlf) {
  const SparseCorpus c = parse("1\r\n4\r\n3\r\n1 4 2\r\n1 1 1\r\n1 2 7\r\n");
  ASSERT_EQ(c.document(0).entries.size(), 3u);
  EXPECT_EQ(c.document(0).entries[0].word, 0u);
  EXPECT_EQ(c.document(0).entries[1].word, 1u);
  EXPECT_EQ(c.document(0).entries[2].word, 3u);
  EXPECT_EQ(c.doc_tokens(0), 10u);
}

TEST(ParseUciBowTest, ErrorKinds) {
  using Kind = CorpusError::Kind;
  EXPECT_EQ(parse_error_kind("2\n3\n2\n1 1 5\n1 9 1"), Kind::kBounds);
  EXPECT_EQ(parse_error_kind("2\n3\n2\n1 1 5\n3 1 1"), Kind::kBounds);
  EXPECT_EQ(parse_error_kind("2\n3\n3\n1 1 5\n2 3 1"), Kind::kConsistency);
  EXPECT_EQ(parse_error_kind("2\n3\n1\n1 1 5\n2 3 1"), Kind::kConsistency);
  EXPECT_EQ(parse_error_kind("2\n3\n2\n1 1 5\n2 x 1"), Kind::kParse);
  EXPECT_EQ(parse_error_kind("2\n3\n2\n1 1\n2 3 1"), Kind::kParse);
  EXPECT_EQ(parse_error_kind("2\n3\n2\n2 1 5\n1 3 1"), Kind::kParse);  // out of order
  EXPECT_EQ(parse_error_kind("1\n3\n2\n1 1 5\n1 1 1"), Kind::kParse);  // duplicate word
  EXPECT_EQ(parse_error_kind("1\n3\n1\n1 1 0"), Kind::kParse);         // zero count
  EXPECT_EQ(parse_error_kind("2\n3\n"), Kind::kParse);                 // truncated header
}

TEST(ParseUciBowTest, ParseErrorCarriesLineNumber) {
  try {
    parse("2\n3\n2\n1 1 5\n2 x 1");
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

TEST(ParseUciBowTest, VocabularyMustMatchW) {
  std::istringstream doc("1\n2\n1\n1 2 3\n");
  std::istringstream vocab("alpha\nbeta\n");
  const SparseCorpus c = parse_uci_bow(doc, &vocab);
  ASSERT_EQ(c.vocab().size(), 2u);
  EXPECT_EQ(c.vocab()[1], "beta");

  std::istringstream doc2("1\n2\n1\n1 2 3\n");
  std::istringstream short_vocab("alpha\n");
  EXPECT_THROW(parse_uci_bow(doc2, &short_vocab), CorpusError);
}

TEST(CorpusRoundTripTest, SerializeThenParseIsIdentity) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SparseCorpus c = random_corpus(seed, 1 + seed % 7, 3 + seed % 5);
    std::ostringstream out;
    write_uci_bow(c, out);
    EXPECT_EQ(parse(out.str()), c) << "seed " << seed;
  }
}

TEST(DocumentStreamTest, MatchesInMemoryParseDocumentByDocument) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SparseCorpus c = random_corpus(seed * 31, 12, 9);
    std::ostringstream out;
    write_uci_bow(c, out);
    std::istringstream in(out.str());
    DocumentStream stream(in);
    std::size_t d = 0;
    while (auto block = stream.next()) {
      ASSERT_EQ(block->index, d);
      const auto ref = c.document(d).entries;
      ASSERT_EQ(block->entries.size(), ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(block->entries[i], ref[i]);
      ++d;
    }
    EXPECT_EQ(d, c.num_docs());
  }
}

TEST(DocumentStreamTest, GapsBecomeEmptyBlocks) {
  std::istringstream in("4\n3\n2\n2 1 1\n4 3 2\n");
  DocumentStream stream(in);
  std::vector<std::size_t> sizes;
  while (auto block = stream.next()) sizes.push_back(block->entries.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{0, 1, 0, 1}));
}

TEST(DocumentStreamTest, ThreeDocumentFileFromDisk) {
  const auto dir = oracle::scratch_dir("stream3");
  const auto path = dir / "docword.txt";
  {
    std::ofstream f(path);
    f << "3\n4\n4\n1 1 2\n1 4 1\n2 2 3\n3 3 1\n";
  }
  DocumentStream stream(path);
  std::vector<std::size_t> indices;
  while (auto block = stream.next()) indices.push_back(block->index);
  EXPECT_EQ(indices, (std::vector<std::size_t>{0, 1, 2}));

  FileSource source(path);
  std::size_t visited = 0;
  source.for_each_document([&](const DocumentRef&) { ++visited; });
  EXPECT_EQ(visited, 3u);
}

TEST(DocumentStreamTest, ErrorsSurfaceLazily) {
  std::istringstream in("3\n3\n3\n1 1 1\n2 2 1\n2 9 1\n");
  DocumentStream stream(in);
  ASSERT_TRUE(stream.next().has_value());
  EXPECT_THROW(stream.next(), CorpusError);
}

TEST(SplitCorpusTest, HalvesAreDisjointAndCoverTheInput) {
  const SparseCorpus c = random_corpus(3, 10, 8);
  auto [a, b] = split_corpus(c, 0.5, 77);
  EXPECT_EQ(a.num_docs(), 5u);
  EXPECT_EQ(b.num_docs(), 5u);
  EXPECT_EQ(a.num_words(), c.num_words());
  EXPECT_EQ(b.num_words(), c.num_words());

  // Document multisets: union equals the input.
  std::multiset<std::vector<std::pair<std::uint32_t, std::uint32_t>>> original, combined;
  const auto key = [](const DocumentRef& d) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> k;
    for (const auto& e : d.entries) k.emplace_back(e.word, e.count);
    return k;
  };
  for (std::size_t d = 0; d < c.num_docs(); ++d) original.insert(key(c.document(d)));
  for (std::size_t d = 0; d < a.num_docs(); ++d) combined.insert(key(a.document(d)));
  for (std::size_t d = 0; d < b.num_docs(); ++d) combined.insert(key(b.document(d)));
  EXPECT_EQ(original, combined);
  EXPECT_EQ(a.token_total() + b.token_total(), c.token_total());
}

TEST(SplitCorpusTest, FloorRuleAndDeterminism) {
  const SparseCorpus c = random_corpus(4, 3, 5);
  auto [a, b] = split_corpus(c, 0.5, 1);
  EXPECT_EQ(a.num_docs(), 1u);
  EXPECT_EQ(b.num_docs(), 2u);

  const SparseCorpus big = random_corpus(5, 40, 6);
  EXPECT_EQ(split_corpus(big, 0.5, 9), split_corpus(big, 0.5, 9));
  EXPECT_NE(split_corpus(big, 0.5, 9).first, split_corpus(big, 0.5, 10).first);
}

TEST(SplitCorpusTest, RejectsDegenerateInput) {
  const SparseCorpus one = random_corpus(6, 1, 4);
  EXPECT_THROW(split_corpus(one, 0.5, 1), CorpusError);
  const SparseCorpus two = random_corpus(6, 2, 4);
  EXPECT_THROW(split_corpus(two, 0.4, 1), CorpusError);
  EXPECT_THROW(split_corpus(two, 1.0, 1), CorpusError);
}

TEST(SplitDocumentWordsTest, EightyTwentyOfTenTokens) {
  const SparseCorpus c = SparseCorpus::from_documents(2, {{{0, 8}, {1, 2}}});
  auto [obs, held] = split_document_words(c, 0.8, 3);
  EXPECT_EQ(obs.doc_tokens(0), 8u);
  EXPECT_EQ(held.doc_tokens(0), 2u);
  std::map<std::uint32_t, std::uint32_t> per_word;
  for (const auto& e : obs.document(0).entries) per_word[e.word] += e.count;
  for (const auto& e : held.document(0).entries) per_word[e.word] += e.count;
  EXPECT_EQ(per_word[0], 8u);
  EXPECT_EQ(per_word[1], 2u);
}

TEST(SplitDocumentWordsTest, SingleTokenRoundsToObserved) {
  const SparseCorpus c = SparseCorpus::from_documents(3, {{{2, 1}}});
  auto [obs, held] = split_document_words(c, 0.8, 3);
  EXPECT_EQ(obs.doc_tokens(0), 1u);
  EXPECT_EQ(held.doc_tokens(0), 0u);
  EXPECT_TRUE(held.document(0).entries.empty());
}

TEST(SplitDocumentWordsTest, ConservesMassPerWordAndDocument) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const SparseCorpus c = random_corpus(seed * 13, 9, 7);
    auto [obs, held] = split_document_words(c, 0.8, seed);
    ASSERT_EQ(obs.num_docs(), c.num_docs());
    for (std::size_t d = 0; d < c.num_docs(); ++d) {
      std::map<std::uint32_t, std::uint32_t> sum;
      for (const auto& e : obs.document(d).entries) sum[e.word] += e.count;
      for (const auto& e : held.document(d).entries) sum[e.word] += e.count;
      std::map<std::uint32_t, std::uint32_t> want;
      for (const auto& e : c.document(d).entries) want[e.word] = e.count;
      EXPECT_EQ(sum, want);
      const auto n = c.doc_tokens(d);
      EXPECT_EQ(obs.doc_tokens(d), static_cast<std::uint64_t>(std::floor(n * 0.8 + 0.5)));
    }
    EXPECT_EQ(split_document_words(c, 0.8, seed), split_document_words(c, 0.8, seed));
  }
}

TEST(SynthesizeCorpusTest, SingleTopicDegeneracy) {
  const PlantedCorpus p = synthesize_corpus(1, 6, 4, 30, 2);
  for (std::size_t d = 0; d < 4; ++d) EXPECT_DOUBLE_EQ(p.theta(d, 0), 1.0);
  double s = 0.0;
  for (std::size_t w = 0; w < 6; ++w) s += p.phi(w, 0);
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(SynthesizeCorpusTest, TokenConservation) {
  const PlantedCorpus p = synthesize_corpus(3, 10, 1, 100, 4);
  EXPECT_EQ(p.corpus.token_total(), 100u);
  const PlantedCorpus q = synthesize_corpus(3, 10, 7, 25, 4);
  for (std::size_t d = 0; d < 7; ++d) EXPECT_EQ(q.corpus.doc_tokens(d), 25u);
}

TEST(SynthesizeCorpusTest, RejectsBadShapes) {
  EXPECT_THROW(synthesize_corpus(0, 5, 5, 5, 1), CorpusError);
  EXPECT_THROW(synthesize_corpus(6, 5, 5, 5, 1), CorpusError);
  EXPECT_THROW(synthesize_corpus(2, 5, 0, 5, 1), CorpusError);
  EXPECT_THROW(synthesize_corpus(2, 5, 5, 0, 1), CorpusError);
}

// Empirical word frequencies approach the planted mixture sum_d phi theta_d as
// documents grow. The oracle is a direct Monte-Carlo simulation of the same
// mixture with an independent generator stream.
TEST(SynthesizeCorpusTest, WordFrequenciesConvergeToPlantedMixture) {
  const std::size_t K = 5, W = 50, D = 200;
  double previous_error = 1e9;
  for (std::size_t length : {20u, 200u, 2000u}) {
    const PlantedCorpus p = synthesize_corpus(K, W, D, length, 17);
    std::vector<double> mixture(W, 0.0), empirical(W, 0.0);
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t w = 0; w < W; ++w) {
        for (std::size_t k = 0; k < K; ++k) mixture[w] += p.phi(w, k) * p.theta(d, k) / D;
      }
      for (const auto& e : p.corpus.document(d).entries) {
        empirical[e.word] += static_cast<double>(e.count) / static_cast<double>(length * D);
      }
    }
    // Monte-Carlo reference with its own draws from the same mixture.
    SplitMix64 rng(999);
    std::vector<double> mc(W, 0.0);
    const std::size_t draws = length * D;
    for (std::size_t i = 0; i < draws; ++i) {
      const std::size_t d = rng.uniform_index(D);
      const std::size_t k = sample_categorical(p.theta.row(d), rng.uniform());
      std::vector<double> col(W);
      for (std::size_t w = 0; w < W; ++w) col[w] = p.phi(w, k);
      mc[sample_categorical(col, rng.uniform())] += 1.0 / static_cast<double>(draws);
    }
    double err = 0.0, mc_err = 0.0;
    for (std::size_t w = 0; w < W; ++w) {
      err += std::abs(empirical[w] - mixture[w]);
      mc_err += std::abs(mc[w] - mixture[w]);
    }
    EXPECT_LT(err, 3.0 * mc_err + 1e-3) << "length " << length;
    EXPECT_LT(err, previous_error);
    previous_error = err;
  }
  EXPECT_LT(previous_error, 0.03);
}

}  // namespace
}  // namespace tbp
