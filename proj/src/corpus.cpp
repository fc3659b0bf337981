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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "tbp/random.hpp"

namespace tbp {
namespace {

using Kind = CorpusError::Kind;

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

// Splits on spaces/tabs and parses every field as an unsigned integer.
std::vector<std::uint64_t> parse_fields(const std::string& line, std::size_t line_no) {
  std::vector<std::uint64_t> fields;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    std::uint64_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t')) {
      throw CorpusError(Kind::kParse, "expected unsigned integer in '" + line + "'", line_no);
    }
    fields.push_back(value);
    p = next;
  }
  return fields;
}

void check_document(const std::vector<WordCount>& entries, std::size_t num_words,
                    std::size_t doc) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].word >= num_words) {
      throw CorpusError(Kind::kBounds, "document " + std::to_string(doc + 1) +
                                           ": word id out of range");
    }
    if (entries[i].count == 0) {
      throw CorpusError(Kind::kConsistency,
                        "document " + std::to_string(doc + 1) + ": zero count");
    }
    if (i > 0 && entries[i - 1].word >= entries[i].word) {
      throw CorpusError(Kind::kConsistency, "document " + std::to_string(doc + 1) +
                                                ": word ids not strictly increasing");
    }
  }
}

}  // namespace

SparseCorpus SparseCorpus::from_documents(std::size_t num_words,
                                          const std::vector<std::vector<WordCount>>& docs,
                                          std::vector<std::string> vocab) {
  if (num_words == 0) throw CorpusError(Kind::kInvalidArgument, "vocabulary size must be positive");
  if (docs.empty()) throw CorpusError(Kind::kInvalidArgument, "corpus needs at least one document");
  SparseCorpus c;
  c.num_words_ = num_words;
  c.offsets_.reserve(docs.size() + 1);
  c.offsets_.push_back(0);
  c.doc_tokens_.reserve(docs.size());
  std::size_t total = 0;
  for (const auto& doc : docs) total += doc.size();
  c.entries_.reserve(total);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    check_document(docs[d], num_words, d);
    std::uint64_t tokens = 0;
    for (const auto& e : docs[d]) tokens += e.count;
    c.entries_.insert(c.entries_.end(), docs[d].begin(), docs[d].end());
    c.offsets_.push_back(c.entries_.size());
    c.doc_tokens_.push_back(tokens);
    c.token_total_ += tokens;
  }
  c.set_vocab(std::move(vocab));
  return c;
}

void SparseCorpus::set_vocab(std::vector<std::string> vocab) {
  if (!vocab.empty() && vocab.size() != num_words_) {
    throw CorpusError(Kind::kConsistency, "vocabulary has " + std::to_string(vocab.size()) +
                                              " entries, expected " + std::to_string(num_words_));
  }
  vocab_ = std::move(vocab);
}

void SparseCorpus::for_each_document(
    const std::function<void(const DocumentRef&)>& visit) const {
  for (std::size_t d = 0; d < num_docs(); ++d) visit(document(d));
}

DocumentStream::DocumentStream(const std::filesystem::path& path)
    : owned_(std::make_unique<std::ifstream>(path)), in_(owned_.get()) {
  if (!*owned_) throw CorpusError(Kind::kIo, "cannot open " + path.string());
  read_header();
}

DocumentStream::DocumentStream(std::istream& in) : in_(&in) { read_header(); }

void DocumentStream::read_header() {
  std::uint64_t values[3] = {0, 0, 0};
  const char* names[3] = {"document count", "vocabulary size", "nonzero count"};
  std::string line;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(*in_, line)) {
      throw CorpusError(Kind::kParse, std::string("missing ") + names[i], line_no_ + 1);
    }
    ++line_no_;
    strip_cr(line);
    const auto fields = parse_fields(line, line_no_);
    if (fields.size() != 1) {
      throw CorpusError(Kind::kParse, std::string("expected a single ") + names[i], line_no_);
    }
    values[i] = fields[0];
  }
  if (values[0] == 0 || values[1] == 0) {
    throw CorpusError(Kind::kParse, "document count and vocabulary size must be positive", 2);
  }
  header_ = {static_cast<std::size_t>(values[0]), static_cast<std::size_t>(values[1]), values[2]};
}

std::optional<DocumentStream::Triple> DocumentStream::read_triple() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_no_;
    strip_cr(line);
    if (is_blank(line)) continue;
    const auto f = parse_fields(line, line_no_);
    if (f.size() != 3) {
      throw CorpusError(Kind::kParse, "expected 'docID wordID count'", line_no_);
    }
    if (f[0] == 0 || f[0] > header_.num_docs) {
      throw CorpusError(Kind::kBounds, "docID " + std::to_string(f[0]) + " outside [1, " +
                                           std::to_string(header_.num_docs) + "]",
                        line_no_);
    }
    if (f[1] == 0 || f[1] > header_.num_words) {
      throw CorpusError(Kind::kBounds, "wordID " + std::to_string(f[1]) + " outside [1, " +
                                           std::to_string(header_.num_words) + "]",
                        line_no_);
    }
    if (f[2] == 0 || f[2] > UINT32_MAX) {
      throw CorpusError(Kind::kParse, "count must be in [1, 2^32)", line_no_);
    }
    if (++triples_read_ > header_.nnz) {
      throw CorpusError(Kind::kConsistency,
                        "more entries than the declared NNZ " + std::to_string(header_.nnz),
                        line_no_);
    }
    return Triple{static_cast<std::size_t>(f[0] - 1), static_cast<std::uint32_t>(f[1] - 1),
                  static_cast<std::uint32_t>(f[2]), line_no_};
  }
  return std::nullopt;
}

std::optional<DocumentBlock> DocumentStream::next() {
  if (finished_) return std::nullopt;
  if (next_doc_ == header_.num_docs) {
    finished_ = true;
    if (auto extra = read_triple()) {
      throw CorpusError(Kind::kParse, "docIDs out of order", extra->line);
    }
    if (triples_read_ != header_.nnz) {
      throw CorpusError(Kind::kConsistency, "declared NNZ " + std::to_string(header_.nnz) +
                                                " but found " + std::to_string(triples_read_));
    }
    return std::nullopt;
  }

  DocumentBlock block{next_doc_, {}};
  std::size_t first_line = 0;
  for (;;) {
    if (!pending_) pending_ = read_triple();
    if (!pending_ || pending_->doc > next_doc_) break;
    if (pending_->doc < next_doc_) {
      throw CorpusError(Kind::kParse, "docIDs out of order", pending_->line);
    }
    if (block.entries.empty()) first_line = pending_->line;
    block.entries.push_back({pending_->word, pending_->count});
    pending_.reset();
  }
  std::sort(block.entries.begin(), block.entries.end(),
            [](const WordCount& a, const WordCount& b) { return a.word < b.word; });
  for (std::size_t i = 1; i < block.entries.size(); ++i) {
    if (block.entries[i - 1].word == block.entries[i].word) {
      throw CorpusError(Kind::kParse,
                        "duplicate wordID " + std::to_string(block.entries[i].word + 1) +
                            " in document " + std::to_string(next_doc_ + 1),
                        first_line);
    }
  }
  ++next_doc_;
  return block;
}

FileSource::FileSource(std::filesystem::path path) : path_(std::move(path)) {
  header_ = DocumentStream(path_).header();
}

void FileSource::for_each_document(const std::function<void(const DocumentRef&)>& visit) const {
  DocumentStream stream(path_);
  while (auto block = stream.next()) visit(block->ref());
}

SparseCorpus parse_uci_bow(std::istream& docword, std::istream* vocab) {
  DocumentStream stream(docword);
  std::vector<std::vector<WordCount>> docs;
  docs.reserve(stream.header().num_docs);
  while (auto block = stream.next()) docs.push_back(std::move(block->entries));
  std::vector<std::string> words;
  if (vocab) words = parse_vocab(*vocab);
  return SparseCorpus::from_documents(stream.header().num_words, docs, std::move(words));
}

SparseCorpus load_uci_bow(const std::filesystem::path& docword,
                          const std::optional<std::filesystem::path>& vocab) {
  std::ifstream in(docword);
  if (!in) throw CorpusError(Kind::kIo, "cannot open " + docword.string());
  if (!vocab) return parse_uci_bow(in);
  std::ifstream vin(*vocab);
  if (!vin) throw CorpusError(Kind::kIo, "cannot open " + vocab->string());
  return parse_uci_bow(in, &vin);
}

std::vector<std::string> parse_vocab(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    words.push_back(line);
  }
  return words;
}

void write_uci_bow(const SparseCorpus& corpus, std::ostream& out) {
  out << corpus.num_docs() << '\n' << corpus.num_words() << '\n' << corpus.nnz() << '\n';
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& e : corpus.document(d).entries) {
      out << d + 1 << ' ' << e.word + 1 << ' ' << e.count << '\n';
    }
  }
}

void write_vocab(const std::vector<std::string>& vocab, std::ostream& out) {
  for (const auto& w : vocab) out << w << '\n';
}

void save_uci_bow(const SparseCorpus& corpus, const std::filesystem::path& docword,
                  const std::optional<std::filesystem::path>& vocab) {
  std::ofstream out(docword);
  if (!out) throw CorpusError(Kind::kIo, "cannot write " + docword.string());
  write_uci_bow(corpus, out);
  if (!out) throw CorpusError(Kind::kIo, "write failed: " + docword.string());
  if (vocab) {
    std::ofstream vout(*vocab);
    if (!vout) throw CorpusError(Kind::kIo, "cannot write " + vocab->string());
    write_vocab(corpus.vocab(), vout);
  }
}

std::pair<SparseCorpus, SparseCorpus> split_corpus(const SparseCorpus& corpus,
                                                   double train_fraction, std::uint64_t seed) {
  const std::size_t num_docs = corpus.num_docs();
  if (num_docs < 2) {
    throw CorpusError(Kind::kInvalidArgument, "split needs at least two documents");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw CorpusError(Kind::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  const auto num_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(num_docs) * train_fraction));
  if (num_train == 0 || num_train == num_docs) {
    throw CorpusError(Kind::kInvalidArgument, "split leaves one side without documents");
  }

  std::vector<std::size_t> order(num_docs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  std::vector<bool> in_train(num_docs, false);
  for (std::size_t i = 0; i < num_train; ++i) in_train[order[i]] = true;

  std::vector<std::vector<WordCount>> train, test;
  train.reserve(num_train);
  test.reserve(num_docs - num_train);
  for (std::size_t d = 0; d < num_docs; ++d) {
    const auto entries = corpus.document(d).entries;
    (in_train[d] ? train : test).emplace_back(entries.begin(), entries.end());
  }
  return {SparseCorpus::from_documents(corpus.num_words(), train, corpus.vocab()),
          SparseCorpus::from_documents(corpus.num_words(), test, corpus.vocab())};
}

std::pair<SparseCorpus, SparseCorpus> split_document_words(const SparseCorpus& corpus,
                                                           double observed_fraction,
                                                           std::uint64_t seed) {
  if (!(observed_fraction > 0.0 && observed_fraction < 1.0)) {
    throw CorpusError(Kind::kInvalidArgument, "observed fraction must lie in (0, 1)");
  }
  SplitMix64 rng(seed);
  const std::size_t num_docs = corpus.num_docs();
  std::vector<std::vector<WordCount>> observed(num_docs), heldout(num_docs);
  std::vector<std::uint32_t> tokens;
  std::vector<std::uint32_t> observed_counts(corpus.num_words(), 0);

  for (std::size_t d = 0; d < num_docs; ++d) {
    const auto entries = corpus.document(d).entries;
    tokens.clear();
    for (const auto& e : entries) tokens.insert(tokens.end(), e.count, e.word);
    shuffle(std::span<std::uint32_t>(tokens), rng);
    const auto num_observed = static_cast<std::size_t>(
        std::floor(static_cast<double>(tokens.size()) * observed_fraction + 0.5));
    for (std::size_t i = 0; i < num_observed; ++i) ++observed_counts[tokens[i]];
    for (const auto& e : entries) {
      const std::uint32_t seen = observed_counts[e.word];
      if (seen > 0) observed[d].push_back({e.word, seen});
      if (seen < e.count) heldout[d].push_back({e.word, e.count - seen});
      observed_counts[e.word] = 0;
    }
  }
  return {SparseCorpus::from_documents(corpus.num_words(), observed, corpus.vocab()),
          SparseCorpus::from_documents(corpus.num_words(), heldout, corpus.vocab())};
}

PlantedCorpus synthesize_corpus(std::size_t num_topics, std::size_t num_words,
                                std::size_t num_docs, std::size_t tokens_per_doc,
                                std::uint64_t seed) {
  if (num_topics < 1 || num_words < num_topics || num_docs < 1 || tokens_per_doc < 1) {
    throw CorpusError(Kind::kInvalidArgument,
                      "synthesis needs K >= 1, W >= K, D >= 1 and tokens_per_doc >= 1");
  }
  SplitMix64 rng(seed);
  PlantedCorpus out{{}, Matrix(num_words, num_topics), Matrix(num_docs, num_topics)};

  // Topic-word columns, drawn into a K x W scratch so each topic is contiguous.
  Matrix topic_words(num_topics, num_words);
  for (std::size_t k = 0; k < num_topics; ++k) {
    sample_flat_dirichlet(topic_words.row(k), rng);
    for (std::size_t w = 0; w < num_words; ++w) out.phi(w, k) = topic_words(k, w);
  }

  std::vector<std::vector<WordCount>> docs(num_docs);
  std::vector<std::uint32_t> counts(num_words, 0);
  for (std::size_t d = 0; d < num_docs; ++d) {
    sample_flat_dirichlet(out.theta.row(d), rng);
    for (std::size_t n = 0; n < tokens_per_doc; ++n) {
      const std::size_t k = sample_categorical(out.theta.row(d), rng.uniform());
      const std::size_t w = sample_categorical(topic_words.row(k), rng.uniform());
      ++counts[w];
    }
    for (std::size_t w = 0; w < num_words; ++w) {
      if (counts[w] > 0) docs[d].push_back({static_cast<std::uint32_t>(w), counts[w]});
      counts[w] = 0;
    }
  }
  out.corpus = SparseCorpus::from_documents(num_words, docs);
  return out;
}

}  // namespace tbp
