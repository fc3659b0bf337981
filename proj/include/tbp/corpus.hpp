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
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbp/matrix.hpp"

namespace tbp {

/// One nonzero of the document-word matrix. `word` is 0-based.
struct WordCount {
  std::uint32_t word = 0;
  std::uint32_t count = 0;

  bool operator==(const WordCount&) const = default;
};

/// Non-owning view of one document. `index` is 0-based.
struct DocumentRef {
  std::size_t index = 0;
  std::span<const WordCount> entries;

  std::uint64_t tokens() const {
    std::uint64_t n = 0;
    for (const auto& e : entries) n += e.count;
    return n;
  }
};

/// A document read from disk, owning its entries.
struct DocumentBlock {
  std::size_t index = 0;
  std::vector<WordCount> entries;

  DocumentRef ref() const { return {index, entries}; }
  bool operator==(const DocumentBlock&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind { kParse, kBounds, kConsistency, kInvalidArgument, kIo };

  CorpusError(Kind kind, const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  /// 1-based line of the offending input, or 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Anything that can hand out documents in index order, once per call.
/// Trainers and evaluators consume this so the same code runs over an
/// in-memory corpus or a file streamed from disk.
class DocumentSource {
 public:
  virtual ~DocumentSource() = default;

  virtual std::size_t num_docs() const = 0;
  virtual std::size_t num_words() const = 0;
  /// Visits every document 0..num_docs()-1 in order, including empty ones.
  virtual void for_each_document(const std::function<void(const DocumentRef&)>& visit) const = 0;
};

/// Document-major sparse count matrix (CSR by document) plus optional vocabulary.
class SparseCorpus final : public DocumentSource {
 public:
  SparseCorpus() = default;

  /// Takes ownership of per-document entry lists. Entries must already satisfy
  /// the corpus invariants (sorted unique words < num_words, counts >= 1).
  static SparseCorpus from_documents(std::size_t num_words,
                                     const std::vector<std::vector<WordCount>>& docs,
                                     std::vector<std::string> vocab = {});

  std::size_t num_docs() const override { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_words() const override { return num_words_; }
  std::size_t nnz() const { return entries_.size(); }
  std::uint64_t token_total() const { return token_total_; }

  DocumentRef document(std::size_t d) const {
    return {d, std::span<const WordCount>(entries_).subspan(offsets_[d],
                                                            offsets_[d + 1] - offsets_[d])};
  }
  std::uint64_t doc_tokens(std::size_t d) const { return doc_tokens_[d]; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  void set_vocab(std::vector<std::string> vocab);

  void for_each_document(const std::function<void(const DocumentRef&)>& visit) const override;

  bool operator==(const SparseCorpus& other) const {
    return num_words_ == other.num_words_ && offsets_ == other.offsets_ &&
           entries_ == other.entries_ && vocab_ == other.vocab_;
  }

 private:
  std::size_t num_words_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<WordCount> entries_;
  std::vector<std::uint64_t> doc_tokens_;
  std::uint64_t token_total_ = 0;
  std::vector<std::string> vocab_;
};

/// The three-line header of a docword file.
struct DocwordHeader {
  std::size_t num_docs = 0;
  std::size_t num_words = 0;
  std::uint64_t nnz = 0;
};

/// Sequential reader over a UCI docword stream. Yields one DocumentBlock per
/// document index, including documents with no lines in the file. Only the
/// current document is held in memory. Errors surface at the document where
/// they occur; the final NNZ check runs when the stream is exhausted.
class DocumentStream {
 public:
  explicit DocumentStream(const std::filesystem::path& path);
  /// Reads from a caller-owned stream that must outlive this object.
  explicit DocumentStream(std::istream& in);

  const DocwordHeader& header() const { return header_; }

  std::optional<DocumentBlock> next();

 private:
  struct Triple {
    std::size_t doc;
    std::uint32_t word;
    std::uint32_t count;
    std::size_t line;
  };

  void read_header();
  std::optional<Triple> read_triple();

  std::unique_ptr<std::ifstream> owned_;
  std::istream* in_;
  DocwordHeader header_;
  std::size_t line_no_ = 0;
  std::uint64_t triples_read_ = 0;
  std::size_t next_doc_ = 0;
  std::optional<Triple> pending_;
  bool finished_ = false;
};

/// DocumentSource that re-opens and streams a docword file on every pass.
class FileSource final : public DocumentSource {
 public:
  explicit FileSource(std::filesystem::path path);

  const DocwordHeader& header() const { return header_; }
  std::size_t num_docs() const override { return header_.num_docs; }
  std::size_t num_words() const override { return header_.num_words; }
  void for_each_document(const std::function<void(const DocumentRef&)>& visit) const override;

 private:
  std::filesystem::path path_;
  DocwordHeader header_;
};

SparseCorpus parse_uci_bow(std::istream& docword, std::istream* vocab = nullptr);
SparseCorpus load_uci_bow(const std::filesystem::path& docword,
                          const std::optional<std::filesystem::path>& vocab = std::nullopt);
std::vector<std::string> parse_vocab(std::istream& in);

void write_uci_bow(const SparseCorpus& corpus, std::ostream& out);
void write_vocab(const std::vector<std::string>& vocab, std::ostream& out);
void save_uci_bow(const SparseCorpus& corpus, const std::filesystem::path& docword,
                  const std::optional<std::filesystem::path>& vocab = std::nullopt);

/// Random document-level partition. The first output holds
/// floor(D * train_fraction) documents; both keep the original vocabulary and
/// preserve the relative order of their documents.
std::pair<SparseCorpus, SparseCorpus> split_corpus(const SparseCorpus& corpus,
                                                   double train_fraction, std::uint64_t seed);

/// Random token-level partition inside every document. Each document's tokens
/// are expanded, shuffled, and the first floor(n * fraction + 0.5) go to the
/// observed (first) output. Document count and indices are preserved.
std::pair<SparseCorpus, SparseCorpus> split_document_words(const SparseCorpus& corpus,
                                                           double observed_fraction,
                                                           std::uint64_t seed);

struct PlantedCorpus {
  SparseCorpus corpus;
  Matrix phi;    // W x K, columns sum to 1
  Matrix theta;  // D x K, rows sum to 1
};

/// Samples a corpus from the LDA generative process with flat Dirichlet
/// priors on both the topic-word and the document-topic multinomials.
PlantedCorpus synthesize_corpus(std::size_t num_topics, std::size_t num_words,
                                std::size_t num_docs, std::size_t tokens_per_doc,
                                std::uint64_t seed);

}  // namespace tbp
