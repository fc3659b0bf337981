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

#include "tbp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "tbp/corpus.hpp"
#include "tbp/memory.hpp"
#include "tbp/model.hpp"
#include "tbp/report.hpp"
#include "tbp/train.hpp"

namespace tbp::cli {
namespace {

namespace fs = std::filesystem;

/// Everything a subcommand may read from the command line.
struct RunConfig {
  std::string corpus;
  std::string vocab;
  std::string model;
  std::string algorithm = "stbp";
  std::size_t k = 10;
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 500;
  std::size_t fold_in_iterations = 0;
  double threshold = 1.0;
  std::uint64_t seed = 1;
  bool stream = false;
  bool require_convergence = false;
  bool timing = false;
  std::string out;
  std::size_t top_n = 10;
  double train_fraction = 0.5;
  double observed_fraction = 0.8;
  std::size_t words = 1000;
  std::size_t docs = 1000;
  std::size_t doc_length = 100;
};

/// Configuration problems detected before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Algorithm require_algorithm(const RunConfig& cfg) {
  const auto a = parse_algorithm(cfg.algorithm);
  if (!a) throw ConfigError("unknown algorithm '" + cfg.algorithm + "'");
  return *a;
}

Hyperparams hyperparams(const RunConfig& cfg) {
  if (cfg.k == 0) throw ConfigError("--k must be at least 1");
  Hyperparams hp = Hyperparams::defaults(cfg.k);
  if (cfg.alpha) hp.alpha = *cfg.alpha;
  hp.beta = cfg.beta;
  return hp;
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + ": no such file " + path);
}

void require_outdir(const std::string& path) {
  if (path.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) throw ConfigError("--out: cannot create directory " + path);
}

std::vector<std::string> load_vocab(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("--vocab: cannot open " + path);
  return parse_vocab(in);
}

TrainOptions train_options(const RunConfig& cfg) {
  if (cfg.iterations == 0) throw ConfigError("--iterations must be at least 1");
  TrainOptions o;
  o.algorithm = require_algorithm(cfg);
  o.max_iterations = cfg.iterations;
  o.threshold = cfg.threshold;
  o.seed = cfg.seed;
  return o;
}

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--algorithm", cfg.algorithm, "stbp | atbp | gs | bp-sync | bp-async | vb")
      ->capture_default_str();
  cmd->add_option("--k", cfg.k, "Number of topics")->capture_default_str();
  cmd->add_option("--alpha", cfg.alpha, "Document-topic smoothing [default: 2/K]");
  cmd->add_option("--beta", cfg.beta, "Topic-word smoothing")->capture_default_str();
  cmd->add_option("--iterations", cfg.iterations, "Maximum training iterations")
      ->capture_default_str();
  cmd->add_option("--threshold", cfg.threshold,
                  "Stop when training perplexity changes by less than this")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_flag("--require-convergence", cfg.require_convergence,
                "Exit with status 2 if the iteration limit is hit first");
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.corpus, "--corpus");
  if (!cfg.vocab.empty()) require_file(cfg.vocab, "--vocab");
  require_outdir(cfg.out);
  const Hyperparams hp = hyperparams(cfg);
  const TrainOptions options = train_options(cfg);
  if (cfg.stream && !supports_streaming(options.algorithm)) {
    throw ConfigError("--stream is only available for stbp and atbp");
  }

  TrainResult result;
  std::vector<std::string> vocab;
  if (cfg.stream) {
    vocab = load_vocab(cfg.vocab);
    result = train_streaming(cfg.corpus, hp, options);
  } else {
    SparseCorpus corpus =
        load_uci_bow(cfg.corpus, cfg.vocab.empty() ? std::nullopt
                                                   : std::optional<fs::path>(cfg.vocab));
    vocab = corpus.vocab();
    result = train(corpus, hp, options);
  }
  emit_report(result.model, hp, result.trace, result.memory, vocab, cfg.top_n, cfg.timing,
              cfg.out);

  const auto& last = result.trace.points.back();
  out << "algorithm=" << to_string(options.algorithm) << " iterations=" << last.iteration
      << " perplexity=" << format_double(last.perplexity)
      << " converged=" << (result.converged ? "yes" : "no") << '\n';
  if (cfg.require_convergence && !result.converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.corpus, "--corpus");
  if (!cfg.out.empty()) require_outdir(cfg.out);
  const Hyperparams hp = hyperparams(cfg);
  const TrainOptions options = train_options(cfg);
  const SparseCorpus corpus = load_uci_bow(cfg.corpus);

  ProtocolOptions protocol;
  protocol.train_fraction = cfg.train_fraction;
  protocol.observed_fraction = cfg.observed_fraction;
  protocol.fold_in_iterations = cfg.fold_in_iterations;
  const ProtocolResult r = run_protocol(corpus, hp, options, protocol);

  std::ostringstream report;
  report << "algorithm=" << to_string(options.algorithm) << '\n'
         << "train_docs=" << r.train_docs << '\n'
         << "test_docs=" << r.test_docs << '\n'
         << "training_iterations=" << r.training.trace.points.size() << '\n'
         << "converged=" << (r.training.converged ? "yes" : "no") << '\n'
         << "training_perplexity=" << format_double(r.training.trace.points.back().perplexity)
         << '\n'
         << "predictive_perplexity=" << format_double(r.predictive_perplexity) << '\n';
  out << report.str();
  if (!cfg.out.empty()) {
    const fs::path path = fs::path(cfg.out) / "eval.txt";
    std::ofstream f(path);
    if (!(f << report.str())) throw std::runtime_error("write failed: " + path.string());
  }
  if (cfg.require_convergence && !r.training.converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_topics(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.model, "--model");
  if (!cfg.vocab.empty()) require_file(cfg.vocab, "--vocab");
  const LoadedModel loaded = load_model(cfg.model);
  const auto vocab = load_vocab(cfg.vocab);
  const std::size_t n = std::min(cfg.top_n, loaded.model.num_words());
  const auto table = top_words(loaded.model, vocab, n);
  if (cfg.out.empty()) {
    write_topics_table(table, out);
    return kExitOk;
  }
  require_outdir(cfg.out);
  const fs::path path = report_files(cfg.out).topics;
  std::ofstream f(path);
  write_topics_table(table, f);
  if (!f) throw std::runtime_error("write failed: " + path.string());
  return kExitOk;
}

int cmd_memory(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.corpus, "--corpus");
  if (!cfg.out.empty()) require_outdir(cfg.out);
  if (cfg.k == 0) throw ConfigError("--k must be at least 1");
  const Algorithm algorithm = require_algorithm(cfg);
  const MemoryReport report = estimate_message_memory(algorithm, scan_stats(FileSource(cfg.corpus)), cfg.k);
  write_memory_report(report, out);
  if (!cfg.out.empty()) {
    const fs::path path = report_files(cfg.out).memory;
    std::ofstream f(path);
    write_memory_report(report, f);
    if (!f) throw std::runtime_error("write failed: " + path.string());
  }
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  require_outdir(cfg.out);
  const PlantedCorpus planted = synthesize_corpus(cfg.k, cfg.words, cfg.docs, cfg.doc_length, cfg.seed);
  std::vector<std::string> vocab(cfg.words);
  for (std::size_t w = 0; w < cfg.words; ++w) vocab[w] = "word" + std::to_string(w + 1);

  const fs::path dir(cfg.out);
  {
    std::ofstream f(dir / "docword.txt");
    write_uci_bow(planted.corpus, f);
    if (!f) throw std::runtime_error("write failed: " + (dir / "docword.txt").string());
  }
  {
    std::ofstream f(dir / "vocab.txt");
    write_vocab(vocab, f);
    if (!f) throw std::runtime_error("write failed: " + (dir / "vocab.txt").string());
  }
  save_model({planted.phi, planted.theta}, hyperparams(cfg), dir / "planted_model.txt");
  out << "docs=" << planted.corpus.num_docs() << " words=" << planted.corpus.num_words()
      << " nnz=" << planted.corpus.nnz() << " tokens=" << planted.corpus.token_total() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Topic modeling with tiny belief propagation and baseline trainers", "tbp"};
  app.require_subcommand(1);

  auto* train_cmd = app.add_subcommand("train", "Train a model and write model, trace, memory and topic files");
  train_cmd->add_option("--corpus", cfg.corpus, "UCI docword file");
  train_cmd->add_option("--vocab", cfg.vocab, "Vocabulary file, one word per line");
  add_model_flags(train_cmd, cfg);
  train_cmd->add_flag("--stream", cfg.stream, "Stream the corpus from disk (stbp, atbp only)");
  train_cmd->add_flag("--timing", cfg.timing, "Record wall time in the trace CSV");
  train_cmd->add_option("--out", cfg.out, "Output directory");
  train_cmd->add_option("--top-n", cfg.top_n, "Words per topic in topics.tsv")->capture_default_str();

  auto* eval_cmd = app.add_subcommand("eval", "Held-out predictive perplexity");
  eval_cmd->add_option("--corpus", cfg.corpus, "UCI docword file");
  add_model_flags(eval_cmd, cfg);
  eval_cmd->add_option("--train-fraction", cfg.train_fraction, "Share of documents used for training")
      ->capture_default_str();
  eval_cmd->add_option("--observed-fraction", cfg.observed_fraction,
                       "Share of each test document's tokens used for fold-in")
      ->capture_default_str();
  eval_cmd->add_option("--fold-in-iterations", cfg.fold_in_iterations,
                       "Fold-in sweeps [default: same as --iterations]");
  eval_cmd->add_option("--out", cfg.out, "Output directory for eval.txt");

  auto* topics_cmd = app.add_subcommand("topics", "Top words per topic of a saved model");
  topics_cmd->add_option("--model", cfg.model, "Model file written by train");
  topics_cmd->add_option("--vocab", cfg.vocab, "Vocabulary file");
  topics_cmd->add_option("--top-n", cfg.top_n, "Words per topic")->capture_default_str();
  topics_cmd->add_option("--out", cfg.out, "Output directory for topics.tsv [default: stdout]");

  auto* memory_cmd = app.add_subcommand("memory", "Memory accounting without training");
  memory_cmd->add_option("--corpus", cfg.corpus, "UCI docword file");
  memory_cmd->add_option("--algorithm", cfg.algorithm, "stbp | atbp | gs | bp-sync | bp-async | vb")
      ->capture_default_str();
  memory_cmd->add_option("--k", cfg.k, "Number of topics")->capture_default_str();
  memory_cmd->add_option("--out", cfg.out, "Output directory for memory.txt");

  auto* synth_cmd = app.add_subcommand("synth", "Sample a corpus from planted LDA topics");
  synth_cmd->add_option("--k", cfg.k, "Number of planted topics")->capture_default_str();
  synth_cmd->add_option("--words", cfg.words, "Vocabulary size")->capture_default_str();
  synth_cmd->add_option("--docs", cfg.docs, "Number of documents")->capture_default_str();
  synth_cmd->add_option("--doc-length", cfg.doc_length, "Tokens per document")->capture_default_str();
  synth_cmd->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  synth_cmd->add_option("--out", cfg.out, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return kExitError;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(cfg, out);
    if (eval_cmd->parsed()) return cmd_eval(cfg, out);
    if (topics_cmd->parsed()) return cmd_topics(cfg, out);
    if (memory_cmd->parsed()) return cmd_memory(cfg, out);
    if (synth_cmd->parsed()) return cmd_synth(cfg, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return kExitError;
  }
  err << "error: no subcommand\n";
  return kExitError;
}

}  // namespace tbp::cli
