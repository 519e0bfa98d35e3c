// Copyright (C) 2026 The mcaf Authors.
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

#include "mcaf/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "mcaf/ast_json.hpp"
#include "mcaf/checkpoint.hpp"
#include "mcaf/error.hpp"
#include "mcaf/explainer.hpp"
#include "mcaf/parser.hpp"
#include "mcaf/path_miner.hpp"
#include "mcaf/rng.hpp"
#include "mcaf/synthetic.hpp"
#include "mcaf/trainer.hpp"

namespace fs = std::filesystem;

namespace mcaf {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw make_error(ErrorCode::IoError, "cannot read file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw make_error(ErrorCode::IoError, "cannot write file: " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw make_error(ErrorCode::IoError, "write failed: " + path);
  }
}

bool is_input_ext(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".c" || ext == ".json";
}

// Files from explicit paths and recursive directory walks, lexicographic
// within each directory argument, duplicates preserved in argument order.
std::vector<std::string> discover_inputs(const std::vector<std::string>& in) {
  std::vector<std::string> files;
  for (const std::string& arg : in) {
    const fs::path p(arg);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> batch;
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (entry.is_regular_file() && is_input_ext(entry.path())) {
          batch.push_back(entry.path().string());
        }
      }
      std::sort(batch.begin(), batch.end());
      files.insert(files.end(), batch.begin(), batch.end());
    } else if (fs::is_regular_file(p, ec)) {
      files.push_back(arg);
    } else {
      throw make_error(ErrorCode::IoError,
                       "input does not exist or is not readable: " + arg);
    }
  }
  if (files.empty()) {
    throw make_error(ErrorCode::EmptyCorpus,
                     "no .c or .json inputs found");
  }
  return files;
}

std::map<std::string, int> load_manifest(const std::string& path) {
  std::map<std::string, int> labels;
  std::istringstream in(read_file(path));
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // Trim and skip blanks/comments.
    const size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const size_t e = raw.find_last_not_of(" \t\r");
    const std::string line = raw.substr(b, e - b + 1);
    if (line[0] == '#') continue;

    const size_t ws = line.find_last_of(" \t");
    const std::string where = path + ":" + std::to_string(line_no);
    if (ws == std::string::npos) {
      throw make_error(ErrorCode::ConfigError,
                       where + ": expected 'path label'");
    }
    const std::string file = line.substr(0, line.find_last_not_of(" \t", ws) + 1);
    const std::string label = line.substr(ws + 1);
    if (label != "0" && label != "1") {
      throw make_error(ErrorCode::ConfigError,
                       where + ": label must be 0 or 1, got '" + label + "'");
    }
    if (file.empty()) {
      throw make_error(ErrorCode::ConfigError, where + ": empty path");
    }
    labels[file] = label == "1" ? 1 : 0;
  }
  return labels;
}

std::optional<int> label_for(const std::string& file,
                             const std::map<std::string, int>& manifest) {
  auto it = manifest.find(file);
  if (it != manifest.end()) return it->second;
  it = manifest.find(fs::path(file).filename().string());
  if (it != manifest.end()) return it->second;
  for (const auto& part : fs::path(file)) {
    if (part == "good") return 0;
    if (part == "bad") return 1;
  }
  return std::nullopt;
}

std::vector<PathSequence> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw make_error(ErrorCode::IoError, "cannot read corpus: " + path);
  }
  return read_corpus_jsonl(in);
}

// Corpus encoded against a vocabulary, each sequence cut to max_contexts
// with a per-record truncation stream.
EncodedDataset encode_corpus(const std::vector<PathSequence>& corpus,
                             const Vocab& vocab, int max_contexts,
                             uint64_t seed) {
  EncodedDataset data;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].label) {
      throw make_error(ErrorCode::InvalidArgument,
                       "record " + std::to_string(i) + " ('" +
                           corpus[i].function_name + "') has no label");
    }
    EncodedSeq seq = encode_sequence(corpus[i], vocab);
    seq = truncate_or_keep(seq, static_cast<size_t>(max_contexts),
                           derive_seed(seed, RngStream::Truncate, i));
    data.seqs.push_back(std::move(seq));
    data.labels.push_back(*corpus[i].label);
  }
  return data;
}

Vocab read_vocab_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw make_error(ErrorCode::IoError, "cannot read vocabulary: " + path);
  }
  return read_vocab_json(in);
}

void check_vocab_matches(const Checkpoint& ckpt, const Vocab& vocab) {
  if (vocab.nodes.size() != ckpt.params.node_vocab() ||
      vocab.paths.size() != ckpt.params.path_vocab()) {
    throw make_error(
        ErrorCode::VocabMismatch,
        "vocabulary sizes (" + std::to_string(vocab.nodes.size()) + " nodes, " +
            std::to_string(vocab.paths.size()) + " paths) do not match the " +
            "checkpoint (" + std::to_string(ckpt.params.node_vocab()) +
            " nodes, " + std::to_string(ckpt.params.path_vocab()) + " paths)");
  }
}

std::string format_report_row(const MetricsReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "precision %.2f  recall %.2f  f1 %.2f  specificity %.2f  "
                "auc %.2f  mean_ce %.6f  n %d  threshold %.6f",
                r.precision, r.recall, r.f1, r.specificity, r.auc, r.mean_ce,
                r.n_samples, r.threshold);
  return std::string(buf);
}

}  // namespace

ExtractSummary cmd_extract(const std::vector<std::string>& inputs,
                           const CliConfig& cfg) {
  const std::vector<std::string> files = discover_inputs(inputs);
  std::map<std::string, int> manifest;
  if (!cfg.manifest.empty()) manifest = load_manifest(cfg.manifest);

  std::vector<PathSequence> records;
  std::vector<std::string> rejects;

  auto mine = [&](const Ast& ast, const std::string& file,
                  const std::optional<int>& label) {
    PathSequence seq =
        extract_path_contexts(ast, cfg.max_path_length, cfg.max_path_width);
    if (seq.contexts.empty()) {
      throw make_error(ErrorCode::DegenerateAst,
                       "no path contexts within the limits");
    }
    seq.label = label;
    if (seq.function_name.empty()) seq.function_name = ast.function_name;
    records.push_back(std::move(seq));
    (void)file;
  };

  for (const std::string& file : files) {
    const std::optional<int> label = label_for(file, manifest);
    try {
      const std::string bytes = read_file(file);
      if (fs::path(file).extension() == ".json") {
        mine(load_ast_json(bytes), file, label);
      } else {
        const std::vector<Ast> functions = parse_functions(bytes);
        for (const Ast& ast : functions) {
          try {
            mine(ast, file, label);
          } catch (const Error& e) {
            rejects.push_back(file + ": " + ast.function_name + ": " +
                              e.what());
          }
        }
      }
    } catch (const Error& e) {
      rejects.push_back(file + ": " + e.what());
    }
  }

  ExtractSummary s;
  s.n_records = records.size();
  s.n_rejects = rejects.size();
  s.corpus_path = cfg.out.empty() ? "corpus.jsonl" : cfg.out;

  if (records.empty()) {
    std::string detail;
    for (const std::string& r : rejects) detail += "\n  " + r;
    throw make_error(ErrorCode::EmptyCorpus,
                     "every input failed; nothing extracted" + detail);
  }

  std::ostringstream corpus;
  write_corpus_jsonl(corpus, records);
  write_file(s.corpus_path, corpus.str());

  if (!rejects.empty() || !cfg.rejects.empty()) {
    s.rejects_path = cfg.rejects.empty() ? s.corpus_path + ".rejects"
                                         : cfg.rejects;
    std::string log;
    for (const std::string& r : rejects) log += r + "\n";
    write_file(s.rejects_path, log);
  }

  std::ostringstream text;
  text << "extracted " << s.n_records << " function record"
       << (s.n_records == 1 ? "" : "s") << " from " << files.size()
       << " file" << (files.size() == 1 ? "" : "s") << " -> "
       << s.corpus_path;
  if (s.n_rejects > 0) {
    text << " (" << s.n_rejects << " rejected -> " << s.rejects_path << ")";
  }
  s.text = text.str();
  return s;
}

GenSyntheticSummary cmd_gen_synthetic(size_t n_samples, uint64_t seed,
                                      const CliConfig& cfg) {
  const std::vector<SyntheticSample> corpus =
      generate_synthetic_corpus(n_samples, seed);

  GenSyntheticSummary s;
  s.out_dir = cfg.out.empty() ? "synthetic" : cfg.out;
  for (const char* sub : {"good", "bad"}) {
    std::error_code ec;
    fs::create_directories(fs::path(s.out_dir) / sub, ec);
    if (ec) {
      throw make_error(ErrorCode::IoError,
                       "cannot create output directories under " + s.out_dir);
    }
  }

  nlohmann::ordered_json planted = nlohmann::ordered_json::object();
  char prefix[16];
  for (size_t i = 0; i < corpus.size(); ++i) {
    const SyntheticSample& sample = corpus[i];
    std::snprintf(prefix, sizeof(prefix), "%04zu_", i);
    const std::string rel = std::string(sample.label == 1 ? "bad/" : "good/") +
                            prefix + sample.name + ".c";
    write_file((fs::path(s.out_dir) / rel).string(), sample.source + "\n");
    if (sample.label == 1) {
      planted[rel] = sample.planted_line;
      ++s.n_bad;
    } else {
      ++s.n_good;
    }
  }

  s.planted_path = (fs::path(s.out_dir) / "planted.json").string();
  write_file(s.planted_path, planted.dump(2) + "\n");

  std::ostringstream text;
  text << "wrote " << s.n_good << " good + " << s.n_bad
       << " bad functions under " << s.out_dir << " (planted lines: "
       << s.planted_path << ")";
  s.text = text.str();
  return s;
}

TrainSummary cmd_train(const std::string& corpus_path, const CliConfig& cfg) {
  const std::vector<PathSequence> corpus = read_corpus_file(corpus_path);
  const Vocab vocab =
      build_vocab(corpus, static_cast<size_t>(cfg.max_node_vocab),
                  static_cast<size_t>(cfg.max_path_vocab));
  const EncodedDataset data =
      encode_corpus(corpus, vocab, cfg.model.max_contexts, cfg.model.seed);

  const TrainResult result =
      train(data, cfg.model, cfg.train, vocab.nodes.size(),
            vocab.paths.size());

  // Decision threshold from the validation ROC at the best parameters.
  EncodedDataset val;
  std::vector<EncodedSeq> val_seqs;
  for (size_t i : result.split.val_idx) {
    val.seqs.push_back(data.seqs[i]);
    val.labels.push_back(data.labels[i]);
    val_seqs.push_back(data.seqs[i]);
  }
  const std::vector<double> val_scores =
      predict_scores(result.params, val_seqs);
  const double threshold =
      select_threshold(roc_curve(val_scores, val.labels));

  TrainSummary s;
  s.validation = evaluate(result.params, val, threshold);
  s.best_epoch = result.best_epoch;
  s.epochs_run = static_cast<int>(result.history.size());
  s.total_params = static_cast<long long>(result.params.param_count());
  // Embedding tables are the first two parameter matrices.
  s.non_embedding_params =
      s.total_params -
      static_cast<long long>(result.params.node_table.size() +
                             result.params.path_table.size());

  const std::string out_dir = cfg.out.empty() ? "train_out" : cfg.out;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw make_error(ErrorCode::IoError,
                     "cannot create output directory: " + out_dir);
  }
  s.checkpoint_path = (fs::path(out_dir) / "checkpoint.mcaf").string();
  s.vocab_path = (fs::path(out_dir) / "vocab.json").string();
  s.history_path = (fs::path(out_dir) / "history.csv").string();
  s.report_path = (fs::path(out_dir) / "report.json").string();

  Checkpoint ckpt;
  ckpt.params = result.params;
  ckpt.threshold = threshold;
  ckpt.max_path_length = cfg.max_path_length;
  ckpt.max_path_width = cfg.max_path_width;
  save_checkpoint_file(s.checkpoint_path, ckpt);

  std::ostringstream vocab_out;
  write_vocab_json(vocab_out, vocab);
  write_file(s.vocab_path, vocab_out.str());
  write_file(s.history_path, history_to_csv(result.history));
  write_file(s.report_path, report_to_json(s.validation) + "\n");

  std::ostringstream text;
  text << "trained " << s.epochs_run << " epoch"
       << (s.epochs_run == 1 ? "" : "s") << " (best " << s.best_epoch
       << ") on " << data.seqs.size() << " samples\n"
       << "validation: " << format_report_row(s.validation) << "\n"
       << "parameters: " << s.total_params << " total, "
       << s.non_embedding_params << " excluding embeddings\n"
       << "wrote " << s.checkpoint_path << ", " << s.vocab_path << ", "
       << s.history_path << ", " << s.report_path;
  s.text = text.str();
  return s;
}

EvalSummary cmd_eval(const std::string& checkpoint_path,
                     const std::string& corpus_path, const CliConfig& cfg) {
  if (cfg.vocab.empty()) {
    throw make_error(ErrorCode::ConfigError,
                     "'vocab' is required: pass the vocab.json written by "
                     "training");
  }
  const Checkpoint ckpt = load_checkpoint_file(checkpoint_path);
  const Vocab vocab = read_vocab_file(cfg.vocab);
  check_vocab_matches(ckpt, vocab);

  const std::vector<PathSequence> corpus = read_corpus_file(corpus_path);
  const EncodedDataset data =
      encode_corpus(corpus, vocab, ckpt.params.config.max_contexts,
                    ckpt.params.config.seed);

  const double threshold =
      cfg.threshold != 0.0 ? cfg.threshold : ckpt.threshold;

  EvalSummary s;
  s.report = evaluate(ckpt.params, data, threshold);
  s.report_json = report_to_json(s.report);
  if (!cfg.out.empty()) write_file(cfg.out, s.report_json + "\n");
  s.text = s.report_json;
  return s;
}

ExplainSummary cmd_explain(const std::string& checkpoint_path,
                           const std::string& input_path,
                           const CliConfig& cfg) {
  if (cfg.vocab.empty()) {
    throw make_error(ErrorCode::ConfigError,
                     "'vocab' is required: pass the vocab.json written by "
                     "training");
  }
  const Checkpoint ckpt = load_checkpoint_file(checkpoint_path);
  const Vocab vocab = read_vocab_file(cfg.vocab);
  check_vocab_matches(ckpt, vocab);

  const std::string bytes = read_file(input_path);
  const Ast ast = fs::path(input_path).extension() == ".json"
                      ? load_ast_json(bytes)
                      : parse_source(bytes);

  PathSequence seq =
      extract_path_contexts(ast, ckpt.max_path_length, ckpt.max_path_width);
  if (seq.contexts.empty()) {
    throw make_error(ErrorCode::DegenerateAst,
                     "no path contexts within the checkpoint's limits");
  }

  // Cut the contexts and the encoding with the same survivor set so path
  // weights stay aligned with the mined contexts.
  EncodedSeq encoded = encode_sequence(seq, vocab);
  const std::vector<size_t> keep = truncate_keep_indices(
      encoded.size(), static_cast<size_t>(ckpt.params.config.max_contexts),
      derive_seed(ckpt.params.config.seed, RngStream::Truncate, 0));
  if (keep.size() != encoded.size()) {
    EncodedSeq enc2;
    std::vector<PathContext> ctx2;
    for (size_t i : keep) {
      enc2.push_back(encoded[i]);
      ctx2.push_back(seq.contexts[i]);
    }
    encoded = std::move(enc2);
    seq.contexts = std::move(ctx2);
  }

  const ForwardResult fwd = forward(encoded, encoded.size(), ckpt.params);
  ExplainSummary s;
  s.predicted_class = fwd.yhat(1) >= fwd.yhat(0) ? 1 : 0;
  s.probability = fwd.yhat(s.predicted_class);
  s.explained_class =
      cfg.explain_class == -1 ? s.predicted_class : cfg.explain_class;

  const Mat a_w =
      attention_view(fwd.artifacts.Q, fwd.artifacts.E, fwd.artifacts.mask,
                     ckpt.params.config.attention_scaling);
  std::vector<double> path_weights;
  for (Eigen::Index k = 0; k < a_w.cols(); ++k) {
    path_weights.push_back(a_w(s.explained_class, k));
  }

  const auto node_weights = path_to_node_weights(seq, path_weights, ast);
  const std::vector<double> line_weights =
      node_to_line_weights(ast, node_weights);
  const std::vector<Band> bands = render_bands(line_weights);

  s.rendered = cfg.format == "html"
                   ? render_html(ast.source_lines, line_weights, bands)
                   : render_ansi(ast.source_lines, line_weights, bands);
  s.sidecar_json = attribution_to_json(line_weights, bands);

  if (!cfg.out.empty()) {
    write_file(cfg.out, s.rendered);
    write_file(cfg.out + ".json", s.sidecar_json + "\n");
  }

  char banner[160];
  std::snprintf(banner, sizeof(banner),
                "%s: predicted %s (p = %.4f)%s\n", ast.function_name.c_str(),
                s.predicted_class == 1 ? "vulnerable" : "not vulnerable",
                s.probability,
                s.explained_class == 0 ? " [non-vulnerable rationale]" : "");
  s.text = banner + s.rendered;
  return s;
}

}  // namespace mcaf
