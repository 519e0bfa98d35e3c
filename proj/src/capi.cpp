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

#include "mcaf/mcaf.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "mcaf/ast_json.hpp"
#include "mcaf/checkpoint.hpp"
#include "mcaf/config.hpp"
#include "mcaf/error.hpp"
#include "mcaf/parser.hpp"
#include "mcaf/path_miner.hpp"
#include "mcaf/pipeline.hpp"
#include "mcaf/trainer.hpp"

namespace {

thread_local std::string g_last_error;

mcaf_status status_of(mcaf::ErrorCode code) {
  switch (code) {
    case mcaf::ErrorCode::Ok: return MCAF_OK;
    case mcaf::ErrorCode::SyntaxError: return MCAF_ERR_SYNTAX;
    case mcaf::ErrorCode::UnsupportedConstruct:
      return MCAF_ERR_UNSUPPORTED_CONSTRUCT;
    case mcaf::ErrorCode::EmptyInput: return MCAF_ERR_EMPTY_INPUT;
    case mcaf::ErrorCode::SchemaError: return MCAF_ERR_SCHEMA;
    case mcaf::ErrorCode::CycleError: return MCAF_ERR_CYCLE;
    case mcaf::ErrorCode::DegenerateAst: return MCAF_ERR_DEGENERATE_AST;
    case mcaf::ErrorCode::EmptyCorpus: return MCAF_ERR_EMPTY_CORPUS;
    case mcaf::ErrorCode::IndexOutOfVocab:
      return MCAF_ERR_INDEX_OUT_OF_VOCAB;
    case mcaf::ErrorCode::AllMasked: return MCAF_ERR_ALL_MASKED;
    case mcaf::ErrorCode::AlignmentError: return MCAF_ERR_ALIGNMENT;
    case mcaf::ErrorCode::SingleClassDataset:
      return MCAF_ERR_SINGLE_CLASS_DATASET;
    case mcaf::ErrorCode::NoPositiveLabels:
      return MCAF_ERR_NO_POSITIVE_LABELS;
    case mcaf::ErrorCode::VocabMismatch: return MCAF_ERR_VOCAB_MISMATCH;
    case mcaf::ErrorCode::ConfigError: return MCAF_ERR_CONFIG;
    case mcaf::ErrorCode::IoError: return MCAF_ERR_IO;
    case mcaf::ErrorCode::InvalidArgument: return MCAF_ERR_INVALID_ARGUMENT;
    case mcaf::ErrorCode::Internal: return MCAF_ERR_INTERNAL;
  }
  return MCAF_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_out(char** slot, const std::string& value) {
  if (slot != nullptr) *slot = dup_string(value);
}

// Runs fn, converting exceptions to statuses and recording the message.
template <typename Fn>
mcaf_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return MCAF_OK;
  } catch (const mcaf::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MCAF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MCAF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MCAF_ERR_INTERNAL;
  }
}

mcaf_status invalid(const char* message) {
  g_last_error = message;
  return MCAF_ERR_INVALID_ARGUMENT;
}

std::string or_empty(const char* s) { return s == nullptr ? "" : s; }

}  // namespace

extern "C" {

struct mcaf_model {
  mcaf::Checkpoint checkpoint;
  mcaf::Vocab vocab;
};

const char* mcaf_status_name(mcaf_status status) {
  switch (status) {
    case MCAF_OK: return "Ok";
    case MCAF_ERR_SYNTAX: return "SyntaxError";
    case MCAF_ERR_UNSUPPORTED_CONSTRUCT: return "UnsupportedConstruct";
    case MCAF_ERR_EMPTY_INPUT: return "EmptyInput";
    case MCAF_ERR_SCHEMA: return "SchemaError";
    case MCAF_ERR_CYCLE: return "CycleError";
    case MCAF_ERR_DEGENERATE_AST: return "DegenerateAst";
    case MCAF_ERR_EMPTY_CORPUS: return "EmptyCorpus";
    case MCAF_ERR_INDEX_OUT_OF_VOCAB: return "IndexOutOfVocab";
    case MCAF_ERR_ALL_MASKED: return "AllMasked";
    case MCAF_ERR_ALIGNMENT: return "AlignmentError";
    case MCAF_ERR_SINGLE_CLASS_DATASET: return "SingleClassDataset";
    case MCAF_ERR_NO_POSITIVE_LABELS: return "NoPositiveLabels";
    case MCAF_ERR_VOCAB_MISMATCH: return "VocabMismatch";
    case MCAF_ERR_CONFIG: return "ConfigError";
    case MCAF_ERR_IO: return "IoError";
    case MCAF_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case MCAF_ERR_INTERNAL: return "Internal";
  }
  return "Internal";
}

const char* mcaf_last_error(void) { return g_last_error.c_str(); }

void mcaf_free(void* ptr) { std::free(ptr); }

mcaf_status mcaf_cmd_extract(const char* const* inputs, size_t n_inputs,
                             const char* config_path, const char* overrides,
                             char** summary_out) {
  if (inputs == nullptr || n_inputs == 0) {
    return invalid("mcaf_cmd_extract: at least one input is required");
  }
  for (size_t i = 0; i < n_inputs; ++i) {
    if (inputs[i] == nullptr) {
      return invalid("mcaf_cmd_extract: null input path");
    }
  }
  return guarded([&] {
    std::vector<std::string> paths(inputs, inputs + n_inputs);
    const mcaf::CliConfig cfg =
        mcaf::load_cli_config(or_empty(config_path), or_empty(overrides));
    const mcaf::ExtractSummary s = mcaf::cmd_extract(paths, cfg);
    set_out(summary_out, s.text);
  });
}

mcaf_status mcaf_cmd_gen_synthetic(size_t n, const char* config_path,
                                   const char* overrides, char** summary_out) {
  return guarded([&] {
    const mcaf::CliConfig cfg =
        mcaf::load_cli_config(or_empty(config_path), or_empty(overrides));
    const mcaf::GenSyntheticSummary s =
        mcaf::cmd_gen_synthetic(n, cfg.model.seed, cfg);
    set_out(summary_out, s.text);
  });
}

mcaf_status mcaf_cmd_train(const char* corpus_path, const char* config_path,
                           const char* overrides, char** summary_out) {
  if (corpus_path == nullptr) {
    return invalid("mcaf_cmd_train: corpus_path is required");
  }
  return guarded([&] {
    const mcaf::CliConfig cfg =
        mcaf::load_cli_config(or_empty(config_path), or_empty(overrides));
    const mcaf::TrainSummary s = mcaf::cmd_train(corpus_path, cfg);
    set_out(summary_out, s.text);
  });
}

mcaf_status mcaf_cmd_eval(const char* checkpoint_path, const char* vocab_path,
                          const char* corpus_path, const char* config_path,
                          const char* overrides, char** report_json_out) {
  if (checkpoint_path == nullptr || vocab_path == nullptr ||
      corpus_path == nullptr) {
    return invalid(
        "mcaf_cmd_eval: checkpoint_path, vocab_path, and corpus_path are "
        "required");
  }
  return guarded([&] {
    mcaf::CliConfig cfg =
        mcaf::load_cli_config(or_empty(config_path), or_empty(overrides));
    cfg.vocab = vocab_path;
    const mcaf::EvalSummary s = mcaf::cmd_eval(checkpoint_path, corpus_path,
                                               cfg);
    set_out(report_json_out, s.report_json);
  });
}

mcaf_status mcaf_cmd_explain(const char* checkpoint_path,
                             const char* vocab_path, const char* input_path,
                             const char* config_path, const char* overrides,
                             char** output_out, char** sidecar_json_out) {
  if (checkpoint_path == nullptr || vocab_path == nullptr ||
      input_path == nullptr) {
    return invalid(
        "mcaf_cmd_explain: checkpoint_path, vocab_path, and input_path are "
        "required");
  }
  return guarded([&] {
    mcaf::CliConfig cfg =
        mcaf::load_cli_config(or_empty(config_path), or_empty(overrides));
    cfg.vocab = vocab_path;
    const mcaf::ExplainSummary s =
        mcaf::cmd_explain(checkpoint_path, input_path, cfg);
    set_out(output_out, s.text);
    set_out(sidecar_json_out, s.sidecar_json);
  });
}

mcaf_status mcaf_parse_source(const char* source, char** ast_json_out) {
  if (source == nullptr) {
    return invalid("mcaf_parse_source: source is required");
  }
  if (ast_json_out == nullptr) {
    return invalid("mcaf_parse_source: ast_json_out is required");
  }
  return guarded([&] {
    const mcaf::Ast ast = mcaf::parse_source(source);
    set_out(ast_json_out, mcaf::dump_ast_json(ast));
  });
}

mcaf_status mcaf_model_load(const char* checkpoint_path,
                            const char* vocab_path, mcaf_model** model_out) {
  if (checkpoint_path == nullptr || vocab_path == nullptr ||
      model_out == nullptr) {
    return invalid(
        "mcaf_model_load: checkpoint_path, vocab_path, and model_out are "
        "required");
  }
  return guarded([&] {
    auto model = std::make_unique<mcaf_model>();
    model->checkpoint = mcaf::load_checkpoint_file(checkpoint_path);
    std::ifstream in(vocab_path);
    if (!in) {
      throw mcaf::make_error(mcaf::ErrorCode::IoError,
                             std::string("cannot read vocabulary: ") +
                                 vocab_path);
    }
    model->vocab = mcaf::read_vocab_json(in);
    if (model->vocab.nodes.size() != model->checkpoint.params.node_vocab() ||
        model->vocab.paths.size() != model->checkpoint.params.path_vocab()) {
      throw mcaf::make_error(mcaf::ErrorCode::VocabMismatch,
                             "vocabulary does not match the checkpoint");
    }
    *model_out = model.release();
  });
}

void mcaf_model_free(mcaf_model* model) { delete model; }

mcaf_status mcaf_model_predict(const mcaf_model* model, const char* source,
                               double* p_vulnerable_out) {
  if (model == nullptr || source == nullptr || p_vulnerable_out == nullptr) {
    return invalid(
        "mcaf_model_predict: model, source, and p_vulnerable_out are "
        "required");
  }
  return guarded([&] {
    const mcaf::Ast ast = mcaf::parse_source(source);
    const mcaf::PathSequence seq = mcaf::extract_path_contexts(
        ast, model->checkpoint.max_path_length,
        model->checkpoint.max_path_width);
    if (seq.contexts.empty()) {
      throw mcaf::make_error(
          mcaf::ErrorCode::DegenerateAst,
          "no path contexts within the checkpoint's limits");
    }
    mcaf::EncodedSeq encoded = mcaf::encode_sequence(seq, model->vocab);
    encoded = mcaf::truncate_or_keep(
        encoded,
        static_cast<size_t>(model->checkpoint.params.config.max_contexts),
        mcaf::derive_seed(model->checkpoint.params.config.seed,
                          mcaf::RngStream::Truncate, 0));
    const mcaf::ForwardResult fwd =
        mcaf::forward(encoded, encoded.size(), model->checkpoint.params);
    *p_vulnerable_out = fwd.yhat(1);
  });
}

}  // extern "C"
