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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcaf/config.hpp"
#include "mcaf/metrics.hpp"

namespace mcaf {

// The five pipeline commands behind the command-line tool. Every command is
// deterministic: identical inputs, config, and seed produce byte-identical
// artifacts. Each summary's `text` is the human-readable report the caller
// prints; failures raise mcaf::Error and write nothing partial of value.

struct ExtractSummary {
  size_t n_records = 0;
  size_t n_rejects = 0;
  std::string corpus_path;
  std::string rejects_path;  // empty when no reject log was written
  std::string text;
};

// Walks files and directories (recursive, lexicographic order), parses *.c
// (every function definition) and *.json (one tree per file), labels each
// record from the manifest when given ("path label" lines; basename match
// allowed) or from a good/ or bad/ path component, mines path contexts with
// cfg limits, and writes one JSONL record per function to cfg.out. Per-file
// and per-function failures go to the rejects log instead of aborting;
// EmptyCorpus when nothing at all survives.
ExtractSummary cmd_extract(const std::vector<std::string>& inputs,
                           const CliConfig& cfg);

struct GenSyntheticSummary {
  size_t n_good = 0;
  size_t n_bad = 0;
  std::string out_dir;
  std::string planted_path;
  std::string text;
};

// Writes n_samples generated functions under cfg.out as good/NNNN_name.c
// and bad/NNNN_name.c plus planted.json mapping each vulnerable file to the
// 1-based line of its unchecked call.
GenSyntheticSummary cmd_gen_synthetic(size_t n_samples, uint64_t seed,
                                      const CliConfig& cfg);

struct TrainSummary {
  MetricsReport validation;  // at the selected threshold
  long long total_params = 0;
  long long non_embedding_params = 0;
  int best_epoch = 0;
  int epochs_run = 0;
  std::string checkpoint_path;
  std::string vocab_path;
  std::string history_path;
  std::string report_path;
  std::string text;
};

// Reads a labeled corpus, builds the capped vocabulary over all of it,
// encodes and truncates each sequence, trains, picks the decision threshold
// from the validation ROC, and writes checkpoint.mcaf, vocab.json,
// history.csv, and report.json under the cfg.out directory.
TrainSummary cmd_train(const std::string& corpus_path, const CliConfig& cfg);

struct EvalSummary {
  MetricsReport report;
  std::string report_json;
  std::string text;
};

// Scores a labeled corpus under a trained checkpoint + its vocabulary
// (cfg.vocab; sizes must match the checkpoint or VocabMismatch). Threshold:
// cfg.threshold when nonzero, else the checkpoint's stored one. Writes the
// JSON report to cfg.out when set.
EvalSummary cmd_eval(const std::string& checkpoint_path,
                     const std::string& corpus_path, const CliConfig& cfg);

struct ExplainSummary {
  int predicted_class = 0;
  double probability = 0.0;  // of the predicted class
  int explained_class = 0;
  std::string rendered;      // cfg.format: "html" or "ansi"
  std::string sidecar_json;  // {"lines": [...]} attribution
  std::string text;          // prediction banner + rendering
};

// Runs one function (first in a .c file, or a .json tree) through the
// model and renders line-level attention attribution for the predicted
// class (or cfg.explain_class when 0/1). With cfg.out set, writes the
// rendering there and the sidecar next to it at cfg.out + ".json".
ExplainSummary cmd_explain(const std::string& checkpoint_path,
                           const std::string& input_path,
                           const CliConfig& cfg);

}  // namespace mcaf
