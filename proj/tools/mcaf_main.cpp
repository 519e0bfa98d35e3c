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

// Command-line front end. Everything goes through the C API in mcaf.h; all
// configuration rides a config file plus `key = value` override lines built
// from the flags the user actually passed.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcaf/mcaf.h"

namespace {

// Accumulates override lines for flags the user set explicitly, so config
// file values survive unless a flag overrides them.
class Overrides {
 public:
  void add(const std::string& key, const std::string& value) {
    text_ += key + " = " + value + "\n";
  }
  void add_int(const std::string& key, long long v) {
    add(key, std::to_string(v));
  }
  void add_real(const std::string& key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    add(key, buf);
  }
  const char* c_str() const { return text_.c_str(); }

 private:
  std::string text_;
};

struct CommonFlags {
  std::string config;
  unsigned long long seed = 0;
  double threshold = 0.0;
  std::string format;
  std::string out;
  long long max_path_length = 0;
  long long max_path_width = 0;
  long long max_contexts = 0;
  long long epochs = 0;
  double lr = 0.0;
  long long batch_size = 0;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* mpl_opt = nullptr;
  CLI::Option* mpw_opt = nullptr;
  CLI::Option* mc_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* lr_opt = nullptr;
  CLI::Option* bs_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "Config file of key = value lines");
    seed_opt = cmd->add_option("--seed", seed,
                               "Seed for initialization, shuffling, and "
                               "generation");
    threshold_opt = cmd->add_option(
        "--threshold", threshold, "Decision threshold in (0,1)");
    format_opt = cmd->add_option("--format", format,
                                 "Rendering format: html or ansi")
                     ->check(CLI::IsMember({"html", "ansi"}));
    out_opt = cmd->add_option("--out", out, "Output path (or directory)");
    mpl_opt = cmd->add_option("--max-path-length", max_path_length,
                              "Most nodes allowed on a mined path (0 = off)");
    mpw_opt = cmd->add_option("--max-path-width", max_path_width,
                              "Widest leaf-index gap allowed (0 = off)");
    mc_opt = cmd->add_option("--max-contexts", max_contexts,
                             "Per-function context cap (seeded downsample)");
    epochs_opt = cmd->add_option("--epochs", epochs, "Training epochs");
    lr_opt = cmd->add_option("--lr", lr, "Learning rate");
    bs_opt = cmd->add_option("--batch-size", batch_size, "Batch size");
  }

  Overrides overrides() const {
    Overrides o;
    if (seed_opt && *seed_opt) o.add("seed", std::to_string(seed));
    if (threshold_opt && *threshold_opt) o.add_real("threshold", threshold);
    if (format_opt && *format_opt) o.add("format", format);
    if (out_opt && *out_opt) o.add("out", out);
    if (mpl_opt && *mpl_opt) o.add_int("max_path_length", max_path_length);
    if (mpw_opt && *mpw_opt) o.add_int("max_path_width", max_path_width);
    if (mc_opt && *mc_opt) o.add_int("max_contexts", max_contexts);
    if (epochs_opt && *epochs_opt) o.add_int("epochs", epochs);
    if (lr_opt && *lr_opt) o.add_real("learning_rate", lr);
    if (bs_opt && *bs_opt) o.add_int("batch_size", batch_size);
    return o;
  }

  const char* config_or_null() const {
    return config.empty() ? nullptr : config.c_str();
  }
};

int report(mcaf_status status) {
  if (status == MCAF_OK) return 0;
  std::fprintf(stderr, "error [%s]: %s\n", mcaf_status_name(status),
               mcaf_last_error());
  return 1;
}

void print_owned(char* text) {
  if (text != nullptr) {
    std::printf("%s\n", text);
    mcaf_free(text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mcaf: detects unchecked-return-value defects in C functions by "
      "classifying mined AST path contexts with an attention-fusion "
      "network, and localizes predictions to source lines"};
  app.require_subcommand(1);

  // extract ---------------------------------------------------------------
  auto* extract = app.add_subcommand(
      "extract", "Mine labeled path contexts from .c/.json inputs to JSONL");
  std::vector<std::string> extract_inputs;
  extract->add_option("inputs", extract_inputs, "Files or directories")
      ->required()
      ->expected(-1);
  std::string manifest, rejects;
  auto* manifest_opt = extract->add_option(
      "--manifest", manifest, "File of 'path label' lines (overrides "
      "good/ and bad/ directory labels)");
  auto* rejects_opt = extract->add_option(
      "--rejects", rejects, "Reject-log path (default: <out>.rejects)");
  CommonFlags extract_flags;
  extract_flags.attach(extract);

  // gen-synthetic ----------------------------------------------------------
  auto* gen = app.add_subcommand(
      "gen-synthetic",
      "Generate a labeled corpus of vulnerable and fixed C functions");
  size_t gen_n = 64;
  gen->add_option("--n", gen_n, "Sample count (even, >= 2)");
  CommonFlags gen_flags;
  gen_flags.attach(gen);

  // train -------------------------------------------------------------------
  auto* train = app.add_subcommand(
      "train", "Train on a labeled corpus and write checkpoint artifacts");
  std::string train_corpus;
  train->add_option("corpus", train_corpus, "Corpus JSONL from extract")
      ->required();
  CommonFlags train_flags;
  train_flags.attach(train);

  // eval --------------------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "Score a labeled corpus under a trained checkpoint");
  std::string eval_checkpoint, eval_vocab, eval_corpus;
  eval->add_option("--checkpoint", eval_checkpoint, "checkpoint.mcaf path")
      ->required();
  eval->add_option("--vocab", eval_vocab, "vocab.json path")->required();
  eval->add_option("corpus", eval_corpus, "Corpus JSONL to score")
      ->required();
  CommonFlags eval_flags;
  eval_flags.attach(eval);

  // explain -----------------------------------------------------------------
  auto* explain = app.add_subcommand(
      "explain",
      "Render line-level attribution for one function under a checkpoint");
  std::string ex_checkpoint, ex_vocab, ex_input;
  long long ex_class = -1;
  explain->add_option("--checkpoint", ex_checkpoint, "checkpoint.mcaf path")
      ->required();
  explain->add_option("--vocab", ex_vocab, "vocab.json path")->required();
  explain->add_option("input", ex_input, "A .c file (first function) or a "
                      ".json tree")
      ->required();
  auto* class_opt = explain->add_option(
      "--class", ex_class, "Class row to explain: 0 or 1 (default: the "
      "predicted class)");
  CommonFlags explain_flags;
  explain_flags.attach(explain);

  CLI11_PARSE(app, argc, argv);

  if (*extract) {
    Overrides o = extract_flags.overrides();
    if (*manifest_opt) o.add("manifest", manifest);
    if (*rejects_opt) o.add("rejects", rejects);
    std::vector<const char*> inputs;
    for (const std::string& s : extract_inputs) inputs.push_back(s.c_str());
    char* summary = nullptr;
    const mcaf_status st =
        mcaf_cmd_extract(inputs.data(), inputs.size(),
                         extract_flags.config_or_null(), o.c_str(), &summary);
    if (st == MCAF_OK) print_owned(summary);
    return report(st);
  }

  if (*gen) {
    const Overrides o = gen_flags.overrides();
    char* summary = nullptr;
    const mcaf_status st = mcaf_cmd_gen_synthetic(
        gen_n, gen_flags.config_or_null(), o.c_str(), &summary);
    if (st == MCAF_OK) print_owned(summary);
    return report(st);
  }

  if (*train) {
    const Overrides o = train_flags.overrides();
    char* summary = nullptr;
    const mcaf_status st = mcaf_cmd_train(
        train_corpus.c_str(), train_flags.config_or_null(), o.c_str(),
        &summary);
    if (st == MCAF_OK) print_owned(summary);
    return report(st);
  }

  if (*eval) {
    const Overrides o = eval_flags.overrides();
    char* json = nullptr;
    const mcaf_status st = mcaf_cmd_eval(
        eval_checkpoint.c_str(), eval_vocab.c_str(), eval_corpus.c_str(),
        eval_flags.config_or_null(), o.c_str(), &json);
    if (st == MCAF_OK) print_owned(json);
    return report(st);
  }

  if (*explain) {
    Overrides o = explain_flags.overrides();
    if (*class_opt) o.add_int("explain_class", ex_class);
    char* output = nullptr;
    const mcaf_status st = mcaf_cmd_explain(
        ex_checkpoint.c_str(), ex_vocab.c_str(), ex_input.c_str(),
        explain_flags.config_or_null(), o.c_str(), &output, nullptr);
    if (st == MCAF_OK) print_owned(output);
    return report(st);
  }

  return 0;
}
