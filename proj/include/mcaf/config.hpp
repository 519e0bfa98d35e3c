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

#include <string>

#include "mcaf/model.hpp"
#include "mcaf/trainer.hpp"

namespace mcaf {

// Everything the command-line pipeline needs, settable through a flat
// key = value config file and overridable by flags. One `seed` key drives
// both model initialization and the training streams.
struct CliConfig {
  ModelConfig model;
  TrainConfig train;

  // Feature-extraction limits (0 disables a limit or cap).
  int max_path_length = 8;
  int max_path_width = 2;
  int max_node_vocab = 10000;
  int max_path_vocab = 50000;

  // Decision threshold for eval/explain; 0 means "use the checkpoint's".
  double threshold = 0.0;

  std::string format = "ansi";  // rendering style: "html" or "ansi"
  int explain_class = -1;       // -1: explain the predicted class

  // Per-command paths. `out` is the command's main output: the corpus file
  // for extract, a directory for gen-synthetic and train, optional report
  // and rendering destinations for eval and explain.
  std::string out;
  std::string manifest;  // extract: file of "path label" pairs
  std::string rejects;   // extract: rejects log (default: <out>.rejects)
  std::string vocab;     // eval/explain: vocabulary JSON from training

  void check() const;  // ConfigError naming the offending field
};

// Applies `key = value` lines to cfg. Lines that are empty or start with
// '#' are skipped. Unknown keys and unparseable values raise ConfigError
// citing origin and line number. The grammar is flat: no sections, no
// quoting; values run to the end of the line.
void apply_config_text(CliConfig& cfg, const std::string& text,
                       const std::string& origin);

// File form of apply_config_text; IoError when unreadable.
void apply_config_file(CliConfig& cfg, const std::string& path);

// Defaults, then the optional file, then override lines, then check().
CliConfig load_cli_config(const std::string& config_path,
                          const std::string& overrides);

}  // namespace mcaf
