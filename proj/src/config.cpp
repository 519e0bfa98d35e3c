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

#include "mcaf/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "mcaf/error.hpp"

namespace mcaf {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& message) {
  throw make_error(ErrorCode::ConfigError,
                   origin + ":" + std::to_string(line) + ": " + message);
}

long long parse_int(const std::string& origin, int line,
                    const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "'" + key + "' expects an integer, got '" + value + "'");
  }
}

uint64_t parse_u64(const std::string& origin, int line, const std::string& key,
                   const std::string& value) {
  try {
    size_t used = 0;
    const uint64_t v = std::stoull(value, &used);
    if (used != value.size() || value[0] == '-') {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    fail(origin, line,
         "'" + key + "' expects a non-negative integer, got '" + value + "'");
  }
}

double parse_real(const std::string& origin, int line, const std::string& key,
                  const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "'" + key + "' expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(origin, line,
       "'" + key + "' expects 'true' or 'false', got '" + value + "'");
}

void apply_one(CliConfig& cfg, const std::string& origin, int line,
               const std::string& key, const std::string& value) {
  auto as_int = [&] { return parse_int(origin, line, key, value); };
  auto as_real = [&] { return parse_real(origin, line, key, value); };

  if (key == "seed") {
    const uint64_t s = parse_u64(origin, line, key, value);
    cfg.model.seed = s;
    cfg.train.seed = s;
  } else if (key == "d_embed") {
    cfg.model.d_embed = static_cast<int>(as_int());
  } else if (key == "n_heads") {
    cfg.model.n_heads = static_cast<int>(as_int());
  } else if (key == "conv_kernel_size") {
    cfg.model.conv_kernel_size = static_cast<int>(as_int());
  } else if (key == "dropout_rate") {
    cfg.model.dropout_rate = as_real();
  } else if (key == "max_contexts") {
    cfg.model.max_contexts = static_cast<int>(as_int());
  } else if (key == "attention_scaling") {
    cfg.model.attention_scaling = parse_bool(origin, line, key, value);
  } else if (key == "epochs") {
    cfg.train.epochs = static_cast<int>(as_int());
  } else if (key == "batch_size") {
    cfg.train.batch_size = static_cast<int>(as_int());
  } else if (key == "learning_rate") {
    cfg.train.learning_rate = as_real();
  } else if (key == "val_fraction") {
    cfg.train.val_fraction = as_real();
  } else if (key == "early_stop_patience") {
    cfg.train.early_stop_patience = static_cast<int>(as_int());
  } else if (key == "max_path_length") {
    cfg.max_path_length = static_cast<int>(as_int());
  } else if (key == "max_path_width") {
    cfg.max_path_width = static_cast<int>(as_int());
  } else if (key == "max_node_vocab") {
    cfg.max_node_vocab = static_cast<int>(as_int());
  } else if (key == "max_path_vocab") {
    cfg.max_path_vocab = static_cast<int>(as_int());
  } else if (key == "threshold") {
    cfg.threshold = as_real();
  } else if (key == "format") {
    cfg.format = value;
  } else if (key == "explain_class") {
    cfg.explain_class = static_cast<int>(as_int());
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "manifest") {
    cfg.manifest = value;
  } else if (key == "rejects") {
    cfg.rejects = value;
  } else if (key == "vocab") {
    cfg.vocab = value;
  } else {
    fail(origin, line, "unknown key '" + key + "'");
  }
}

}  // namespace

void CliConfig::check() const {
  try {
    model.check();
    train.check();
  } catch (const Error& e) {
    throw make_error(ErrorCode::ConfigError, e.what());
  }
  if (max_path_length < 0) {
    throw make_error(ErrorCode::ConfigError,
                     "'max_path_length' must be >= 0 (0 disables the limit)");
  }
  if (max_path_width < 0) {
    throw make_error(ErrorCode::ConfigError,
                     "'max_path_width' must be >= 0 (0 disables the limit)");
  }
  if (max_node_vocab < 0 || max_path_vocab < 0) {
    throw make_error(ErrorCode::ConfigError,
                     "vocabulary caps must be >= 0 (0 disables the cap)");
  }
  if (threshold != 0.0 && !(threshold > 0.0 && threshold < 1.0)) {
    throw make_error(
        ErrorCode::ConfigError,
        "'threshold' must lie in (0, 1), or 0 to use the stored one");
  }
  if (format != "html" && format != "ansi") {
    throw make_error(ErrorCode::ConfigError,
                     "'format' must be 'html' or 'ansi', got '" + format + "'");
  }
  if (explain_class < -1 || explain_class > 1) {
    throw make_error(ErrorCode::ConfigError,
                     "'explain_class' must be 0, 1, or -1 for automatic");
  }
}

void apply_config_text(CliConfig& cfg, const std::string& text,
                       const std::string& origin) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(origin, line_no, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "missing key before '='");
    if (value.empty()) fail(origin, line_no, "missing value for '" + key + "'");
    apply_one(cfg, origin, line_no, key, value);
  }
}

void apply_config_file(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw make_error(ErrorCode::IoError, "cannot read config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(cfg, text.str(), path);
}

CliConfig load_cli_config(const std::string& config_path,
                          const std::string& overrides) {
  CliConfig cfg;
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  if (!overrides.empty()) apply_config_text(cfg, overrides, "<flags>");
  cfg.check();
  return cfg;
}

}  // namespace mcaf
