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

#include <stdexcept>
#include <string>

namespace mcaf {

// Stable error codes; mirrored one-to-one by the C API status enum.
enum class ErrorCode {
  Ok = 0,
  SyntaxError,
  UnsupportedConstruct,
  EmptyInput,
  SchemaError,
  CycleError,
  DegenerateAst,
  EmptyCorpus,
  IndexOutOfVocab,
  AllMasked,
  AlignmentError,
  SingleClassDataset,
  NoPositiveLabels,
  VocabMismatch,
  ConfigError,
  IoError,
  InvalidArgument,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure at a known source line.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, const std::string& message)
      : Error(ErrorCode::SyntaxError,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Legal C that falls outside the supported subset.
class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(int line, const std::string& construct)
      : Error(ErrorCode::UnsupportedConstruct,
              "line " + std::to_string(line) +
                  ": unsupported construct: " + construct),
        line_(line),
        construct_(construct) {}
  int line() const { return line_; }
  const std::string& construct() const { return construct_; }

 private:
  int line_;
  std::string construct_;
};

// AST JSON document that violates the interchange schema.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(ErrorCode::SchemaError,
              path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline Error make_error(ErrorCode code, std::string message) {
  return Error(code, std::move(message));
}

}  // namespace mcaf
