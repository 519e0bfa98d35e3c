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

#include "mcaf/error.hpp"

namespace mcaf {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::CycleError: return "CycleError";
    case ErrorCode::DegenerateAst: return "DegenerateAst";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::IndexOutOfVocab: return "IndexOutOfVocab";
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::AlignmentError: return "AlignmentError";
    case ErrorCode::SingleClassDataset: return "SingleClassDataset";
    case ErrorCode::NoPositiveLabels: return "NoPositiveLabels";
    case ErrorCode::VocabMismatch: return "VocabMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace mcaf
