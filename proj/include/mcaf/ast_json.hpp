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

#include "mcaf/ast.hpp"

namespace mcaf {

// AST interchange document (UTF-8 JSON, one function per document):
//   { "function_name": str, "source": [str, ...], "root": int,
//     "nodes": [ { "id": int, "kind": str, "token": str?,
//                  "line_start": int, "line_end": int,
//                  "children": [int, ...] }, ... ] }
//
// Kind strings are open: externally produced trees may use vocabularies
// richer than the built-in parser's.

// Throws SchemaError with a JSON-pointer-style path on malformed input,
// CycleError (as mcaf::Error) when parent links form a cycle.
Ast load_ast_json(const std::string& bytes);

// Canonical form: nodes sorted by id, keys in schema order, compact
// (no insignificant whitespace). load(dump(ast)) is byte-stable.
std::string dump_ast_json(const Ast& ast);

}  // namespace mcaf
