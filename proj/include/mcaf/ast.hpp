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

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mcaf {

// Node kinds emitted by the built-in parser. load_ast_json accepts arbitrary
// kind strings so externally produced trees (with richer vocabularies) keep
// working; everything downstream treats kinds as opaque labels.
namespace kind {
inline constexpr const char* Method = "METHOD";
inline constexpr const char* MethodReturn = "MethodReturn";
inline constexpr const char* TypeFullName = "TypeFullName";
inline constexpr const char* Parameter = "Parameter";
inline constexpr const char* Block = "Block";
inline constexpr const char* Decl = "Decl";
inline constexpr const char* Assign = "Assign";
inline constexpr const char* Call = "Call";
inline constexpr const char* Name = "Name";
inline constexpr const char* Literal = "Literal";
inline constexpr const char* If = "If";
inline constexpr const char* Else = "Else";
inline constexpr const char* While = "While";
inline constexpr const char* For = "For";
inline constexpr const char* Return = "Return";
inline constexpr const char* BinaryOp = "BinaryOp";
inline constexpr const char* UnaryOp = "UnaryOp";
inline constexpr const char* ArgList = "ArgList";
}  // namespace kind

struct AstNode {
  int id = -1;
  std::string kind;
  // Present iff the node is a leaf; interior nodes never carry tokens.
  std::optional<std::string> token;
  int line_start = 1;
  int line_end = 1;
  std::vector<int> children;  // left-to-right source order

  bool is_leaf() const { return children.empty(); }
};

struct Ast {
  int root = -1;
  std::vector<AstNode> nodes;  // kept sorted by id
  std::string function_name;
  std::vector<std::string> source_lines;

  const AstNode& node(int id) const;
  bool has_node(int id) const;
  size_t size() const { return nodes.size(); }
};

// Leaf node ids in left-to-right source order (preorder over children).
std::vector<int> leaves(const Ast& ast);

// parent id per node id; root maps to -1.
std::unordered_map<int, int> parent_map(const Ast& ast);

// Enforces the structural invariants shared by parse_source and
// load_ast_json output: sorted unique ids, existing root, tree shape (single
// parent, no cycles, all reachable), token iff leaf, line sanity.
// Throws SchemaError / CycleError (as mcaf::Error) on violation.
void validate(const Ast& ast);

// Splits text into lines on '\n' (the final line needs no terminator).
std::vector<std::string> split_lines(const std::string& text);

}  // namespace mcaf
