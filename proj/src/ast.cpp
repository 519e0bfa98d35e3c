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

#include "mcaf/ast.hpp"

#include <algorithm>
#include <stdexcept>

#include "mcaf/error.hpp"

namespace mcaf {

namespace {

// nodes are sorted by id; binary search keeps Ast a plain value type.
const AstNode* find_node(const Ast& ast, int id) {
  auto it = std::lower_bound(
      ast.nodes.begin(), ast.nodes.end(), id,
      [](const AstNode& n, int key) { return n.id < key; });
  if (it == ast.nodes.end() || it->id != id) return nullptr;
  return &*it;
}

}  // namespace

const AstNode& Ast::node(int id) const {
  const AstNode* n = find_node(*this, id);
  if (!n) {
    throw Error(ErrorCode::InvalidArgument,
                "no AST node with id " + std::to_string(id));
  }
  return *n;
}

bool Ast::has_node(int id) const { return find_node(*this, id) != nullptr; }

std::vector<int> leaves(const Ast& ast) {
  std::vector<int> out;
  std::vector<int> stack{ast.root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const AstNode& n = ast.node(id);
    if (n.is_leaf()) {
      out.push_back(id);
    } else {
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        stack.push_back(*it);
      }
    }
  }
  return out;
}

std::unordered_map<int, int> parent_map(const Ast& ast) {
  std::unordered_map<int, int> parents;
  parents.reserve(ast.nodes.size());
  parents[ast.root] = -1;
  for (const AstNode& n : ast.nodes) {
    for (int c : n.children) parents[c] = n.id;
  }
  return parents;
}

void validate(const Ast& ast) {
  if (ast.nodes.empty()) {
    throw SchemaError("/nodes", "empty node list");
  }
  for (size_t i = 1; i < ast.nodes.size(); ++i) {
    if (ast.nodes[i - 1].id >= ast.nodes[i].id) {
      throw SchemaError("/nodes/" + std::to_string(i),
                        "node ids must be strictly increasing");
    }
  }
  if (!ast.has_node(ast.root)) {
    throw SchemaError("/root", "root id " + std::to_string(ast.root) +
                                   " does not name a node");
  }

  std::unordered_map<int, int> parent_count;
  for (size_t i = 0; i < ast.nodes.size(); ++i) {
    const AstNode& n = ast.nodes[i];
    const std::string where = "/nodes/" + std::to_string(i);
    if (n.token.has_value() != n.children.empty()) {
      throw SchemaError(where, n.token.has_value()
                                   ? "interior node carries a token"
                                   : "leaf node is missing its token");
    }
    if (n.line_start < 1 || n.line_end < n.line_start) {
      throw SchemaError(where, "invalid line span");
    }
    if (!ast.source_lines.empty() &&
        n.line_end > static_cast<int>(ast.source_lines.size())) {
      throw SchemaError(where, "line span exceeds the provided source");
    }
    for (size_t j = 0; j < n.children.size(); ++j) {
      int c = n.children[j];
      if (!ast.has_node(c)) {
        throw SchemaError(where + "/children/" + std::to_string(j),
                          "nonexistent child id " + std::to_string(c));
      }
      const AstNode& child = ast.node(c);
      if (child.line_start < n.line_start || child.line_end > n.line_end) {
        throw SchemaError(where + "/children/" + std::to_string(j),
                          "child line span escapes the parent span");
      }
      parent_count[c]++;
    }
  }
  for (auto& [id, count] : parent_count) {
    if (count > 1) {
      throw SchemaError("/nodes", "node " + std::to_string(id) +
                                      " has multiple parents");
    }
  }
  if (parent_count.count(ast.root)) {
    throw SchemaError("/root", "root appears as a child");
  }

  // Reachability walk; a stuck walk with unvisited nodes left means the
  // unreachable part either dangles or closes a parent cycle.
  size_t visited = 0;
  std::vector<int> stack{ast.root};
  std::unordered_map<int, bool> seen;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (seen[id]) {
      throw Error(ErrorCode::CycleError,
                  "node " + std::to_string(id) + " revisited; parent links form a cycle");
    }
    seen[id] = true;
    ++visited;
    const AstNode& n = ast.node(id);
    for (int c : n.children) stack.push_back(c);
  }
  if (visited != ast.nodes.size()) {
    // Every unreachable node having a parent forces a cycle in the
    // unreachable part; a dangling subtree has a parentless local root.
    bool all_have_parents = true;
    for (const AstNode& n : ast.nodes) {
      if (!seen.count(n.id) && !parent_count.count(n.id)) {
        all_have_parents = false;
        break;
      }
    }
    if (all_have_parents) {
      throw Error(ErrorCode::CycleError,
                  "parent links form a cycle off the root");
    }
    throw SchemaError("/nodes", "unreachable nodes present");
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

}  // namespace mcaf
