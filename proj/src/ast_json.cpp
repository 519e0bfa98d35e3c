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

#include "mcaf/ast_json.hpp"

#include <algorithm>

#include <json.hpp>

#include "mcaf/error.hpp"

namespace mcaf {
namespace {

using json = nlohmann::ordered_json;

const json& require(const json& obj, const char* key, const std::string& at) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(at, std::string("missing key \"") + key + "\"");
  }
  return *it;
}

int require_int(const json& obj, const char* key, const std::string& at) {
  const json& v = require(obj, key, at);
  if (!v.is_number_integer()) {
    throw SchemaError(at + "/" + key, "expected an integer");
  }
  return v.get<int>();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& at) {
  const json& v = require(obj, key, at);
  if (!v.is_string()) {
    throw SchemaError(at + "/" + key, "expected a string");
  }
  return v.get<std::string>();
}

}  // namespace

Ast load_ast_json(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError("", "top-level value must be an object");
  }

  Ast ast;
  ast.function_name = require_string(doc, "function_name", "");
  const json& source = require(doc, "source", "");
  if (!source.is_array()) {
    throw SchemaError("/source", "expected an array of line strings");
  }
  for (size_t i = 0; i < source.size(); ++i) {
    if (!source[i].is_string()) {
      throw SchemaError("/source/" + std::to_string(i), "expected a string");
    }
    ast.source_lines.push_back(source[i].get<std::string>());
  }
  ast.root = require_int(doc, "root", "");

  const json& nodes = require(doc, "nodes", "");
  if (!nodes.is_array() || nodes.empty()) {
    throw SchemaError("/nodes", "expected a nonempty array");
  }
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = "/nodes/" + std::to_string(i);
    const json& jn = nodes[i];
    if (!jn.is_object()) {
      throw SchemaError(at, "expected an object");
    }
    AstNode n;
    n.id = require_int(jn, "id", at);
    n.kind = require_string(jn, "kind", at);
    if (auto it = jn.find("token"); it != jn.end()) {
      if (!it->is_string()) {
        throw SchemaError(at + "/token", "expected a string");
      }
      n.token = it->get<std::string>();
    }
    n.line_start = require_int(jn, "line_start", at);
    n.line_end = require_int(jn, "line_end", at);
    const json& children = require(jn, "children", at);
    if (!children.is_array()) {
      throw SchemaError(at + "/children", "expected an array of node ids");
    }
    for (size_t j = 0; j < children.size(); ++j) {
      if (!children[j].is_number_integer()) {
        throw SchemaError(at + "/children/" + std::to_string(j),
                          "expected an integer node id");
      }
      n.children.push_back(children[j].get<int>());
    }
    ast.nodes.push_back(std::move(n));
  }

  std::sort(ast.nodes.begin(), ast.nodes.end(),
            [](const AstNode& a, const AstNode& b) { return a.id < b.id; });
  validate(ast);
  return ast;
}

std::string dump_ast_json(const Ast& ast) {
  json doc;
  doc["function_name"] = ast.function_name;
  doc["source"] = ast.source_lines;
  doc["root"] = ast.root;
  json nodes = json::array();
  for (const AstNode& n : ast.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["kind"] = n.kind;
    if (n.token) jn["token"] = *n.token;
    jn["line_start"] = n.line_start;
    jn["line_end"] = n.line_end;
    jn["children"] = n.children;
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

}  // namespace mcaf
