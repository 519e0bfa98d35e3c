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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcaf/ast.hpp"
#include "mcaf/ast_json.hpp"
#include "mcaf/error.hpp"
#include "mcaf/parser.hpp"

using namespace mcaf;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  std::string text = read_file(std::string(MCAF_TEST_DATA_DIR) + "/" + name);
  // Golden files end with a newline; canonical dumps do not.
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.pop_back();
  }
  return text;
}

std::vector<std::string> leaf_tokens(const Ast& ast) {
  std::vector<std::string> out;
  for (int id : leaves(ast)) out.push_back(*ast.node(id).token);
  return out;
}

}  // namespace

TEST_CASE("scanf snippet produces the documented tree shape") {
  Ast ast = parse_source("void f() { scanf(\"%d\", &a); }");
  CHECK(ast.function_name == "f");

  // Leaf (Name, scanf) sits under Call under Block under METHOD.
  auto parents = parent_map(ast);
  int scanf_id = -1;
  for (const AstNode& n : ast.nodes) {
    if (n.token && *n.token == "scanf") scanf_id = n.id;
  }
  REQUIRE(scanf_id >= 0);
  CHECK(ast.node(scanf_id).kind == kind::Name);
  int call = parents.at(scanf_id);
  CHECK(ast.node(call).kind == kind::Call);
  int block = parents.at(call);
  CHECK(ast.node(block).kind == kind::Block);
  int method = parents.at(block);
  CHECK(ast.node(method).kind == kind::Method);
  CHECK(method == ast.root);

  // Leaf (TypeFullName, void) sits under MethodReturn.
  int void_id = -1;
  for (const AstNode& n : ast.nodes) {
    if (n.token && *n.token == "void") void_id = n.id;
  }
  REQUIRE(void_id >= 0);
  CHECK(ast.node(void_id).kind == kind::TypeFullName);
  CHECK(ast.node(parents.at(void_id)).kind == kind::MethodReturn);

  // First leaf is the scanf site; the void leaf is present.
  std::vector<int> ls = leaves(ast);
  CHECK(*ast.node(ls.front()).token == "scanf");
  CHECK(leaf_tokens(ast) ==
        std::vector<std::string>{"scanf", "\"%d\"", "a", "void"});

  CHECK(dump_ast_json(ast) == golden("golden_scanf.json"));
}

TEST_CASE("hand-encoded scanf tree equals the parsed tree") {
  Ast parsed = parse_source("void f() { scanf(\"%d\", &a); }");
  Ast loaded = load_ast_json(golden("golden_scanf.json"));
  CHECK(dump_ast_json(parsed) == dump_ast_json(loaded));
}

TEST_CASE("return-one function matches its hand-derived golden tree") {
  Ast ast = parse_source("int g() { return 1; }");
  CHECK(ast.function_name == "g");
  CHECK(leaves(ast).size() == 2);
  CHECK(leaf_tokens(ast) == std::vector<std::string>{"1", "int"});
  CHECK(dump_ast_json(ast) == golden("golden_return_one.json"));
}

TEST_CASE("empty input raises EmptyInput") {
  for (const char* text : {"", "   \n\t  ", "// just a comment\n"}) {
    try {
      parse_source(text);
      FAIL("expected EmptyInput for: ", text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyInput);
    }
  }
}

TEST_CASE("line numbers are 1-based and track constructs") {
  std::string text =
      "int main() {\n"
      "  int a = 0;\n"
      "  scanf(\"%d\", &a);\n"
      "  return 0;\n"
      "}\n";
  Ast ast = parse_source(text);
  CHECK(ast.source_lines.size() == 5);
  CHECK(ast.node(ast.root).line_start == 1);
  CHECK(ast.node(ast.root).line_end == 5);

  for (const AstNode& n : ast.nodes) {
    if (n.kind == kind::Decl) {
      CHECK(n.line_start == 2);
      CHECK(n.line_end == 2);
    }
    if (n.kind == kind::Call) {
      CHECK(n.line_start == 3);
      CHECK(n.line_end == 3);
    }
    if (n.kind == kind::Return) {
      CHECK(n.line_start == 4);
    }
    if (n.kind == kind::Block) {
      CHECK(n.line_start == 1);
      CHECK(n.line_end == 5);
    }
  }
}

TEST_CASE("leaves follow token order in the source, return type pinned last") {
  std::string text =
      "int sum(int lo, int hi) {\n"
      "  int acc = 0;\n"
      "  for (int i = lo; i <= hi; i = i + 1) {\n"
      "    acc = acc + i;\n"
      "  }\n"
      "  return acc;\n"
      "}\n";
  Ast ast = parse_source(text);
  std::vector<std::string> toks = leaf_tokens(ast);
  REQUIRE(!toks.empty());
  // The return-type leaf rides last by construction.
  CHECK(toks.back() == "int");
  CHECK(toks.front() == "int");  // first parameter type
  // All other leaves appear in nondecreasing line order.
  std::vector<int> ls = leaves(ast);
  for (size_t i = 0; i + 2 < ls.size(); ++i) {
    CHECK(ast.node(ls[i]).line_start <= ast.node(ls[i + 1]).line_start);
  }
}

TEST_CASE("parse round trip through json is structurally identical") {
  std::string text =
      "void check(int n) {\n"
      "  if (n > 0) {\n"
      "    printf(\"%d\", n);\n"
      "  } else {\n"
      "    abort();\n"
      "  }\n"
      "  while (n < 10) {\n"
      "    n = n + 2;\n"
      "  }\n"
      "}\n";
  Ast ast = parse_source(text);
  std::string once = dump_ast_json(ast);
  CHECK(dump_ast_json(load_ast_json(once)) == once);
}

TEST_CASE("unsupported constructs are reported as such") {
  struct Case {
    const char* text;
    const char* hint;
  };
  const Case cases[] = {
      {"struct S { int x; };", "struct"},
      {"void f(int* p) {}", "pointer"},
      {"void f() { int x[3]; }", "array"},
      {"void f() { i++; }", "++"},
      {"void f() { x += 1; }", "compound"},
      {"void f() { int a, b; }", "multiple"},
      {"void f() { x = a & b; }", "bitwise"},
      {"void f() { x = a ? 1 : 0; }", "conditional"},
      {"#include <stdio.h>\nvoid f() {}", "preprocessor"},
      {"static void f() {}", "static"},
      {"void f() { switch (x) {} }", "switch"},
      {"void f() { goto end; }", "goto"},
  };
  for (const Case& c : cases) {
    try {
      parse_source(c.text);
      FAIL("expected UnsupportedConstruct for: ", c.text);
    } catch (const UnsupportedConstruct& e) {
      CHECK(std::string(e.what()).find(c.hint) != std::string::npos);
    }
  }
}

TEST_CASE("syntax errors carry the offending line") {
  try {
    parse_source("void f() {\n  3 = x;\n}");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_source("void f() {"), SyntaxError);
  CHECK_THROWS_AS(parse_source("void f() { @ }"), SyntaxError);
  CHECK_THROWS_AS(parse_source("void f() { x = ; }"), SyntaxError);
}

TEST_CASE("parse_functions returns every function in order") {
  std::string text =
      "int one() { return 1; }\n"
      "int two() { return 2; }\n";
  std::vector<Ast> fns = parse_functions(text);
  REQUIRE(fns.size() == 2);
  CHECK(fns[0].function_name == "one");
  CHECK(fns[1].function_name == "two");
  CHECK(fns[0].node(fns[0].root).line_start == 1);
  CHECK(fns[1].node(fns[1].root).line_start == 2);
}

TEST_CASE("grammar coverage: operators, literals, nesting") {
  std::string text =
      "int classify(unsigned int flags) {\n"
      "  char tag = 'x';\n"
      "  int score = -3 + 4 * 2 - 6 / 3 % 2;\n"
      "  if (flags >= 2 && flags <= 8 || !(score == 0)) {\n"
      "    score = (score + 1) * 2;\n"
      "  }\n"
      "  return score != 0;\n"
      "}\n";
  Ast ast = parse_source(text);
  validate(ast);
  int binops = 0;
  int unops = 0;
  for (const AstNode& n : ast.nodes) {
    if (n.kind == kind::BinaryOp) ++binops;
    if (n.kind == kind::UnaryOp) ++unops;
  }
  CHECK(binops >= 10);
  CHECK(unops >= 2);
  // 'x' literal survives verbatim.
  bool saw_char = false;
  for (const AstNode& n : ast.nodes) {
    if (n.token && *n.token == "'x'") saw_char = true;
  }
  CHECK(saw_char);
}

TEST_CASE("empty body parses as a block leaf") {
  Ast ast = parse_source("void noop() {}\n");
  validate(ast);
  bool saw = false;
  for (const AstNode& n : ast.nodes) {
    if (n.kind == kind::Block) {
      CHECK(n.is_leaf());
      CHECK(*n.token == "{}");
      saw = true;
    }
  }
  CHECK(saw);
}

TEST_CASE("bare return becomes a leaf with the keyword token") {
  Ast ast = parse_source("void quit(int code) { exit(code); return; }");
  validate(ast);
  bool saw = false;
  for (const AstNode& n : ast.nodes) {
    if (n.kind == kind::Return) {
      CHECK(n.is_leaf());
      CHECK(*n.token == "return");
      saw = true;
    }
  }
  CHECK(saw);
}
