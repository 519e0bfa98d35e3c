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

#include "mcaf/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "mcaf/error.hpp"

namespace mcaf {
namespace {

enum class Tok { Ident, Keyword, IntLit, StrLit, CharLit, Punct, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  int line = 1;
};

const std::unordered_set<std::string> kTypeKeywords = {
    "void", "char", "short", "int", "long", "float",
    "double", "unsigned", "signed", "size_t",
};

const std::unordered_set<std::string> kControlKeywords = {
    "if", "else", "while", "for", "return",
};

// Legal C we deliberately refuse; reported as UnsupportedConstruct so
// callers can tell subset gaps from plain syntax errors.
const std::unordered_set<std::string> kUnsupportedKeywords = {
    "struct",   "union",  "enum",     "typedef", "switch",  "case",
    "default",  "do",     "goto",     "break",   "continue", "sizeof",
    "static",   "extern", "register", "volatile", "const",   "inline",
    "auto",     "restrict",
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) break;
      out.push_back(next_token());
    }
    out.push_back({Tok::Eof, "", line_});
    return out;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '*') {
        pos_ += 2;
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          if (text_[pos_] == '\n') ++line_;
          ++pos_;
        }
        if (pos_ + 1 >= text_.size()) {
          throw SyntaxError(line_, "unterminated block comment");
        }
        pos_ += 2;
      } else {
        break;
      }
    }
  }

  Token next_token() {
    char c = text_[pos_];
    int line = line_;
    if (c == '#') {
      throw UnsupportedConstruct(line, "preprocessor directive");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      std::string word = text_.substr(start, pos_ - start);
      bool kw = kTypeKeywords.count(word) || kControlKeywords.count(word) ||
                kUnsupportedKeywords.count(word);
      return {kw ? Tok::Keyword : Tok::Ident, std::move(word), line};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      if (c == '0' && pos_ + 1 < text_.size() &&
          (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
        pos_ += 2;
        while (pos_ < text_.size() &&
               std::isxdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      } else {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      }
      while (pos_ < text_.size() &&
             (text_[pos_] == 'u' || text_[pos_] == 'U' || text_[pos_] == 'l' ||
              text_[pos_] == 'L')) {
        ++pos_;
      }
      return {Tok::IntLit, text_.substr(start, pos_ - start), line};
    }
    if (c == '"' || c == '\'') {
      return quoted(c, line);
    }
    return punct(line);
  }

  Token quoted(char delim, int line) {
    size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != delim) {
      if (text_[pos_] == '\n') {
        throw SyntaxError(line, "unterminated literal");
      }
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      ++pos_;
    }
    if (pos_ >= text_.size()) {
      throw SyntaxError(line, "unterminated literal");
    }
    ++pos_;
    return {delim == '"' ? Tok::StrLit : Tok::CharLit,
            text_.substr(start, pos_ - start), line};
  }

  Token punct(int line) {
    static const std::array<const char*, 12> two = {
        "==", "!=", "<=", ">=", "&&", "||",
        "++", "--", "+=", "-=", "*=", "/=",
    };
    for (const char* p : two) {
      if (text_.compare(pos_, 2, p) == 0) {
        pos_ += 2;
        return {Tok::Punct, p, line};
      }
    }
    char c = text_[pos_];
    static const std::string singles = "(){};,=!<>+-*/%&|?:[].~^";
    if (singles.find(c) == std::string::npos) {
      throw SyntaxError(line, std::string("unexpected character '") + c + "'");
    }
    ++pos_;
    return {Tok::Punct, std::string(1, c), line};
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<std::string> source_lines)
      : toks_(std::move(tokens)), source_lines_(std::move(source_lines)) {}

  std::vector<Ast> functions() {
    std::vector<Ast> out;
    while (peek().kind != Tok::Eof) {
      out.push_back(function());
    }
    if (out.empty()) {
      throw Error(ErrorCode::EmptyInput, "no function definition found");
    }
    return out;
  }

 private:
  // --- token stream -------------------------------------------------------

  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(idx_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& advance() { return toks_[std::min(idx_++, toks_.size() - 1)]; }

  bool at_punct(const std::string& p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }

  bool at_keyword(const std::string& k) const {
    return peek().kind == Tok::Keyword && peek().text == k;
  }

  const Token& expect_punct(const std::string& p, const std::string& what) {
    if (!at_punct(p)) {
      throw SyntaxError(peek().line, "expected '" + p + "' " + what +
                                         ", got '" + describe(peek()) + "'");
    }
    return advance();
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::Eof ? "end of input" : t.text;
  }

  void reject_unsupported_keyword() const {
    if (peek().kind == Tok::Keyword && kUnsupportedKeywords.count(peek().text)) {
      throw UnsupportedConstruct(peek().line, "'" + peek().text + "'");
    }
  }

  // --- node construction ---------------------------------------------------

  int make_node(const std::string& node_kind, int line) {
    AstNode n;
    n.id = static_cast<int>(nodes_.size());
    n.kind = node_kind;
    n.line_start = line;
    n.line_end = line;
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
  }

  int make_leaf(const std::string& node_kind, std::string token, int line) {
    int id = make_node(node_kind, line);
    nodes_[id].token = std::move(token);
    return id;
  }

  void attach(int parent, int child) {
    nodes_[parent].children.push_back(child);
    nodes_[parent].line_start =
        std::min(nodes_[parent].line_start, nodes_[child].line_start);
    nodes_[parent].line_end =
        std::max(nodes_[parent].line_end, nodes_[child].line_end);
  }

  void extend_span(int id, int line) {
    nodes_[id].line_start = std::min(nodes_[id].line_start, line);
    nodes_[id].line_end = std::max(nodes_[id].line_end, line);
  }

  // --- grammar -------------------------------------------------------------

  std::string type_name() {
    reject_unsupported_keyword();
    if (peek().kind != Tok::Keyword || !kTypeKeywords.count(peek().text)) {
      throw SyntaxError(peek().line,
                        "expected a type name, got '" + describe(peek()) + "'");
    }
    std::string name = advance().text;
    // Multi-word spellings such as `unsigned int` or `long long`.
    while (peek().kind == Tok::Keyword && kTypeKeywords.count(peek().text)) {
      name += " " + advance().text;
    }
    if (at_punct("*")) {
      throw UnsupportedConstruct(peek().line, "pointer declarator");
    }
    return name;
  }

  Ast function() {
    reject_unsupported_keyword();
    int first_line = peek().line;
    std::string ret_type = type_name();
    int type_line = toks_[idx_ - 1].line;
    if (peek().kind != Tok::Ident) {
      throw SyntaxError(peek().line, "expected a function name, got '" +
                                         describe(peek()) + "'");
    }
    std::string fn_name = advance().text;
    expect_punct("(", "after the function name");

    int method = make_node(kind::Method, first_line);
    std::vector<int> params;
    if (!at_punct(")")) {
      if (at_keyword("void") && peek(1).kind == Tok::Punct &&
          peek(1).text == ")") {
        advance();
      } else {
        params.push_back(parameter());
        while (at_punct(",")) {
          advance();
          params.push_back(parameter());
        }
      }
    }
    expect_punct(")", "after the parameter list");
    for (int p : params) attach(method, p);

    int body = block();
    attach(method, body);

    // The return type rides last so it is the rightmost leaf.
    int mret = make_node(kind::MethodReturn, type_line);
    attach(mret, make_leaf(kind::TypeFullName, ret_type, type_line));
    attach(method, mret);

    Ast ast;
    ast.function_name = fn_name;
    ast.root = method;
    ast.nodes = std::move(nodes_);
    nodes_.clear();
    renumber_preorder(ast);
    ast.source_lines = source_lines_;
    return ast;
  }

  int parameter() {
    int line = peek().line;
    std::string t = type_name();
    if (peek().kind != Tok::Ident) {
      throw SyntaxError(peek().line, "expected a parameter name, got '" +
                                         describe(peek()) + "'");
    }
    std::string pname = advance().text;
    if (at_punct("[")) {
      throw UnsupportedConstruct(peek().line, "array parameter");
    }
    int node = make_node(kind::Parameter, line);
    attach(node, make_leaf(kind::TypeFullName, t, line));
    attach(node, make_leaf(kind::Name, pname, toks_[idx_ - 1].line));
    return node;
  }

  int block() {
    const Token& open = expect_punct("{", "to open a block");
    if (at_punct("}")) {
      // Leaf nodes must carry a token; an empty body gets its braces.
      const Token& close = advance();
      int id = make_leaf(kind::Block, "{}", open.line);
      extend_span(id, close.line);
      return id;
    }
    int id = make_node(kind::Block, open.line);
    while (!at_punct("}")) {
      if (peek().kind == Tok::Eof) {
        throw SyntaxError(peek().line, "unexpected end of input inside a block");
      }
      attach(id, statement());
    }
    extend_span(id, advance().line);
    return id;
  }

  int statement() {
    reject_unsupported_keyword();
    if (at_punct("{")) return block();
    if (at_keyword("if")) return if_statement();
    if (at_keyword("while")) return while_statement();
    if (at_keyword("for")) return for_statement();
    if (at_keyword("return")) return return_statement();
    if (peek().kind == Tok::Keyword && kTypeKeywords.count(peek().text)) {
      int id = declaration();
      expect_punct(";", "after the declaration");
      extend_span(id, toks_[idx_ - 1].line);
      return id;
    }
    if (peek().kind == Tok::Ident) {
      int id = assignment_or_call();
      expect_punct(";", "after the statement");
      extend_span(id, toks_[idx_ - 1].line);
      return id;
    }
    throw SyntaxError(peek().line,
                      "expected a statement, got '" + describe(peek()) + "'");
  }

  int if_statement() {
    int line = advance().line;
    expect_punct("(", "after 'if'");
    int id = make_node(kind::If, line);
    attach(id, expression());
    expect_punct(")", "after the condition");
    attach(id, statement());
    if (at_keyword("else")) {
      int else_line = advance().line;
      int else_node = make_node(kind::Else, else_line);
      attach(else_node, statement());
      attach(id, else_node);
    }
    return id;
  }

  int while_statement() {
    int line = advance().line;
    expect_punct("(", "after 'while'");
    int id = make_node(kind::While, line);
    attach(id, expression());
    expect_punct(")", "after the condition");
    attach(id, statement());
    return id;
  }

  int for_statement() {
    int line = advance().line;
    expect_punct("(", "after 'for'");
    int id = make_node(kind::For, line);
    if (!at_punct(";")) {
      if (peek().kind == Tok::Keyword && kTypeKeywords.count(peek().text)) {
        attach(id, declaration());
      } else {
        attach(id, assignment_or_call());
      }
    }
    expect_punct(";", "after the loop initializer");
    if (!at_punct(";")) attach(id, expression());
    expect_punct(";", "after the loop condition");
    if (!at_punct(")")) attach(id, assignment_or_call());
    expect_punct(")", "after the loop header");
    attach(id, statement());
    return id;
  }

  int return_statement() {
    int line = advance().line;
    if (at_punct(";")) {
      advance();
      // Bare return is a leaf; the keyword itself is the token.
      return make_leaf(kind::Return, "return", line);
    }
    int id = make_node(kind::Return, line);
    attach(id, expression());
    expect_punct(";", "after the return value");
    extend_span(id, toks_[idx_ - 1].line);
    return id;
  }

  int declaration() {
    int line = peek().line;
    std::string t = type_name();
    int type_line = toks_[idx_ - 1].line;
    if (peek().kind != Tok::Ident) {
      throw SyntaxError(peek().line, "expected a variable name, got '" +
                                         describe(peek()) + "'");
    }
    const Token& name_tok = advance();
    if (at_punct("[")) {
      throw UnsupportedConstruct(peek().line, "array declarator");
    }
    int id = make_node(kind::Decl, line);
    attach(id, make_leaf(kind::TypeFullName, t, type_line));
    attach(id, make_leaf(kind::Name, name_tok.text, name_tok.line));
    if (at_punct("=")) {
      advance();
      attach(id, expression());
    }
    if (at_punct(",")) {
      throw UnsupportedConstruct(peek().line, "multiple declarators");
    }
    return id;
  }

  int assignment_or_call() {
    const Token& name_tok = peek();
    if (name_tok.kind != Tok::Ident) {
      throw SyntaxError(name_tok.line, "expected an identifier, got '" +
                                           describe(name_tok) + "'");
    }
    if (peek(1).kind == Tok::Punct &&
        (peek(1).text == "++" || peek(1).text == "--")) {
      throw UnsupportedConstruct(peek(1).line, "'" + peek(1).text + "'");
    }
    if (peek(1).kind == Tok::Punct &&
        (peek(1).text == "+=" || peek(1).text == "-=" ||
         peek(1).text == "*=" || peek(1).text == "/=")) {
      throw UnsupportedConstruct(peek(1).line,
                                 "compound assignment '" + peek(1).text + "'");
    }
    if (peek(1).kind == Tok::Punct && peek(1).text == "=") {
      advance();
      int id = make_node(kind::Assign, name_tok.line);
      attach(id, make_leaf(kind::Name, name_tok.text, name_tok.line));
      advance();
      attach(id, expression());
      return id;
    }
    if (peek(1).kind == Tok::Punct && peek(1).text == "(") {
      return call();
    }
    throw SyntaxError(peek(1).line,
                      "expected '=' or '(' after '" + name_tok.text + "'");
  }

  int call() {
    const Token& name_tok = advance();
    int id = make_node(kind::Call, name_tok.line);
    attach(id, make_leaf(kind::Name, name_tok.text, name_tok.line));
    expect_punct("(", "to open the argument list");
    if (!at_punct(")")) {
      int args = make_node(kind::ArgList, peek().line);
      attach(args, expression());
      while (at_punct(",")) {
        advance();
        attach(args, expression());
      }
      attach(id, args);
    }
    extend_span(id, expect_punct(")", "to close the argument list").line);
    return id;
  }

  // Precedence-climbing over the supported binary operators. Operator
  // spellings are not kept in the tree; kinds alone feed the paths.
  int expression() { return binary(0); }

  static int binary_level(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
  }

  int binary(int min_level) {
    int lhs = unary();
    while (peek().kind == Tok::Punct) {
      const std::string& op = peek().text;
      if (op == "|" || op == "^" ||
          (op == "&" && binary_level(op) == 0)) {
        throw UnsupportedConstruct(peek().line, "bitwise operator '" + op + "'");
      }
      if (op == "?") {
        throw UnsupportedConstruct(peek().line, "conditional operator");
      }
      int level = binary_level(op);
      if (level == 0 || level < min_level) break;
      int op_line = advance().line;
      int id = make_node(kind::BinaryOp, nodes_[lhs].line_start);
      extend_span(id, op_line);
      attach(id, lhs);
      attach(id, binary(level + 1));
      lhs = id;
    }
    return lhs;
  }

  int unary() {
    if (at_punct("!") || at_punct("-") || at_punct("&")) {
      int line = advance().line;
      int id = make_node(kind::UnaryOp, line);
      attach(id, unary());
      return id;
    }
    if (at_punct("*")) {
      throw UnsupportedConstruct(peek().line, "pointer dereference");
    }
    if (at_punct("++") || at_punct("--")) {
      throw UnsupportedConstruct(peek().line, "'" + peek().text + "'");
    }
    return primary();
  }

  int primary() {
    reject_unsupported_keyword();
    const Token& t = peek();
    switch (t.kind) {
      case Tok::IntLit:
      case Tok::StrLit:
      case Tok::CharLit:
        advance();
        return make_leaf(kind::Literal, t.text, t.line);
      case Tok::Ident:
        if (peek(1).kind == Tok::Punct && peek(1).text == "(") {
          return call();
        }
        if (peek(1).kind == Tok::Punct &&
            (peek(1).text == "[" || peek(1).text == "." ||
             peek(1).text == "++" || peek(1).text == "--")) {
          throw UnsupportedConstruct(peek(1).line, "'" + peek(1).text + "'");
        }
        advance();
        return make_leaf(kind::Name, t.text, t.line);
      case Tok::Punct:
        if (t.text == "(") {
          advance();
          int id = expression();
          expect_punct(")", "to close the parenthesized expression");
          return id;
        }
        break;
      default:
        break;
    }
    throw SyntaxError(t.line,
                      "expected an expression, got '" + describe(t) + "'");
  }

  // Ids are assigned in construction order; rewrite them so ids follow a
  // preorder walk and the node array (sorted by id) reads as that walk.
  static void renumber_preorder(Ast& ast) {
    std::unordered_map<int, int> remap;
    remap.reserve(ast.nodes.size());
    std::vector<int> order;
    order.reserve(ast.nodes.size());
    std::vector<int> stack{ast.root};
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      remap[id] = static_cast<int>(order.size());
      order.push_back(id);
      const AstNode& n = ast.nodes[id];
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        stack.push_back(*it);
      }
    }
    std::vector<AstNode> renumbered;
    renumbered.reserve(order.size());
    for (int old_id : order) {
      AstNode n = ast.nodes[old_id];
      n.id = remap[old_id];
      for (int& c : n.children) c = remap[c];
      renumbered.push_back(std::move(n));
    }
    ast.nodes = std::move(renumbered);
    ast.root = remap[ast.root];
  }

  std::vector<Token> toks_;
  std::vector<std::string> source_lines_;
  size_t idx_ = 0;
  std::vector<AstNode> nodes_;
};

}  // namespace

std::vector<Ast> parse_functions(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::EmptyInput, "no function definition found");
  }
  Lexer lexer(text);
  Parser parser(lexer.run(), split_lines(text));
  std::vector<Ast> out = parser.functions();
  for (Ast& ast : out) validate(ast);
  return out;
}

Ast parse_source(const std::string& text) {
  return parse_functions(text).front();
}

}  // namespace mcaf
