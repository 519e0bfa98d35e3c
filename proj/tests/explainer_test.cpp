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

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcaf/error.hpp"
#include "mcaf/explainer.hpp"
#include "mcaf/parser.hpp"
#include "mcaf/path_miner.hpp"
#include "mcaf/rng.hpp"
#include "mcaf/synthetic.hpp"

using namespace mcaf;

namespace {

AstNode make_node(int id, const std::string& kind, std::vector<int> children,
                  const char* token = nullptr) {
  AstNode n;
  n.id = id;
  n.kind = kind;
  n.children = std::move(children);
  if (token != nullptr) n.token = token;
  return n;
}

// root(0){leaf(1), mid(2){leaf(3), mid2(4){leaf(5), leaf(6)}}}
Ast deep_tree() {
  Ast ast;
  ast.root = 0;
  ast.function_name = "t";
  ast.nodes.push_back(make_node(0, "METHOD", {1, 2}));
  ast.nodes.push_back(make_node(1, "Name", {}, "a"));
  ast.nodes.push_back(make_node(2, "Call", {3, 4}));
  ast.nodes.push_back(make_node(3, "Name", {}, "b"));
  ast.nodes.push_back(make_node(4, "ArgList", {5, 6}));
  ast.nodes.push_back(make_node(5, "Name", {}, "c"));
  ast.nodes.push_back(make_node(6, "Literal", {}, "7"));
  return ast;
}

PathContext ctx(int src, int snk) {
  PathContext c;
  c.source_leaf = src;
  c.sink_leaf = snk;
  return c;
}

// Independent route oracle: the unique undirected tree path between two
// nodes, found by breadth-first search over the parent/child adjacency.
std::set<int> bfs_route(const Ast& ast, int a, int b) {
  std::unordered_map<int, std::vector<int>> adj;
  for (const AstNode& n : ast.nodes) {
    for (int c : n.children) {
      adj[n.id].push_back(c);
      adj[c].push_back(n.id);
    }
  }
  std::unordered_map<int, int> prev;
  std::deque<int> q{a};
  prev[a] = a;
  while (!q.empty()) {
    const int cur = q.front();
    q.pop_front();
    if (cur == b) break;
    for (int nb : adj[cur]) {
      if (!prev.count(nb)) {
        prev[nb] = cur;
        q.push_back(nb);
      }
    }
  }
  std::set<int> route;
  for (int cur = b;; cur = prev.at(cur)) {
    route.insert(cur);
    if (cur == a) break;
  }
  return route;
}

Ast random_tree(Rng& rng, int n_nodes) {
  Ast ast;
  ast.root = 0;
  ast.function_name = "r";
  ast.nodes.push_back(make_node(0, "METHOD", {}));
  for (int id = 1; id < n_nodes; ++id) {
    const int parent = static_cast<int>(rng.index(static_cast<size_t>(id)));
    ast.nodes.push_back(make_node(id, "Call", {}));
    ast.nodes[static_cast<size_t>(parent)].children.push_back(id);
  }
  for (AstNode& n : ast.nodes) {
    if (n.is_leaf()) {
      n.kind = "Name";
      n.token = "t" + std::to_string(n.id);
    }
  }
  return ast;
}

}  // namespace

TEST_CASE("a single unmasked key takes all attention in both rows") {
  Mat Q(2, 3), E(1, 3);
  Q << 0.3, -1.0, 2.0, 0.0, 0.5, 0.25;
  E << 1.0, 2.0, 3.0;
  const Mat a_w = attention_view(Q, E, {true});
  REQUIRE(a_w.rows() == 2);
  REQUIRE(a_w.cols() == 1);
  CHECK(a_w(0, 0) == 1.0);
  CHECK(a_w(1, 0) == 1.0);
}

TEST_CASE("identical keys share attention uniformly") {
  Mat Q(2, 2), E(5, 2);
  Q << 1.0, -2.0, 0.5, 3.0;
  for (int k = 0; k < 5; ++k) {
    E(k, 0) = 0.7;
    E(k, 1) = -0.4;
  }
  const Mat a_w = attention_view(Q, E, std::vector<bool>(5, true));
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < 5; ++k) {
      CHECK(a_w(r, k) == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
}

TEST_CASE("three-key attention matches the hand-computed softmax") {
  Mat Q(2, 2), E(3, 2);
  Q << 1.0, 0.0, 0.0, 1.0;
  E << 1.0, 2.0, 0.0, 1.0, 2.0, 0.0;
  // Logits: row 0 = (1, 0, 2), row 1 = (2, 1, 0).
  const Mat a_w = attention_view(Q, E, {true, true, true});
  CHECK(a_w(0, 0) == doctest::Approx(0.24472847105479764).epsilon(1e-12));
  CHECK(a_w(0, 1) == doctest::Approx(0.09003057317038046).epsilon(1e-12));
  CHECK(a_w(0, 2) == doctest::Approx(0.6652409557748218).epsilon(1e-12));
  CHECK(a_w(1, 0) == doctest::Approx(0.6652409557748218).epsilon(1e-12));
  CHECK(a_w(1, 1) == doctest::Approx(0.24472847105479764).epsilon(1e-12));
  CHECK(a_w(1, 2) == doctest::Approx(0.09003057317038046).epsilon(1e-12));
  CHECK(a_w.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a_w.row(1).sum() == doctest::Approx(1.0).epsilon(1e-12));

  // Masking the middle key renormalizes over the live ones.
  const Mat masked = attention_view(Q, E, {true, false, true});
  CHECK(masked(0, 0) == doctest::Approx(0.2689414213699951).epsilon(1e-12));
  CHECK(masked(0, 1) == 0.0);
  CHECK(masked(0, 2) == doctest::Approx(0.7310585786300049).epsilon(1e-12));
}

TEST_CASE("attention view rejects an all-masked key set and bad shapes") {
  Mat Q(2, 2), E(3, 2);
  Q.setZero();
  E.setZero();
  try {
    attention_view(Q, E, {false, false, false});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllMasked);
  }
  CHECK_THROWS_AS(attention_view(Q, E, {true, true}), Error);
  Mat E4(3, 4);
  E4.setZero();
  CHECK_THROWS_AS(attention_view(Q, E4, {true, true, true}), Error);
}

TEST_CASE("scaled attention divides logits by sqrt of the width") {
  Mat Q(2, 4), E(3, 4);
  Rng rng(8);
  for (int i = 0; i < Q.size(); ++i) Q(i / 4, i % 4) = rng.uniform(-2, 2);
  for (int i = 0; i < E.size(); ++i) E(i / 4, i % 4) = rng.uniform(-2, 2);
  const Mat plain = attention_view(Q / 2.0, E, {true, true, true}, false);
  const Mat scaled = attention_view(Q, E, {true, true, true}, true);
  for (int i = 0; i < plain.size(); ++i) {
    CHECK(plain(i / 3, i % 3) ==
          doctest::Approx(scaled(i / 3, i % 3)).epsilon(1e-12));
  }
}

TEST_CASE("a single context splits its weight over the route evenly") {
  const Ast ast = deep_tree();
  PathSequence seq;
  seq.contexts = {ctx(1, 5)};  // route 1-0-2-4-5: five nodes
  const auto w = path_to_node_weights(seq, {1.0}, ast);
  REQUIRE(w.size() == 5);
  for (int id : {0, 1, 2, 4, 5}) {
    CHECK(w.at(id) == doctest::Approx(0.2).epsilon(1e-12));
  }
  CHECK(!w.count(3));
  CHECK(!w.count(6));
}

TEST_CASE("routes sharing one node accumulate from both contexts") {
  const Ast ast = deep_tree();
  PathSequence seq;
  // Route A: 1-0-2-3 (4 nodes); route B: 5-4-6 (3 nodes); shared: {}.
  // Route C: 3-2-4-5 (4 nodes) shares node 2 and 4 with A/B... use a pair
  // with exactly one overlap instead: A = {0,1,2,3}, B = {2,4,5} via 3->?
  seq.contexts = {ctx(1, 3), ctx(5, 6)};
  auto w = path_to_node_weights(seq, {1.0, 1.0}, ast);
  CHECK(w.at(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.at(1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.at(2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.at(3) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.at(4) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(w.at(5) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(w.at(6) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // Now two routes sharing exactly node 2: 1-0-2-3 and 3-2-4-5 share {2,3}.
  // Use 1-0-2-3 (size 4) and 5-4-2-... no: take A=(1,3): {1,0,2,3} and
  // B=(3,5): {3,2,4,5} -> shared {2,3}. For exactly one shared node use
  // A=(1,5): {1,0,2,4,5} and B=(3,6): {3,2,4,6} -> shared {2,4}. The tree
  // is small; verify the additivity contract on node 2 of A=(1,3), B=(3,5)
  // instead: w(2) = 1/4 + 1/4, w(3) = 1/4 + 1/4.
  seq.contexts = {ctx(1, 3), ctx(3, 5)};
  w = path_to_node_weights(seq, {1.0, 1.0}, ast);
  CHECK(w.at(2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.at(3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.at(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.at(5) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("node weights conserve path mass against a BFS oracle") {
  Rng rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const Ast ast = random_tree(rng, 3 + static_cast<int>(rng.index(30)));
    const std::vector<int> leaf_ids = leaves(ast);
    if (leaf_ids.size() < 2) continue;

    PathSequence seq;
    std::vector<double> weights;
    for (size_t i = 0; i < leaf_ids.size(); ++i) {
      for (size_t j = i + 1; j < leaf_ids.size(); ++j) {
        seq.contexts.push_back(ctx(leaf_ids[i], leaf_ids[j]));
        weights.push_back(rng.uniform());
      }
    }

    const auto got = path_to_node_weights(seq, weights, ast);

    // Direct double-loop accumulation over BFS routes.
    std::map<int, double> want;
    double path_mass = 0.0;
    for (size_t k = 0; k < seq.contexts.size(); ++k) {
      const std::set<int> route =
          bfs_route(ast, seq.contexts[k].source_leaf,
                    seq.contexts[k].sink_leaf);
      for (int id : route) {
        want[id] += weights[k] / static_cast<double>(route.size());
      }
      path_mass += weights[k];
    }

    REQUIRE(got.size() == want.size());
    double node_mass = 0.0;
    for (const auto& [id, w] : got) {
      CHECK(w == doctest::Approx(want.at(id)).epsilon(1e-9));
      node_mass += w;
    }
    CHECK(std::fabs(node_mass - path_mass) < 1e-9);
  }
}

TEST_CASE("weight/context misalignment and missing leaf ids are rejected") {
  const Ast ast = deep_tree();
  PathSequence seq;
  seq.contexts = {ctx(1, 3)};
  try {
    path_to_node_weights(seq, {1.0, 2.0}, ast);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlignmentError);
  }
  // Sequences read back from disk have leaf ids of -1.
  seq.contexts = {ctx(-1, -1)};
  try {
    path_to_node_weights(seq, {1.0}, ast);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlignmentError);
  }
}

TEST_CASE("line attribution maps node weight to enclosing statements") {
  const std::string src =
      "void f(int a) {\n"
      "  int b = 3;\n"
      "  if (a > 1) {\n"
      "    b = a;\n"
      "  }\n"
      "  return;\n"
      "}\n";
  const Ast ast = parse_source(src);

  // Node ids (preorder): 11 = 'a' inside the condition, 16 = 'a' on the
  // assignment's right side, 3 = the parameter name, 0 = the root.
  REQUIRE(ast.node(11).token == std::optional<std::string>("a"));
  REQUIRE(ast.node(16).token == std::optional<std::string>("a"));
  REQUIRE(ast.node(3).token == std::optional<std::string>("a"));

  std::map<int, double> nw;
  nw[0] = 4.0;   // root -> line 1
  nw[3] = 0.5;   // parameter name -> climbs to the root -> line 1
  nw[11] = 1.0;  // condition leaf -> the if statement -> line 3
  nw[16] = 2.0;  // assignment leaf -> the assignment -> line 4
  const std::vector<double> lines = node_to_line_weights(ast, nw);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(lines[1] == 0.0);
  CHECK(lines[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lines[3] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lines[4] == 0.0);
  CHECK(lines[5] == 0.0);
  CHECK(lines[6] == 0.0);
}

TEST_CASE("a single-statement function gathers all weight on its line") {
  const Ast ast = parse_source(
      "void f(int a) {\n"
      "  g(a);\n"
      "}\n");
  // Put weight on every node of the call subtree.
  const auto parents = parent_map(ast);
  std::map<int, double> nw;
  for (const AstNode& n : ast.nodes) {
    // The call sits on line 2; its subtree is exactly the nodes there.
    if (n.line_start == 2) nw[n.id] = 0.25;
  }
  REQUIRE(!nw.empty());
  const std::vector<double> lines = node_to_line_weights(ast, nw);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == 0.0);
  CHECK(lines[1] ==
        doctest::Approx(0.25 * static_cast<double>(nw.size())).epsilon(1e-12));
  CHECK(lines[2] == 0.0);
}

TEST_CASE("zero node weights give all-zero lines and all-white bands") {
  const Ast ast = parse_source("void f(int a) {\n  g(a);\n}\n");
  std::map<int, double> nw;
  for (const AstNode& n : ast.nodes) nw[n.id] = 0.0;
  const std::vector<double> lines = node_to_line_weights(ast, nw);
  for (double w : lines) CHECK(w == 0.0);
  for (Band b : render_bands(lines)) CHECK(b == Band::White);
}

TEST_CASE("line weights conserve node mass end to end") {
  const auto corpus = generate_synthetic_corpus(10, 77);
  Rng rng(55);
  for (const SyntheticSample& s : corpus) {
    const Ast ast = parse_source(s.source);
    PathSequence seq = extract_path_contexts(ast, 8, 2);
    std::vector<double> pw;
    for (size_t k = 0; k < seq.contexts.size(); ++k) pw.push_back(rng.uniform());

    const auto nw = path_to_node_weights(seq, pw, ast);
    const std::vector<double> lines = node_to_line_weights(ast, nw);

    double path_mass = 0.0, node_mass = 0.0, line_mass = 0.0;
    for (double w : pw) path_mass += w;
    for (const auto& [id, w] : nw) node_mass += w;
    for (double w : lines) line_mass += w;
    CHECK(std::fabs(node_mass - path_mass) < 1e-9);
    CHECK(std::fabs(line_mass - node_mass) < 1e-9);
  }
}

TEST_CASE("band thresholds follow the thirds rule") {
  const std::vector<Band> bands = render_bands({9.0, 5.0, 2.0, 0.0});
  REQUIRE(bands.size() == 4);
  CHECK(bands[0] == Band::Red);
  CHECK(bands[1] == Band::Orange);
  CHECK(bands[2] == Band::Yellow);
  CHECK(bands[3] == Band::White);

  CHECK(render_bands({0.0, 4.0, 0.0}) ==
        std::vector<Band>{Band::White, Band::Red, Band::White});
  CHECK(render_bands({6.0, 4.0, 2.0 - 1e-9, 0.0}) ==
        std::vector<Band>{Band::Red, Band::Red, Band::Yellow, Band::White});
  CHECK_THROWS_AS(render_bands({1.0, -0.5}), Error);
}

TEST_CASE("scaling every weight leaves the bands unchanged") {
  Rng rng(12);
  std::vector<double> w;
  for (int i = 0; i < 40; ++i) {
    w.push_back(rng.uniform() < 0.3 ? 0.0 : rng.uniform());
  }
  const std::vector<Band> base = render_bands(w);
  for (double lambda : {1e-6, 0.5, 3.75, 1e6}) {
    std::vector<double> scaled = w;
    for (double& x : scaled) x *= lambda;
    CHECK(render_bands(scaled) == base);
  }
}

TEST_CASE("hotter bands never hold lower weights than cooler ones") {
  Rng rng(31);
  std::vector<double> w;
  for (int i = 0; i < 64; ++i) {
    w.push_back(rng.uniform() < 0.25 ? 0.0 : rng.uniform());
  }
  const std::vector<Band> bands = render_bands(w);
  for (size_t i = 0; i < w.size(); ++i) {
    for (size_t j = 0; j < w.size(); ++j) {
      if (w[i] < w[j]) {
        CHECK(static_cast<int>(bands[i]) <= static_cast<int>(bands[j]));
      }
    }
  }
}

TEST_CASE("html render carries band classes, weights, and escaping") {
  const std::vector<std::string> src = {"int a;", "if (x < y && p > q) {"};
  const std::vector<double> w = {0.25, 1.0};
  const std::string html = render_html(src, w, render_bands(w));
  CHECK(html.find("<div class=\"band-yellow\" data-weight=\"0.250000\">"
                  "int a;</div>") != std::string::npos);
  CHECK(html.find("<div class=\"band-red\" data-weight=\"1.000000\">"
                  "if (x &lt; y &amp;&amp; p &gt; q) {</div>") !=
        std::string::npos);
  CHECK(html.find("<!DOCTYPE html>") == 0);
  CHECK(html.find("</html>") != std::string::npos);
  CHECK(html.find("if (x < y") == std::string::npos);  // raw '<' never leaks
}

TEST_CASE("ansi render colors by band and prints the weight column") {
  const std::vector<std::string> src = {"aa", "bb", "cc", "dd"};
  const std::vector<double> w = {9.0, 5.0, 2.0, 0.0};
  const std::string ansi = render_ansi(src, w, render_bands(w));
  CHECK(ansi.find("9.000000") != std::string::npos);
  CHECK(ansi.find("\x1b[41maa\x1b[0m") != std::string::npos);
  CHECK(ansi.find("\x1b[43mbb\x1b[0m") != std::string::npos);
  CHECK(ansi.find("\x1b[103mcc\x1b[0m") != std::string::npos);
  // White lines carry no escape codes at all.
  const size_t dd = ansi.find("dd");
  REQUIRE(dd != std::string::npos);
  CHECK(ansi[dd + 2] == '\n');
}

TEST_CASE("json sidecar lists line, weight, and band per line") {
  const std::vector<double> w = {0.5, 0.0};
  const std::string got = attribution_to_json(w, render_bands(w));
  CHECK(got ==
        "{\"lines\": [{\"line\": 1, \"weight\": 0.500000, \"band\": \"red\"}, "
        "{\"line\": 2, \"weight\": 0.000000, \"band\": \"white\"}]}");
}

TEST_CASE("weights agree across output formats") {
  const std::vector<std::string> src = {"x", "y", "z"};
  const std::vector<double> w = {0.123456789, 0.0, 0.654321};
  const std::vector<Band> bands = render_bands(w);
  const std::string html = render_html(src, w, bands);
  const std::string json = attribution_to_json(w, bands);
  const std::string ansi = render_ansi(src, w, bands);
  for (const char* v : {"0.123457", "0.000000", "0.654321"}) {
    CHECK(html.find(v) != std::string::npos);
    CHECK(json.find(v) != std::string::npos);
    CHECK(ansi.find(v) != std::string::npos);
  }
}
