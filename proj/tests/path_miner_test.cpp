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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcaf/ast.hpp"
#include "mcaf/error.hpp"
#include "mcaf/parser.hpp"
#include "mcaf/path_miner.hpp"
#include "mcaf/rng.hpp"

using namespace mcaf;

namespace {

Ast random_tree(Rng& rng, int n_nodes) {
  Ast ast;
  ast.root = 0;
  ast.function_name = "t";
  AstNode root;
  root.id = 0;
  root.kind = "K0";
  ast.nodes.push_back(root);
  for (int id = 1; id < n_nodes; ++id) {
    AstNode n;
    n.id = id;
    n.kind = "K" + std::to_string(static_cast<int>(rng.index(5)));
    ast.nodes.push_back(n);
    int parent = static_cast<int>(rng.index(static_cast<size_t>(id)));
    ast.nodes[parent].children.push_back(id);
  }
  for (AstNode& n : ast.nodes) {
    if (n.children.empty()) n.token = "tok" + std::to_string(n.id);
  }
  return ast;
}

// Independent oracle: full root paths for both leaves, spliced at the last
// node their root-anchored prefixes share.
struct OraclePath {
  std::vector<std::string> kinds;
  std::vector<Dir> dirs;
};

std::vector<int> path_from_root(const Ast& ast, int leaf) {
  std::vector<int> up;
  auto parents = parent_map(ast);
  for (int cur = leaf; cur != -1; cur = parents.at(cur)) up.push_back(cur);
  return {up.rbegin(), up.rend()};
}

OraclePath oracle_path(const Ast& ast, int src, int dst) {
  std::vector<int> a = path_from_root(ast, src);
  std::vector<int> b = path_from_root(ast, dst);
  size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) {
    ++common;
  }
  OraclePath out;
  for (size_t i = a.size(); i-- > common - 1;) {
    out.kinds.push_back(ast.node(a[i]).kind);
    if (i > common - 1) out.dirs.push_back(Dir::Up);
  }
  for (size_t i = common; i < b.size(); ++i) {
    out.kinds.push_back(ast.node(b[i]).kind);
    out.dirs.push_back(Dir::Down);
  }
  return out;
}

Ast fig2_ast() { return parse_source("void f() { scanf(\"%d\", &a); }"); }

}  // namespace

TEST_CASE("every leaf pair yields the brute-force spliced path") {
  Rng rng(derive_seed(2024, RngStream::Init));
  for (int trial = 0; trial < 120; ++trial) {
    Ast ast = random_tree(rng, 3 + static_cast<int>(rng.index(22)));
    validate(ast);
    std::vector<int> ls = leaves(ast);
    if (ls.size() < 2 || ls.size() > 12) continue;

    PathSequence seq = extract_path_contexts(ast, 0, 0);
    size_t n = ls.size();
    REQUIRE(seq.contexts.size() == n * (n - 1) / 2);

    size_t at = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j, ++at) {
        const PathContext& ctx = seq.contexts[at];
        CHECK(ctx.source_leaf == ls[i]);
        CHECK(ctx.sink_leaf == ls[j]);
        OraclePath want = oracle_path(ast, ls[i], ls[j]);
        CHECK(ctx.kinds == want.kinds);
        CHECK(ctx.dirs == want.dirs);
        CHECK(ctx.path_string == path_string_of(want.kinds, want.dirs));
      }
    }
  }
}

TEST_CASE("direction sequence is always up then down with one flip") {
  Rng rng(derive_seed(31, RngStream::Init));
  for (int trial = 0; trial < 60; ++trial) {
    Ast ast = random_tree(rng, 4 + static_cast<int>(rng.index(20)));
    if (leaves(ast).size() < 2) continue;
    for (const PathContext& ctx : extract_path_contexts(ast, 0, 0).contexts) {
      REQUIRE(!ctx.dirs.empty());
      CHECK(ctx.dirs.front() == Dir::Up);
      CHECK(ctx.dirs.back() == Dir::Down);
      int flips = 0;
      for (size_t i = 1; i < ctx.dirs.size(); ++i) {
        if (ctx.dirs[i] != ctx.dirs[i - 1]) ++flips;
      }
      CHECK(flips == 1);
    }
  }
}

TEST_CASE("fig2 tree yields the scanf-to-void context") {
  PathSequence seq = extract_path_contexts(fig2_ast(), 0, 0);
  // 4 leaves, no limits: C(4,2) contexts.
  CHECK(seq.contexts.size() == 6);
  bool found = false;
  for (const PathContext& ctx : seq.contexts) {
    if (ctx.source_token == "scanf" && ctx.sink_token == "void") {
      CHECK(ctx.path_string ==
            "Name^Call^Block^METHOD_MethodReturn_TypeFullName");
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("two-leaf tree yields exactly one context") {
  Ast ast = parse_source("int g() { return 1; }");
  PathSequence seq = extract_path_contexts(ast, 0, 0);
  REQUIRE(seq.contexts.size() == 1);
  CHECK(seq.contexts[0].source_token == "1");
  CHECK(seq.contexts[0].sink_token == "int");
}

TEST_CASE("degenerate tree is rejected") {
  Ast ast;
  ast.root = 0;
  ast.function_name = "t";
  AstNode n;
  n.id = 0;
  n.kind = "Name";
  n.token = "x";
  ast.nodes.push_back(n);
  try {
    extract_path_contexts(ast, 0, 0);
    FAIL("expected DegenerateAst");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateAst);
  }
}

TEST_CASE("limits cut to a subset of the unlimited extraction") {
  Rng rng(derive_seed(55, RngStream::Init));
  for (int trial = 0; trial < 40; ++trial) {
    Ast ast = random_tree(rng, 6 + static_cast<int>(rng.index(20)));
    if (leaves(ast).size() < 2) continue;
    PathSequence full = extract_path_contexts(ast, 0, 0);
    std::set<std::pair<int, int>> all;
    for (const PathContext& ctx : full.contexts) {
      all.insert({ctx.source_leaf, ctx.sink_leaf});
    }
    PathSequence limited = extract_path_contexts(ast, 6, 3);
    std::vector<int> ls = leaves(ast);
    auto order_index = [&](int id) {
      return std::find(ls.begin(), ls.end(), id) - ls.begin();
    };
    for (const PathContext& ctx : limited.contexts) {
      CHECK(all.count({ctx.source_leaf, ctx.sink_leaf}) == 1);
      CHECK(ctx.kinds.size() <= 6);
      CHECK(order_index(ctx.sink_leaf) - order_index(ctx.source_leaf) <= 3);
    }
  }
}

TEST_CASE("default width excludes the wide scanf-void pair") {
  PathSequence seq = extract_path_contexts(fig2_ast(), 8, 2);
  for (const PathContext& ctx : seq.contexts) {
    CHECK(!(ctx.source_token == "scanf" && ctx.sink_token == "void"));
  }
  CHECK(seq.contexts.size() == 5);  // all pairs but the width-3 one
}

TEST_CASE("vocab keeps reserved rows then frequency order") {
  Ast ast = fig2_ast();
  PathSequence seq = extract_path_contexts(ast, 0, 0);
  PathSequence scanf_void;
  scanf_void.function_name = "f";
  for (const PathContext& ctx : seq.contexts) {
    if (ctx.source_token == "scanf" && ctx.sink_token == "void") {
      scanf_void.contexts.push_back(ctx);
    }
  }
  REQUIRE(scanf_void.contexts.size() == 1);
  Vocab v = build_vocab({scanf_void}, 0, 0);
  CHECK(v.nodes ==
        std::vector<std::string>{"<PAD>", "<UNK>", "scanf", "void"});
  CHECK(v.node_id("scanf") == 2);
  CHECK(v.node_id("void") == 3);
  CHECK(v.node_id("missing") == Vocab::kUnk);
  CHECK(v.paths.size() == 3);
  CHECK(v.path_id("Name^Call^Block^METHOD_MethodReturn_TypeFullName") == 2);
}

TEST_CASE("vocab capacity keeps the most frequent, ties lexicographic") {
  PathSequence seq;
  seq.function_name = "f";
  auto add = [&seq](const std::string& s, int times) {
    for (int i = 0; i < times; ++i) {
      PathContext ctx;
      ctx.source_token = s;
      ctx.sink_token = s;
      ctx.path_string = "A^B_C";
      seq.contexts.push_back(ctx);
    }
  };
  add("beta", 5);
  add("alpha", 5);
  add("gamma", 1);
  Vocab v = build_vocab({seq}, 2, 0);
  CHECK(v.nodes ==
        std::vector<std::string>{"<PAD>", "<UNK>", "alpha", "beta"});
  CHECK(v.node_id("gamma") == Vocab::kUnk);
}

TEST_CASE("vocab agrees with a frequency-count oracle on random corpora") {
  Rng rng(derive_seed(77, RngStream::Init));
  std::vector<PathSequence> corpus;
  std::map<std::string, long long> node_freq;
  std::map<std::string, long long> path_freq;
  for (int s = 0; s < 100; ++s) {
    PathSequence seq;
    seq.function_name = "fn" + std::to_string(s);
    int k = 1 + static_cast<int>(rng.index(8));
    for (int i = 0; i < k; ++i) {
      PathContext ctx;
      ctx.source_token = "t" + std::to_string(rng.index(12));
      ctx.sink_token = "t" + std::to_string(rng.index(12));
      ctx.path_string = "p" + std::to_string(rng.index(9));
      node_freq[ctx.source_token]++;
      node_freq[ctx.sink_token]++;
      path_freq[ctx.path_string]++;
      seq.contexts.push_back(ctx);
    }
    corpus.push_back(seq);
  }
  size_t node_cap = 6, path_cap = 4;
  Vocab v = build_vocab(corpus, node_cap, path_cap);
  REQUIRE(v.nodes.size() == node_cap + 2);
  REQUIRE(v.paths.size() == path_cap + 2);

  auto expect_kept = [](const std::map<std::string, long long>& freq,
                        size_t cap) {
    std::vector<std::pair<std::string, long long>> items(freq.begin(),
                                                         freq.end());
    std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    std::vector<std::string> kept;
    for (size_t i = 0; i < cap && i < items.size(); ++i) {
      kept.push_back(items[i].first);
    }
    return kept;
  };
  std::vector<std::string> want_nodes = expect_kept(node_freq, node_cap);
  for (size_t i = 0; i < want_nodes.size(); ++i) {
    CHECK(v.nodes[i + 2] == want_nodes[i]);
    CHECK(v.nodes[v.node_id(want_nodes[i])] == want_nodes[i]);
  }
  std::vector<std::string> want_paths = expect_kept(path_freq, path_cap);
  for (size_t i = 0; i < want_paths.size(); ++i) {
    CHECK(v.paths[i + 2] == want_paths[i]);
  }
  // Everything evicted resolves to UNK.
  for (const auto& [tok, _] : node_freq) {
    bool kept = std::find(want_nodes.begin(), want_nodes.end(), tok) !=
                want_nodes.end();
    if (!kept) CHECK(v.node_id(tok) == Vocab::kUnk);
  }
  for (const auto& [p, _] : path_freq) {
    bool kept = std::find(want_paths.begin(), want_paths.end(), p) !=
                want_paths.end();
    if (!kept) CHECK(v.path_id(p) == Vocab::kUnk);
  }
}

TEST_CASE("empty corpus is rejected") {
  try {
    build_vocab({}, 0, 0);
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCorpus);
  }
}

TEST_CASE("encode emits vocab ids and maps oov to unk") {
  PathSequence seq = extract_path_contexts(fig2_ast(), 0, 0);
  Vocab v = build_vocab({seq}, 0, 0);
  EncodedSeq enc = encode_sequence(seq, v);
  REQUIRE(enc.size() == seq.contexts.size());
  for (size_t i = 0; i < enc.size(); ++i) {
    CHECK(enc[i][0] == v.node_id(seq.contexts[i].source_token));
    CHECK(enc[i][1] == v.path_id(seq.contexts[i].path_string));
    CHECK(enc[i][2] == v.node_id(seq.contexts[i].sink_token));
    CHECK(enc[i][0] != Vocab::kPad);
  }
  // The documented triple for the scanf-to-void context.
  bool found = false;
  for (size_t i = 0; i < enc.size(); ++i) {
    if (seq.contexts[i].source_token == "scanf" &&
        seq.contexts[i].sink_token == "void") {
      CHECK(enc[i][0] == v.node_id("scanf"));
      CHECK(enc[i][1] ==
            v.path_id("Name^Call^Block^METHOD_MethodReturn_TypeFullName"));
      CHECK(enc[i][2] == v.node_id("void"));
      found = true;
    }
  }
  CHECK(found);

  // A vocab holding nothing but the reserved rows maps everything to UNK.
  Vocab bare;
  bare.nodes = {"<PAD>", "<UNK>"};
  bare.paths = {"<PAD>", "<UNK>"};
  for (const EncodedTriple& t : encode_sequence(seq, bare)) {
    CHECK(t == EncodedTriple{Vocab::kUnk, Vocab::kUnk, Vocab::kUnk});
  }
}

TEST_CASE("decode inverts encode for in-vocab corpora") {
  PathSequence seq = extract_path_contexts(fig2_ast(), 0, 0);
  Vocab v = build_vocab({seq}, 0, 0);
  auto decoded = decode_sequence(encode_sequence(seq, v), v);
  REQUIRE(decoded.size() == seq.contexts.size());
  for (size_t i = 0; i < decoded.size(); ++i) {
    CHECK(decoded[i][0] == seq.contexts[i].source_token);
    CHECK(decoded[i][1] == seq.contexts[i].path_string);
    CHECK(decoded[i][2] == seq.contexts[i].sink_token);
  }
  EncodedSeq bad{{0, 99, 0}};
  try {
    decode_sequence(bad, v);
    FAIL("expected IndexOutOfVocab");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfVocab);
  }
}

TEST_CASE("truncate keeps short sequences untouched") {
  EncodedSeq seq;
  for (int i = 0; i < 5; ++i) seq.push_back({i, i, i});
  CHECK(truncate_or_keep(seq, 0, 7) == seq);
  CHECK(truncate_or_keep(seq, 5, 7) == seq);
  CHECK(truncate_or_keep(seq, 6, 7) == seq);
}

TEST_CASE("truncate subsamples deterministically, preserving order") {
  EncodedSeq seq;
  for (int i = 0; i < 1000; ++i) seq.push_back({i, i, i});
  EncodedSeq a = truncate_or_keep(seq, 200, 7);
  EncodedSeq b = truncate_or_keep(seq, 200, 7);
  REQUIRE(a.size() == 200);
  CHECK(a == b);
  // Kept elements stay in their original relative order and are distinct.
  for (size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1][0] < a[i][0]);
  // A different seed picks a different subsample.
  EncodedSeq c = truncate_or_keep(seq, 200, 8);
  CHECK(a != c);
}

TEST_CASE("corpus jsonl round trips") {
  std::vector<PathSequence> corpus;
  PathSequence s1 = extract_path_contexts(fig2_ast(), 0, 0);
  s1.label = 1;
  PathSequence s2 = extract_path_contexts(
      parse_source("int g() { return 1; }"), 0, 0);
  s2.label = 0;
  PathSequence s3 = s2;
  s3.function_name = "unlabeled";
  s3.label = std::nullopt;
  corpus = {s1, s2, s3};

  std::stringstream buf;
  write_corpus_jsonl(buf, corpus);
  std::vector<PathSequence> back = read_corpus_jsonl(buf);
  REQUIRE(back.size() == 3);
  CHECK(back[0].function_name == "f");
  CHECK(back[0].label == 1);
  CHECK(back[1].label == 0);
  CHECK(!back[2].label.has_value());
  REQUIRE(back[0].contexts.size() == corpus[0].contexts.size());
  for (size_t i = 0; i < back[0].contexts.size(); ++i) {
    CHECK(back[0].contexts[i].source_token ==
          corpus[0].contexts[i].source_token);
    CHECK(back[0].contexts[i].path_string ==
          corpus[0].contexts[i].path_string);
    CHECK(back[0].contexts[i].sink_token == corpus[0].contexts[i].sink_token);
  }

  // Byte-stable: writing what was read reproduces the file.
  std::stringstream again;
  write_corpus_jsonl(again, back);
  buf.clear();
  buf.seekg(0);
  CHECK(again.str() == buf.str());
}

TEST_CASE("corpus jsonl rejects malformed lines") {
  std::stringstream bad1("{\"function_name\":\"f\"}\n");
  CHECK_THROWS_AS(read_corpus_jsonl(bad1), SchemaError);
  std::stringstream bad2(
      "{\"function_name\":\"f\",\"label\":2,\"contexts\":[]}\n");
  CHECK_THROWS_AS(read_corpus_jsonl(bad2), SchemaError);
  std::stringstream bad3(
      "{\"function_name\":\"f\",\"label\":1,\"contexts\":[[\"a\",\"b\"]]}\n");
  CHECK_THROWS_AS(read_corpus_jsonl(bad3), SchemaError);
  std::stringstream bad4("not json\n");
  CHECK_THROWS_AS(read_corpus_jsonl(bad4), SchemaError);
}

TEST_CASE("vocab json round trips and validates reserved rows") {
  PathSequence seq = extract_path_contexts(fig2_ast(), 0, 0);
  Vocab v = build_vocab({seq}, 0, 0);
  std::stringstream buf;
  write_vocab_json(buf, v);
  Vocab back = read_vocab_json(buf);
  CHECK(back.nodes == v.nodes);
  CHECK(back.paths == v.paths);
  CHECK(back.node_id("scanf") == v.node_id("scanf"));

  std::stringstream bad("{\"nodes\":[\"x\"],\"paths\":[\"<PAD>\",\"<UNK>\"]}");
  CHECK_THROWS_AS(read_vocab_json(bad), SchemaError);
}
