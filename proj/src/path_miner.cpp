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

#include "mcaf/path_miner.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "mcaf/error.hpp"
#include "mcaf/rng.hpp"

namespace mcaf {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kPadString = "<PAD>";
constexpr const char* kUnkString = "<UNK>";

// Route from a node to the root, starting at the node itself.
std::vector<int> root_path(const std::unordered_map<int, int>& parents,
                           int id) {
  std::vector<int> out;
  for (int cur = id; cur != -1; cur = parents.at(cur)) out.push_back(cur);
  return out;
}

}  // namespace

std::string path_string_of(const std::vector<std::string>& kinds,
                           const std::vector<Dir>& dirs) {
  if (kinds.empty()) return "";
  if (dirs.size() + 1 != kinds.size()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "path has " + std::to_string(kinds.size()) +
                         " nodes but " + std::to_string(dirs.size()) +
                         " steps");
  }
  std::string out = kinds[0];
  for (size_t i = 0; i < dirs.size(); ++i) {
    out += (dirs[i] == Dir::Up) ? '^' : '_';
    out += kinds[i + 1];
  }
  return out;
}

PathSequence extract_path_contexts(const Ast& ast, int max_path_length,
                                   int max_path_width) {
  std::vector<int> leaf_ids = leaves(ast);
  if (leaf_ids.size() < 2) {
    throw make_error(ErrorCode::DegenerateAst,
                     "need at least 2 leaves, found " +
                         std::to_string(leaf_ids.size()));
  }
  auto parents = parent_map(ast);

  std::vector<std::vector<int>> up_paths;
  up_paths.reserve(leaf_ids.size());
  for (int id : leaf_ids) up_paths.push_back(root_path(parents, id));

  PathSequence seq;
  seq.function_name = ast.function_name;
  for (size_t i = 0; i < leaf_ids.size(); ++i) {
    for (size_t j = i + 1; j < leaf_ids.size(); ++j) {
      if (max_path_width > 0 &&
          j - i > static_cast<size_t>(max_path_width)) {
        continue;
      }
      // Walk the two root paths back from the root; the last node the
      // prefixes share is the lowest common ancestor.
      const std::vector<int>& a = up_paths[i];
      const std::vector<int>& b = up_paths[j];
      size_t common = 0;
      while (common < a.size() && common < b.size() &&
             a[a.size() - 1 - common] == b[b.size() - 1 - common]) {
        ++common;
      }
      size_t lca_a = a.size() - common;  // index of the LCA within a

      PathContext ctx;
      ctx.source_leaf = leaf_ids[i];
      ctx.sink_leaf = leaf_ids[j];
      for (size_t s = 0; s <= lca_a; ++s) {
        ctx.kinds.push_back(ast.node(a[s]).kind);
        if (s < lca_a) ctx.dirs.push_back(Dir::Up);
      }
      for (size_t s = b.size() - common; s-- > 0;) {
        ctx.kinds.push_back(ast.node(b[s]).kind);
        ctx.dirs.push_back(Dir::Down);
      }
      if (max_path_length > 0 &&
          ctx.kinds.size() > static_cast<size_t>(max_path_length)) {
        continue;
      }
      ctx.source_token = *ast.node(leaf_ids[i]).token;
      ctx.sink_token = *ast.node(leaf_ids[j]).token;
      ctx.path_string = path_string_of(ctx.kinds, ctx.dirs);
      seq.contexts.push_back(std::move(ctx));
    }
  }
  return seq;
}

int Vocab::node_id(const std::string& token) const {
  auto it = node_to_id.find(token);
  return it == node_to_id.end() ? kUnk : it->second;
}

int Vocab::path_id(const std::string& path) const {
  auto it = path_to_id.find(path);
  return it == path_to_id.end() ? kUnk : it->second;
}

namespace {

// Frequency-ranked entries after the reserved rows; ties lexicographic.
std::vector<std::string> rank_entries(
    const std::unordered_map<std::string, long long>& counts,
    size_t capacity) {
  std::vector<std::pair<std::string, long long>> items(counts.begin(),
                                                       counts.end());
  std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  std::vector<std::string> out{kPadString, kUnkString};
  for (const auto& [s, _] : items) {
    if (capacity > 0 && out.size() >= capacity + 2) break;
    out.push_back(s);
  }
  return out;
}

void index_entries(const std::vector<std::string>& entries,
                   std::unordered_map<std::string, int>& map) {
  for (size_t i = 0; i < entries.size(); ++i) {
    map.emplace(entries[i], static_cast<int>(i));
  }
}

}  // namespace

Vocab build_vocab(const std::vector<PathSequence>& corpus,
                  size_t max_node_vocab, size_t max_path_vocab) {
  if (corpus.empty()) {
    throw make_error(ErrorCode::EmptyCorpus, "vocabulary needs a corpus");
  }
  std::unordered_map<std::string, long long> node_counts;
  std::unordered_map<std::string, long long> path_counts;
  for (const PathSequence& seq : corpus) {
    for (const PathContext& ctx : seq.contexts) {
      ++node_counts[ctx.source_token];
      ++node_counts[ctx.sink_token];
      ++path_counts[ctx.path_string];
    }
  }
  Vocab v;
  v.nodes = rank_entries(node_counts, max_node_vocab);
  v.paths = rank_entries(path_counts, max_path_vocab);
  index_entries(v.nodes, v.node_to_id);
  index_entries(v.paths, v.path_to_id);
  return v;
}

EncodedSeq encode_sequence(const PathSequence& seq, const Vocab& vocab) {
  EncodedSeq out;
  out.reserve(seq.contexts.size());
  for (const PathContext& ctx : seq.contexts) {
    out.push_back({vocab.node_id(ctx.source_token),
                   vocab.path_id(ctx.path_string),
                   vocab.node_id(ctx.sink_token)});
  }
  return out;
}

std::vector<std::array<std::string, 3>> decode_sequence(const EncodedSeq& seq,
                                                        const Vocab& vocab) {
  std::vector<std::array<std::string, 3>> out;
  out.reserve(seq.size());
  for (const EncodedTriple& t : seq) {
    if (t[0] < 0 || t[0] >= static_cast<int>(vocab.nodes.size()) ||
        t[2] < 0 || t[2] >= static_cast<int>(vocab.nodes.size()) ||
        t[1] < 0 || t[1] >= static_cast<int>(vocab.paths.size())) {
      throw make_error(ErrorCode::IndexOutOfVocab,
                       "encoded triple index outside the vocabulary");
    }
    out.push_back({vocab.nodes[t[0]], vocab.paths[t[1]], vocab.nodes[t[2]]});
  }
  return out;
}

std::vector<size_t> truncate_keep_indices(size_t k, size_t max_contexts,
                                          uint64_t seed) {
  std::vector<size_t> idx(k);
  for (size_t i = 0; i < k; ++i) idx[i] = i;
  if (max_contexts == 0 || k <= max_contexts) return idx;
  Rng rng(derive_seed(seed, RngStream::Truncate));
  rng.shuffle(idx);
  idx.resize(max_contexts);
  std::sort(idx.begin(), idx.end());
  return idx;
}

EncodedSeq truncate_or_keep(const EncodedSeq& seq, size_t max_contexts,
                            uint64_t seed) {
  if (max_contexts == 0 || seq.size() <= max_contexts) return seq;
  std::vector<size_t> keep =
      truncate_keep_indices(seq.size(), max_contexts, seed);
  EncodedSeq out;
  out.reserve(keep.size());
  for (size_t i : keep) out.push_back(seq[i]);
  return out;
}

void write_corpus_jsonl(std::ostream& out,
                        const std::vector<PathSequence>& corpus) {
  for (const PathSequence& seq : corpus) {
    json obj;
    obj["function_name"] = seq.function_name;
    if (seq.label) {
      obj["label"] = *seq.label;
    } else {
      obj["label"] = nullptr;
    }
    json contexts = json::array();
    for (const PathContext& ctx : seq.contexts) {
      contexts.push_back(
          json::array({ctx.source_token, ctx.path_string, ctx.sink_token}));
    }
    obj["contexts"] = std::move(contexts);
    out << obj.dump() << '\n';
  }
}

std::vector<PathSequence> read_corpus_jsonl(std::istream& in) {
  std::vector<PathSequence> corpus;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("line " + std::to_string(line_no),
                        std::string("not valid JSON: ") + e.what());
    }
    const std::string at = "line " + std::to_string(line_no);
    if (!obj.is_object() || !obj.contains("function_name") ||
        !obj.contains("label") || !obj.contains("contexts")) {
      throw SchemaError(at,
                        "expected function_name, label and contexts keys");
    }
    PathSequence seq;
    if (!obj["function_name"].is_string()) {
      throw SchemaError(at + "/function_name", "expected a string");
    }
    seq.function_name = obj["function_name"].get<std::string>();
    if (obj["label"].is_null()) {
      seq.label = std::nullopt;
    } else if (obj["label"].is_number_integer()) {
      int lab = obj["label"].get<int>();
      if (lab != 0 && lab != 1) {
        throw SchemaError(at + "/label", "labels are 0, 1 or null");
      }
      seq.label = lab;
    } else {
      throw SchemaError(at + "/label", "labels are 0, 1 or null");
    }
    if (!obj["contexts"].is_array()) {
      throw SchemaError(at + "/contexts", "expected an array");
    }
    for (size_t i = 0; i < obj["contexts"].size(); ++i) {
      const json& jc = obj["contexts"][i];
      if (!jc.is_array() || jc.size() != 3 || !jc[0].is_string() ||
          !jc[1].is_string() || !jc[2].is_string()) {
        throw SchemaError(at + "/contexts/" + std::to_string(i),
                          "expected [source, path, sink] strings");
      }
      PathContext ctx;
      ctx.source_token = jc[0].get<std::string>();
      ctx.path_string = jc[1].get<std::string>();
      ctx.sink_token = jc[2].get<std::string>();
      seq.contexts.push_back(std::move(ctx));
    }
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

void write_vocab_json(std::ostream& out, const Vocab& vocab) {
  json obj;
  obj["nodes"] = vocab.nodes;
  obj["paths"] = vocab.paths;
  out << obj.dump() << '\n';
}

Vocab read_vocab_json(std::istream& in) {
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  if (!obj.is_object() || !obj.contains("nodes") || !obj.contains("paths") ||
      !obj["nodes"].is_array() || !obj["paths"].is_array()) {
    throw SchemaError("", "expected nodes and paths arrays");
  }
  Vocab v;
  for (const auto& s : obj["nodes"]) {
    if (!s.is_string()) throw SchemaError("/nodes", "expected strings");
    v.nodes.push_back(s.get<std::string>());
  }
  for (const auto& s : obj["paths"]) {
    if (!s.is_string()) throw SchemaError("/paths", "expected strings");
    v.paths.push_back(s.get<std::string>());
  }
  if (v.nodes.size() < 2 || v.nodes[0] != kPadString ||
      v.nodes[1] != kUnkString || v.paths.size() < 2 ||
      v.paths[0] != kPadString || v.paths[1] != kUnkString) {
    throw SchemaError("", "reserved vocabulary rows missing or reordered");
  }
  index_entries(v.nodes, v.node_to_id);
  index_entries(v.paths, v.path_to_id);
  return v;
}

}  // namespace mcaf
