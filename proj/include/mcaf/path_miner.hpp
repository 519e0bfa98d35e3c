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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcaf/ast.hpp"

namespace mcaf {

enum class Dir { Up, Down };

// One source-leaf / path / sink-leaf triple. The route runs from the
// source leaf up to the lowest common ancestor and down to the sink leaf;
// kinds lists every node on that route, dirs[i] is the step from kinds[i]
// to kinds[i+1] (so dirs matches UP+ DOWN+ with a single flip).
struct PathContext {
  int source_leaf = -1;  // not meaningful for sequences read back from disk
  int sink_leaf = -1;
  std::vector<std::string> kinds;
  std::vector<Dir> dirs;
  std::string source_token;
  std::string sink_token;
  std::string path_string;
};

// kinds joined with '^' for Up steps and '_' for Down steps.
std::string path_string_of(const std::vector<std::string>& kinds,
                           const std::vector<Dir>& dirs);

struct PathSequence {
  std::vector<PathContext> contexts;
  std::optional<int> label;  // 1 vulnerable, 0 not, nullopt unlabeled
  std::string function_name;
};

// One context per unordered leaf pair (left leaf as source), ordered by
// (source leaf index, sink leaf index). Nonzero limits drop contexts with
// more than max_path_length route nodes or leaf-index gap above
// max_path_width. Throws DegenerateAst when the tree has fewer than
// two leaves.
PathSequence extract_path_contexts(const Ast& ast, int max_path_length,
                                   int max_path_width);

struct Vocab {
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  std::vector<std::string> nodes;  // index order; [0]="<PAD>", [1]="<UNK>"
  std::vector<std::string> paths;
  std::unordered_map<std::string, int> node_to_id;
  std::unordered_map<std::string, int> path_to_id;

  int node_id(const std::string& token) const;  // kUnk when absent
  int path_id(const std::string& path) const;
};

// Keeps the most frequent token / path strings up to the given capacities
// (reserved entries not counted; 0 disables a cap), ties broken
// lexicographically. Throws EmptyCorpus on an empty corpus.
Vocab build_vocab(const std::vector<PathSequence>& corpus,
                  size_t max_node_vocab, size_t max_path_vocab);

// (source_id, path_id, sink_id) per context; OOV strings map to UNK.
// PAD never appears here; it is introduced only when batches are padded.
using EncodedTriple = std::array<int, 3>;
using EncodedSeq = std::vector<EncodedTriple>;

EncodedSeq encode_sequence(const PathSequence& seq, const Vocab& vocab);

// Inverse of encode_sequence for in-vocab ids: [source, path, sink] strings.
std::vector<std::array<std::string, 3>> decode_sequence(const EncodedSeq& seq,
                                                        const Vocab& vocab);

// Indices kept when a length-k sequence is cut to max_contexts: a seeded
// shuffle picks the survivors, which are then restored to original order.
// max_contexts == 0 disables the cut.
std::vector<size_t> truncate_keep_indices(size_t k, size_t max_contexts,
                                          uint64_t seed);

EncodedSeq truncate_or_keep(const EncodedSeq& seq, size_t max_contexts,
                            uint64_t seed);

// Corpus file: JSON lines, one object per function:
//   {"function_name": str, "label": 0|1|null,
//    "contexts": [[source_token, path_string, sink_token], ...]}
// Sequences read back carry tokens and path strings only (no node ids).
void write_corpus_jsonl(std::ostream& out,
                        const std::vector<PathSequence>& corpus);
std::vector<PathSequence> read_corpus_jsonl(std::istream& in);

// Vocab file: {"nodes": [...], "paths": [...]} in index order,
// reserved entries included.
void write_vocab_json(std::ostream& out, const Vocab& vocab);
Vocab read_vocab_json(std::istream& in);

}  // namespace mcaf
