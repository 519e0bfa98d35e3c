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

#include <map>
#include <string>
#include <vector>

#include "mcaf/ast.hpp"
#include "mcaf/model.hpp"
#include "mcaf/path_miner.hpp"

namespace mcaf {

// Aggregated decoder view: row-wise masked softmax of Q E^T, one row per
// class query. Unscaled by default; `scaled` divides logits by sqrt(D).
// Throws AllMasked when no key survives the mask.
Mat attention_view(const Mat& Q, const Mat& E, const std::vector<bool>& mask,
                   bool scaled = false);

// Spreads each context's weight equally over the nodes on its route (both
// terminals plus the interior); nodes shared by several routes accumulate
// from each. Total node mass equals total path mass. Throws AlignmentError
// when weights and contexts disagree in length, and requires contexts that
// still carry their leaf ids (freshly extracted, not read back from disk).
std::map<int, double> path_to_node_weights(const PathSequence& seq,
                                           const std::vector<double>& weights,
                                           const Ast& ast);

// Statement-level attribution: each node's weight lands on the first line of
// its nearest enclosing statement (children of a block, branch and loop
// bodies, with the function root as the fallback region). Index i holds the
// weight of line i+1; lines holding no node stay exactly 0.
std::vector<double> node_to_line_weights(const Ast& ast,
                                         const std::map<int, double>& weights);

enum class Band { White, Yellow, Orange, Red };

const char* band_name(Band b);

// Against the per-function maximum m: red at >= 2m/3, orange at >= m/3,
// yellow for anything positive below that, white exactly at 0.
std::vector<Band> render_bands(const std::vector<double>& line_weights);

// One <div class="band-..." data-weight="..."> per line (6-decimal weights),
// wrapped in a minimal standalone document.
std::string render_html(const std::vector<std::string>& source_lines,
                        const std::vector<double>& line_weights,
                        const std::vector<Band>& bands);

// Terminal rendering: weight column plus background color per band.
std::string render_ansi(const std::vector<std::string>& source_lines,
                        const std::vector<double>& line_weights,
                        const std::vector<Band>& bands);

// {"lines": [{"line": 1, "weight": w, "band": "red"}, ...]}
std::string attribution_to_json(const std::vector<double>& line_weights,
                                const std::vector<Band>& bands);

}  // namespace mcaf
