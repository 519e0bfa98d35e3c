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

#include "mcaf/explainer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "mcaf/error.hpp"
#include "mcaf/tape.hpp"

namespace mcaf {

namespace {

bool kind_is(const std::string& a, const char* b) {
  if (a.size() != std::string(b).size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

Mat attention_view(const Mat& Q, const Mat& E, const std::vector<bool>& mask,
                   bool scaled) {
  if (Q.cols() != E.cols()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "query and key widths differ");
  }
  if (static_cast<Eigen::Index>(mask.size()) != E.rows()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "mask length must match the number of keys");
  }
  Tape t;
  Tape::Id logits = t.matmul(t.input(Q), t.transpose(t.input(E)));
  if (scaled) {
    logits = t.scale(logits, 1.0 / std::sqrt(static_cast<double>(E.cols())));
  }
  return t.val(t.softmax_rows(logits, mask));
}

std::map<int, double> path_to_node_weights(const PathSequence& seq,
                                           const std::vector<double>& weights,
                                           const Ast& ast) {
  if (weights.size() != seq.contexts.size()) {
    throw make_error(ErrorCode::AlignmentError,
                     "got " + std::to_string(weights.size()) +
                         " weights for " +
                         std::to_string(seq.contexts.size()) + " contexts");
  }
  const std::unordered_map<int, int> parents = parent_map(ast);

  auto ancestors = [&](int id) {
    std::vector<int> chain;
    for (int cur = id; cur != -1; cur = parents.at(cur)) {
      chain.push_back(cur);
    }
    return chain;  // id first, root last
  };

  std::map<int, double> node_weights;
  for (size_t k = 0; k < seq.contexts.size(); ++k) {
    const PathContext& ctx = seq.contexts[k];
    if (ctx.source_leaf < 0 || ctx.sink_leaf < 0 ||
        !ast.has_node(ctx.source_leaf) || !ast.has_node(ctx.sink_leaf)) {
      throw make_error(ErrorCode::AlignmentError,
                       "context " + std::to_string(k) +
                           " does not carry leaf ids for this tree");
    }

    const std::vector<int> up = ancestors(ctx.source_leaf);
    const std::vector<int> down = ancestors(ctx.sink_leaf);
    std::set<int> on_up(up.begin(), up.end());

    // Route = source-side chain to the meet point, plus the sink-side chain.
    std::set<int> route;
    int meet = -1;
    for (int id : down) {
      if (on_up.count(id) > 0) {
        meet = id;
        break;
      }
      route.insert(id);
    }
    if (meet == -1) {
      throw make_error(ErrorCode::AlignmentError,
                       "leaves of context " + std::to_string(k) +
                           " do not share an ancestor");
    }
    for (int id : up) {
      route.insert(id);
      if (id == meet) break;
    }

    const double share =
        weights[k] / static_cast<double>(route.size());
    for (int id : route) node_weights[id] += share;
  }
  return node_weights;
}

std::vector<double> node_to_line_weights(
    const Ast& ast, const std::map<int, double>& weights) {
  const std::unordered_map<int, int> parents = parent_map(ast);

  // Child position within the parent, for branch/loop region tests.
  std::unordered_map<int, int> child_index;
  for (const AstNode& n : ast.nodes) {
    for (size_t c = 0; c < n.children.size(); ++c) {
      child_index[n.children[c]] = static_cast<int>(c);
    }
  }

  auto is_statement_root = [&](int id) {
    const int parent = parents.at(id);
    if (parent == -1) return true;  // function root: catch-all region
    const std::string& pk = ast.node(parent).kind;
    const int pos = child_index[id];
    if (kind_is(pk, "Block")) return true;
    if (kind_is(pk, "If") && pos > 0) return true;
    if (kind_is(pk, "Else")) return true;
    if (kind_is(pk, "While") && pos > 0) return true;
    if (kind_is(pk, "For") &&
        pos + 1 == static_cast<int>(ast.node(parent).children.size())) {
      return true;
    }
    return false;
  };

  size_t n_lines = ast.source_lines.size();
  n_lines = std::max(n_lines,
                     static_cast<size_t>(ast.node(ast.root).line_end));
  std::vector<double> lines(n_lines, 0.0);

  for (const auto& [id, w] : weights) {
    if (!ast.has_node(id)) {
      throw make_error(ErrorCode::InvalidArgument,
                       "node weight refers to unknown node id " +
                           std::to_string(id));
    }
    int cur = id;
    while (!is_statement_root(cur)) {
      cur = parents.at(cur);
    }
    const int line = ast.node(cur).line_start;
    lines[static_cast<size_t>(line - 1)] += w;
  }
  return lines;
}

const char* band_name(Band b) {
  switch (b) {
    case Band::White: return "white";
    case Band::Yellow: return "yellow";
    case Band::Orange: return "orange";
    case Band::Red: return "red";
  }
  return "white";
}

std::vector<Band> render_bands(const std::vector<double>& line_weights) {
  double m = 0.0;
  for (double w : line_weights) {
    if (w < 0.0) {
      throw make_error(ErrorCode::InvalidArgument,
                       "line weights must be non-negative");
    }
    m = std::max(m, w);
  }
  std::vector<Band> bands(line_weights.size(), Band::White);
  if (m == 0.0) return bands;
  for (size_t i = 0; i < line_weights.size(); ++i) {
    const double w = line_weights[i];
    if (w == 0.0) {
      bands[i] = Band::White;
    } else if (w >= 2.0 * m / 3.0) {
      bands[i] = Band::Red;
    } else if (w >= m / 3.0) {
      bands[i] = Band::Orange;
    } else {
      bands[i] = Band::Yellow;
    }
  }
  return bands;
}

namespace {

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

double weight_at(const std::vector<double>& w, size_t i) {
  return i < w.size() ? w[i] : 0.0;
}

Band band_at(const std::vector<Band>& b, size_t i) {
  return i < b.size() ? b[i] : Band::White;
}

}  // namespace

std::string render_html(const std::vector<std::string>& source_lines,
                        const std::vector<double>& line_weights,
                        const std::vector<Band>& bands) {
  std::string out =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<style>\n"
      "div { font-family: monospace; white-space: pre; }\n"
      ".band-red { background: #ff8a80; }\n"
      ".band-orange { background: #ffc980; }\n"
      ".band-yellow { background: #ffff8d; }\n"
      ".band-white { background: transparent; }\n"
      "</style>\n</head>\n<body>\n";
  char buf[64];
  for (size_t i = 0; i < source_lines.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", weight_at(line_weights, i));
    const std::string text = html_escape(source_lines[i]);
    out += "<div class=\"band-";
    out += band_name(band_at(bands, i));
    out += "\" data-weight=\"";
    out += buf;
    out += "\">";
    out += text.empty() ? std::string(" ") : text;
    out += "</div>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

std::string render_ansi(const std::vector<std::string>& source_lines,
                        const std::vector<double>& line_weights,
                        const std::vector<Band>& bands) {
  std::string out;
  char buf[64];
  for (size_t i = 0; i < source_lines.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%9.6f  ", weight_at(line_weights, i));
    out += buf;
    const char* bg = "";
    switch (band_at(bands, i)) {
      case Band::Red: bg = "\x1b[41m"; break;
      case Band::Orange: bg = "\x1b[43m"; break;
      case Band::Yellow: bg = "\x1b[103m"; break;
      case Band::White: bg = ""; break;
    }
    out += bg;
    out += source_lines[i];
    if (*bg != '\0') out += "\x1b[0m";
    out += '\n';
  }
  return out;
}

std::string attribution_to_json(const std::vector<double>& line_weights,
                                const std::vector<Band>& bands) {
  std::string out = "{\"lines\": [";
  char buf[96];
  for (size_t i = 0; i < line_weights.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "%s{\"line\": %zu, \"weight\": %.6f, \"band\": \"%s\"}",
                  i == 0 ? "" : ", ", i + 1, line_weights[i],
                  band_name(band_at(bands, i)));
    out += buf;
  }
  out += "]}";
  return out;
}

}  // namespace mcaf
