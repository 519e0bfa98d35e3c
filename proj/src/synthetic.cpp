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

#include "mcaf/synthetic.hpp"

#include <array>
#include <set>

#include "mcaf/error.hpp"
#include "mcaf/rng.hpp"

namespace mcaf {

namespace {

const std::array<const char*, 10> kVerbs = {
    "read", "load", "parse", "fetch", "poll",
    "scan", "recv", "copy",  "sync",  "probe"};
const std::array<const char*, 10> kNouns = {
    "value", "input", "buffer", "record", "packet",
    "field", "token", "line",   "block",  "entry"};
const std::array<const char*, 8> kCallees = {
    "scanf",     "readx",      "getv",      "recv_data",
    "load_field", "poll_input", "fetch_rec", "scan_buf"};
const std::array<const char*, 10> kVars = {
    "a", "b", "n", "m", "cnt", "val", "tmp", "acc", "len", "pos"};

struct Builder {
  Rng& rng;
  std::vector<std::string> lines;
  std::vector<std::string> vars;  // declared identifiers, in scope
  std::set<std::string> used;

  explicit Builder(Rng& r) : rng(r) {}

  std::string lit() { return std::to_string(1 + rng.index(90)); }

  std::string fresh_var() {
    std::string base = kVars[rng.index(kVars.size())];
    std::string name = base;
    int bump = 2;
    while (used.count(name) > 0) name = base + std::to_string(bump++);
    used.insert(name);
    vars.push_back(name);
    return name;
  }

  const std::string& any_var() { return vars[rng.index(vars.size())]; }

  void declare() {
    std::string v = fresh_var();
    lines.push_back("  int " + v + " = " + lit() + ";");
  }

  void distractor() {
    switch (rng.index(4)) {
      case 0:
        declare();
        break;
      case 1: {
        const std::string& v = any_var();
        lines.push_back("  " + v + " = " + v + " + " + lit() + ";");
        break;
      }
      case 2: {
        const std::string& v = any_var();
        lines.push_back("  " + v + " = " + v + " * " + lit() + " - " + lit() +
                        ";");
        break;
      }
      default: {
        const std::string& v = any_var();
        lines.push_back("  if (" + v + " > " + lit() + ") { " + v + " = " +
                        lit() + "; }");
        break;
      }
    }
  }

  void distractors(size_t count) {
    for (size_t i = 0; i < count; ++i) distractor();
  }
};

}  // namespace

std::vector<SyntheticSample> generate_synthetic_corpus(size_t n_samples,
                                                       uint64_t seed) {
  if (n_samples < 2 || n_samples % 2 != 0) {
    throw make_error(ErrorCode::InvalidArgument,
                     "n_samples must be even and >= 2, got " +
                         std::to_string(n_samples));
  }

  std::vector<SyntheticSample> corpus;
  corpus.reserve(n_samples);
  for (size_t i = 0; i < n_samples; ++i) {
    Rng rng(derive_seed(seed, RngStream::Synthetic, i));
    Builder b(rng);

    SyntheticSample s;
    s.label = i % 2 == 0 ? 1 : 0;
    s.name = std::string(kVerbs[rng.index(kVerbs.size())]) + "_" +
             kNouns[rng.index(kNouns.size())] + "_" + std::to_string(i);
    const std::string param = b.fresh_var();
    const std::string callee = kCallees[rng.index(kCallees.size())];

    const std::string target = b.fresh_var();
    const std::string call = callee + "(\"%d\", &" + target + ")";

    if (s.label == 1) {
      // The call's return value is dropped on the floor.
      b.lines.push_back("void " + s.name + "(int " + param + ") {");
      b.lines.push_back("  int " + target + " = " + b.lit() + ";");
      b.distractors(rng.index(3));
      b.lines.push_back("  " + call + ";");
      s.planted_line = static_cast<int>(b.lines.size());
      b.distractors(rng.index(3));
      if (rng.index(2) == 0) b.lines.push_back("  return;");
      b.lines.push_back("}");
    } else if (rng.index(2) == 0) {
      // Checked directly in a branch condition.
      b.lines.push_back("void " + s.name + "(int " + param + ") {");
      b.lines.push_back("  int " + target + " = " + b.lit() + ";");
      b.distractors(rng.index(3));
      b.lines.push_back("  if (" + call + " != 1) {");
      b.lines.push_back("    return;");
      b.lines.push_back("  }");
      b.distractors(rng.index(3));
      if (rng.index(2) == 0) b.lines.push_back("  return;");
      b.lines.push_back("}");
    } else {
      // Bound to a result variable that is read afterwards.
      const std::string result = b.fresh_var();
      b.lines.push_back("int " + s.name + "(int " + param + ") {");
      b.lines.push_back("  int " + target + " = " + b.lit() + ";");
      b.distractors(rng.index(3));
      b.lines.push_back("  int " + result + " = " + call + ";");
      b.lines.push_back("  if (" + result + " < 1) {");
      b.lines.push_back("    return " + b.lit() + ";");
      b.lines.push_back("  }");
      b.distractors(rng.index(3));
      b.lines.push_back("  return " + target + ";");
      b.lines.push_back("}");
    }

    for (const std::string& line : b.lines) {
      s.source += line;
      s.source += '\n';
    }
    corpus.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace mcaf
