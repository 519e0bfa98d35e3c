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

#include <cstdint>
#include <string>
#include <vector>

namespace mcaf {

struct SyntheticSample {
  std::string name;    // unique function name
  std::string source;  // parseable C-subset function definition
  int label = 0;       // 1: return value of a call is never read
  int planted_line = -1;  // 1-based line of the unchecked call (label 1 only)
};

// Half the samples contain a call statement whose return value is dropped;
// the other half bind or branch on the same kind of call. Identifier names,
// literals and distractor statements are randomized per sample, and the same
// seed always reproduces the same corpus byte for byte. n_samples must be
// even and >= 2.
std::vector<SyntheticSample> generate_synthetic_corpus(size_t n_samples,
                                                       uint64_t seed);

}  // namespace mcaf
