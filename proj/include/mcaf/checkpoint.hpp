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

#include <iosfwd>
#include <string>

#include "mcaf/model.hpp"

namespace mcaf {

// A trained model plus everything needed to apply it to raw source: the
// path-mining limits used at feature-extraction time and the decision
// threshold selected on validation data.
struct Checkpoint {
  ModelParams params;
  double threshold = 0.5;
  int max_path_length = 8;
  int max_path_width = 2;
};

// Layout: the magic bytes "MCAF1\n", one line of JSON (config, vocab sizes,
// named parameter list with shapes and byte offsets into the blob), a
// newline, then the parameter values as little-endian float32 in header
// order, each matrix row-major. Identical checkpoints serialize to
// identical bytes.
void save_checkpoint(std::ostream& out, const Checkpoint& c);
void save_checkpoint_file(const std::string& path, const Checkpoint& c);

// Validates the magic, header schema and per-parameter shapes (SchemaError
// on any mismatch) and rebuilds the parameters at float32 precision.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint_file(const std::string& path);

}  // namespace mcaf
