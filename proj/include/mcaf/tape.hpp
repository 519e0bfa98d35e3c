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

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mcaf/rng.hpp"

namespace mcaf {

using Mat = Eigen::MatrixXd;

// Reverse-mode tape over dense double matrices. Each op records a value and
// a pullback; backward() runs the pullbacks newest-first and flushes leaf
// gradients into the external matrices registered via param()/gather_rows().
// One tape instance is one forward pass; tapes are cheap and not reused.
class Tape {
 public:
  using Id = int;

  // Constant leaf; receives no gradient.
  Id input(Mat value);

  // Learnable leaf. Neither pointer is owned; value must outlive the tape.
  // A null grad pointer makes the leaf constant (inference).
  Id param(const Mat* value, Mat* grad);

  // Embedding lookup: row k of the result is table.row(ids[k]). Gradients
  // scatter back into table_grad rows, except row 0 (PAD) which is frozen.
  Id gather_rows(const Mat& table, Mat* table_grad,
                 const std::vector<int>& ids);

  Id matmul(Id a, Id b);
  Id add(Id a, Id b);
  Id mul(Id a, Id b);  // elementwise
  Id scale(Id a, double s);
  Id add_rowvec(Id a, Id row);  // broadcast a 1 x n row over every row of a
  Id sigmoid(Id a);
  Id tanh(Id a);
  Id relu(Id a);
  Id transpose(Id a);
  Id row(Id a, int r);                    // 1 x n slice
  Id hconcat(const std::vector<Id>& xs);  // along columns
  Id vconcat(const std::vector<Id>& xs);  // along rows
  Id zero_rows(Id a, const std::vector<bool>& keep);

  // Row-wise softmax with masked key columns excluded (their logits are
  // treated as -inf, their outputs are exactly 0). Throws AllMasked when
  // no column is live.
  Id softmax_rows(Id a, const std::vector<bool>& key_mask);

  // Same-padded cross-correlation layout: output row t is the horizontal
  // concatenation of input rows t-(ks-1)/2 .. t+(ks-1)/2 (zero rows beyond
  // the ends), so conv reduces to im2col x kernel-matrix.
  Id im2col(Id a, int kernel_size);

  // Inverted dropout; identity when rate == 0. Mask entries are drawn
  // row-major with rng.uniform() < rate meaning drop.
  Id dropout(Id a, double rate, Rng& rng);

  // 1 x 1 value: -log(max(yhat(0, index), 1e-12)).
  Id pick_neg_log(Id yhat, int index);

  const Mat& val(Id id) const;
  const Mat& grad_of(Id id) const;  // valid after backward()

  // Seeds d(target)/d(target) = seed (target must be 1 x 1), runs all
  // pullbacks, then adds leaf gradients into their external matrices.
  void backward(Id target, double seed = 1.0);

 private:
  struct Node {
    Mat value;
    const Mat* pvalue = nullptr;
    Mat grad;
    Mat* pgrad = nullptr;
    std::function<void(Tape&)> back;
  };

  Id push(Mat value, std::function<void(Tape&)> back);
  Mat& grad(Id id) { return nodes_[static_cast<size_t>(id)].grad; }

  std::vector<Node> nodes_;
};

}  // namespace mcaf
