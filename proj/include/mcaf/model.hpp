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
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcaf/path_miner.hpp"
#include "mcaf/rng.hpp"
#include "mcaf/tape.hpp"

namespace mcaf {

// Context width D = 3 * d_embed: a context row is the concatenation of the
// source-node, path and sink-node embeddings, and that concatenation is the
// encoder's input width. Each encoder branch emits D/3 features so their
// fusion restores width D.
struct ModelConfig {
  int d_embed = 64;
  int n_heads = 4;
  int conv_kernel_size = 3;
  double dropout_rate = 0.1;
  int max_contexts = 400;
  bool attention_scaling = false;  // off: attention logits stay unscaled
  uint64_t seed = 1;

  int dim() const { return 3 * d_embed; }

  // Throws ConfigError: d_embed even and >= 2 (the funnel needs D/2),
  // dim() divisible by n_heads, odd kernel, dropout in [0, 1).
  void check() const;
};

struct LstmDirParams {
  Mat Wi, Wf, Wg, Wo;  // input weights, D x D/3
  Mat Ui, Uf, Ug, Uo;  // recurrent weights, D/3 x D/3
  Mat bi, bf, bg, bo;  // biases, 1 x D/3
};

struct ModelParams {
  ModelConfig config;

  Mat node_table;  // |node_vocab| x d_embed, row 0 (PAD) zero and frozen
  Mat path_table;  // |path_vocab| x d_embed, same PAD convention

  Mat sa_Wq, sa_Wk, sa_Wv;  // D x D/3
  Mat sa_Wl;                // D/3 x D/3
  Mat sa_bl;                // 1 x D/3

  LstmDirParams fwd, bwd;

  Mat conv_W;  // (kernel_size * D) x D/3; row (tap * D + channel)
  Mat conv_b;  // 1 x D/3

  Mat q_class;       // 2 x D class embedding
  Mat q_W1, q_W2;    // D x D
  Mat q_b1, q_b2;    // 1 x D

  std::vector<Mat> mha_Wq, mha_Wk, mha_Wv;  // n_heads of D x D/h
  Mat mha_Wo;                               // D x D

  Mat f_W1;  // D x D/2
  Mat f_b1;  // 1 x D/2
  Mat f_W2;  // D/2 x 1
  Mat f_b2;  // 1 x 1

  size_t node_vocab() const { return static_cast<size_t>(node_table.rows()); }
  size_t path_vocab() const { return static_cast<size_t>(path_table.rows()); }

  // Fixed enumeration order shared by initialization draws, checkpoints,
  // optimizer state and gradient flushing.
  void for_each(
      const std::function<void(const std::string&, Mat&)>& fn);
  void for_each(
      const std::function<void(const std::string&, const Mat&)>& fn) const;

  long long param_count() const;  // by enumeration of stored values
};

// Matrices uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) with fan_in = rows,
// biases zero, embedding tables (node/path/class) normal(0, 0.02) with the
// PAD rows zeroed. Draws follow the for_each order with one seeded stream.
ModelParams init_params(const ModelConfig& config, size_t node_vocab,
                        size_t path_vocab);

ModelParams zeros_like(const ModelParams& p);

// Closed-form twin of ModelParams::param_count.
long long param_count_formula(size_t node_vocab, size_t path_vocab,
                              int d_embed, int n_heads, int kernel_size);

// Everything the explainer needs after a forward pass.
struct AttentionArtifacts {
  Mat E;                       // K x D fused encoder output
  Mat Q;                       // 2 x D pre-attention queries
  Mat self_attn;               // K x K encoder self-attention weights
  std::vector<Mat> head_attn;  // n_heads of 2 x K decoder weights
  std::vector<bool> mask;      // true for real positions
};

struct ForwardResult {
  Eigen::Vector2d yhat;  // (p_class0, p_class1)
  AttentionArtifacts artifacts;
};

// --- branch operations (pure; each runs its own tape internally) ---------

// Row k = concat(node[src_k], path[p_k], node[snk_k]); PAD rows are zero.
Mat embed(const EncodedSeq& triples, const ModelParams& p);

// S = A + relu(A Wl + bl) with A = softmax(Q K^T) V over unmasked keys.
Mat self_attention_encode(const Mat& f, const ModelParams& p,
                          const std::vector<bool>& mask);

// Summed forward/backward LSTM states; rows at and beyond n_real are zero
// and the backward direction starts at position n_real - 1.
Mat bilstm_encode(const Mat& f, const ModelParams& p, size_t n_real);

// Same-padded cross-correlation over the first n_real rows; rows beyond
// n_real are treated as absent (zeroed before the window sweep).
Mat conv1d_encode(const Mat& f, const ModelParams& p, size_t n_real);

// E[k] = concat(S[k], L[k], G[k]); masked rows zeroed.
Mat encode(const Mat& f, const ModelParams& p, const std::vector<bool>& mask);

// Q = FF2(relu(FF1(class_embedding))), one query row per class.
Mat make_queries(const ModelParams& p);

// MHA over E with the two query rows, residual Q + dropout(T), funnel to
// one score per row, softmax over the two scores.
Eigen::Vector2d decode_and_classify(const Mat& Q, const Mat& E,
                                    const ModelParams& p,
                                    const std::vector<bool>& mask,
                                    bool training, Rng* dropout_rng);

// -log(max(yhat[y], 1e-12)).
double loss(const Eigen::Vector2d& yhat, int y);

// Full pipeline on one (possibly PAD-padded) sample; n_real is the count
// of leading real triples. Throws AllMasked when n_real == 0.
ForwardResult forward(const EncodedSeq& triples, size_t n_real,
                      const ModelParams& p, bool training = false,
                      Rng* dropout_rng = nullptr);

// Runs forward + cross-entropy on the tape and adds loss_scale times the
// gradient of loss(sample) into grads. Returns the unscaled sample loss.
double accumulate_gradients(const EncodedSeq& triples, size_t n_real,
                            int label, const ModelParams& p,
                            ModelParams& grads, bool training,
                            Rng* dropout_rng, double loss_scale,
                            Eigen::Vector2d* yhat_out = nullptr);

// Gradient of the single-sample cross-entropy for every parameter
// (dropout disabled). PAD embedding rows receive zero gradient.
ModelParams backward(const EncodedSeq& triples, size_t n_real, int label,
                     const ModelParams& p);

}  // namespace mcaf
