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

#include "mcaf/model.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mcaf/error.hpp"

namespace mcaf {

void ModelConfig::check() const {
  if (d_embed < 2 || d_embed % 2 != 0) {
    throw make_error(ErrorCode::ConfigError,
                     "d_embed must be an even integer >= 2, got " +
                         std::to_string(d_embed));
  }
  if (n_heads < 1 || dim() % n_heads != 0) {
    throw make_error(ErrorCode::ConfigError,
                     "n_heads must be >= 1 and divide 3*d_embed = " +
                         std::to_string(dim()) + ", got " +
                         std::to_string(n_heads));
  }
  if (conv_kernel_size < 1 || conv_kernel_size % 2 == 0) {
    throw make_error(ErrorCode::ConfigError,
                     "conv_kernel_size must be a positive odd integer, got " +
                         std::to_string(conv_kernel_size));
  }
  if (!(dropout_rate >= 0.0) || dropout_rate >= 1.0) {
    throw make_error(ErrorCode::ConfigError,
                     "dropout_rate must lie in [0, 1), got " +
                         std::to_string(dropout_rate));
  }
  if (max_contexts < 1) {
    throw make_error(ErrorCode::ConfigError,
                     "max_contexts must be >= 1, got " +
                         std::to_string(max_contexts));
  }
}

namespace {

// Single traversal shared by the const and mutable for_each overloads so the
// enumeration order cannot drift between them.
template <typename Params, typename Fn>
void for_each_impl(Params& p, Fn&& fn) {
  fn("embed.node_table", p.node_table);
  fn("embed.path_table", p.path_table);

  fn("encoder.self_attention.Wq", p.sa_Wq);
  fn("encoder.self_attention.Wk", p.sa_Wk);
  fn("encoder.self_attention.Wv", p.sa_Wv);
  fn("encoder.self_attention.Wl", p.sa_Wl);
  fn("encoder.self_attention.bl", p.sa_bl);

  auto dir = [&](const std::string& prefix, auto& d) {
    fn(prefix + ".Wi", d.Wi);
    fn(prefix + ".Wf", d.Wf);
    fn(prefix + ".Wg", d.Wg);
    fn(prefix + ".Wo", d.Wo);
    fn(prefix + ".Ui", d.Ui);
    fn(prefix + ".Uf", d.Uf);
    fn(prefix + ".Ug", d.Ug);
    fn(prefix + ".Uo", d.Uo);
    fn(prefix + ".bi", d.bi);
    fn(prefix + ".bf", d.bf);
    fn(prefix + ".bg", d.bg);
    fn(prefix + ".bo", d.bo);
  };
  dir("encoder.bilstm.fwd", p.fwd);
  dir("encoder.bilstm.bwd", p.bwd);

  fn("encoder.conv.W", p.conv_W);
  fn("encoder.conv.b", p.conv_b);

  fn("decoder.query.class_embedding", p.q_class);
  fn("decoder.query.W1", p.q_W1);
  fn("decoder.query.b1", p.q_b1);
  fn("decoder.query.W2", p.q_W2);
  fn("decoder.query.b2", p.q_b2);

  for (size_t i = 0; i < p.mha_Wq.size(); ++i) {
    const std::string head = "decoder.mha.head" + std::to_string(i);
    fn(head + ".Wq", p.mha_Wq[i]);
    fn(head + ".Wk", p.mha_Wk[i]);
    fn(head + ".Wv", p.mha_Wv[i]);
  }
  fn("decoder.mha.Wo", p.mha_Wo);

  fn("decoder.funnel.W1", p.f_W1);
  fn("decoder.funnel.b1", p.f_b1);
  fn("decoder.funnel.W2", p.f_W2);
  fn("decoder.funnel.b2", p.f_b2);
}

}  // namespace

void ModelParams::for_each(
    const std::function<void(const std::string&, Mat&)>& fn) {
  for_each_impl(*this, fn);
}

void ModelParams::for_each(
    const std::function<void(const std::string&, const Mat&)>& fn) const {
  for_each_impl(*this, fn);
}

long long ModelParams::param_count() const {
  long long total = 0;
  for_each([&](const std::string&, const Mat& m) {
    total += static_cast<long long>(m.size());
  });
  return total;
}

ModelParams init_params(const ModelConfig& config, size_t node_vocab,
                        size_t path_vocab) {
  config.check();
  if (node_vocab < 2 || path_vocab < 2) {
    throw make_error(ErrorCode::ConfigError,
                     "vocabularies must contain at least the PAD and UNK "
                     "entries");
  }

  const int d = config.d_embed;
  const int D = config.dim();
  const int d3 = d;       // per-branch output width
  const int dh = D / config.n_heads;

  ModelParams p;
  p.config = config;
  p.node_table.resize(static_cast<Eigen::Index>(node_vocab), d);
  p.path_table.resize(static_cast<Eigen::Index>(path_vocab), d);

  p.sa_Wq.resize(D, d3);
  p.sa_Wk.resize(D, d3);
  p.sa_Wv.resize(D, d3);
  p.sa_Wl.resize(d3, d3);
  p.sa_bl.resize(1, d3);

  for (LstmDirParams* dp : {&p.fwd, &p.bwd}) {
    dp->Wi.resize(D, d3);
    dp->Wf.resize(D, d3);
    dp->Wg.resize(D, d3);
    dp->Wo.resize(D, d3);
    dp->Ui.resize(d3, d3);
    dp->Uf.resize(d3, d3);
    dp->Ug.resize(d3, d3);
    dp->Uo.resize(d3, d3);
    dp->bi.resize(1, d3);
    dp->bf.resize(1, d3);
    dp->bg.resize(1, d3);
    dp->bo.resize(1, d3);
  }

  p.conv_W.resize(config.conv_kernel_size * D, d3);
  p.conv_b.resize(1, d3);

  p.q_class.resize(2, D);
  p.q_W1.resize(D, D);
  p.q_b1.resize(1, D);
  p.q_W2.resize(D, D);
  p.q_b2.resize(1, D);

  p.mha_Wq.resize(static_cast<size_t>(config.n_heads));
  p.mha_Wk.resize(static_cast<size_t>(config.n_heads));
  p.mha_Wv.resize(static_cast<size_t>(config.n_heads));
  for (int h = 0; h < config.n_heads; ++h) {
    p.mha_Wq[static_cast<size_t>(h)].resize(D, dh);
    p.mha_Wk[static_cast<size_t>(h)].resize(D, dh);
    p.mha_Wv[static_cast<size_t>(h)].resize(D, dh);
  }
  p.mha_Wo.resize(D, D);

  p.f_W1.resize(D, D / 2);
  p.f_b1.resize(1, D / 2);
  p.f_W2.resize(D / 2, 1);
  p.f_b2.resize(1, 1);

  Rng rng(derive_seed(config.seed, RngStream::Init));
  p.for_each([&](const std::string& name, Mat& m) {
    const size_t dot = name.rfind('.');
    const std::string leaf = name.substr(dot + 1);
    const bool is_embedding = leaf == "node_table" || leaf == "path_table" ||
                              leaf == "class_embedding";
    if (is_embedding) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          m(i, j) = rng.normal(0.0, 0.02);
        }
      }
    } else if (leaf[0] == 'b') {
      m.setZero();
    } else {
      const double bound = 1.0 / std::sqrt(static_cast<double>(m.rows()));
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          m(i, j) = rng.uniform(-bound, bound);
        }
      }
    }
  });
  // PAD lookups must contribute nothing to any branch.
  p.node_table.row(0).setZero();
  p.path_table.row(0).setZero();
  return p;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams z = p;
  z.for_each([](const std::string&, Mat& m) { m.setZero(); });
  return z;
}

long long param_count_formula(size_t node_vocab, size_t path_vocab,
                              int d_embed, int n_heads, int kernel_size) {
  const long long d = d_embed;
  const long long D = 3 * d;
  const long long d3 = d;
  const long long embeddings =
      (static_cast<long long>(node_vocab) + static_cast<long long>(path_vocab)) * d;
  const long long self_attn = 3 * D * d3 + d3 * d3 + d3;
  const long long lstm = 2 * (4 * D * d3 + 4 * d3 * d3 + 4 * d3);
  const long long conv = kernel_size * D * d3 + d3;
  const long long query = 2 * D + 2 * (D * D + D);
  const long long mha = n_heads * 3 * D * (D / n_heads) + D * D;
  const long long funnel = D * (D / 2) + D / 2 + D / 2 + 1;
  return embeddings + self_attn + lstm + conv + query + mha + funnel;
}

namespace {

using Id = Tape::Id;

std::vector<bool> real_mask(size_t total, size_t n_real) {
  std::vector<bool> mask(total, false);
  for (size_t k = 0; k < n_real && k < total; ++k) mask[k] = true;
  return mask;
}

// Ids of every tensor a caller might need after the pass.
struct GraphOut {
  Id femb = -1;
  Id self_attn = -1;  // K x K attention weights
  Id E = -1;
  Id Q = -1;
  std::vector<Id> head_attn;  // 2 x K per head
  Id yhat = -1;  // 1 x 2 row
};

Id build_self_attention(Tape& t, Id f, const ModelParams& p, ModelParams* g,
                        const std::vector<bool>& mask, Id* attn_out) {
  Id Wq = t.param(&p.sa_Wq, g ? &g->sa_Wq : nullptr);
  Id Wk = t.param(&p.sa_Wk, g ? &g->sa_Wk : nullptr);
  Id Wv = t.param(&p.sa_Wv, g ? &g->sa_Wv : nullptr);
  Id Wl = t.param(&p.sa_Wl, g ? &g->sa_Wl : nullptr);
  Id bl = t.param(&p.sa_bl, g ? &g->sa_bl : nullptr);

  Id logits = t.matmul(t.matmul(f, Wq), t.transpose(t.matmul(f, Wk)));
  if (p.config.attention_scaling) {
    logits = t.scale(logits, 1.0 / std::sqrt(static_cast<double>(p.sa_Wq.cols())));
  }
  Id attn = t.softmax_rows(logits, mask);
  if (attn_out != nullptr) *attn_out = attn;
  Id A = t.matmul(attn, t.matmul(f, Wv));
  return t.add(A, t.relu(t.add_rowvec(t.matmul(A, Wl), bl)));
}

std::vector<Id> build_lstm_dir(Tape& t, const std::vector<Id>& xs,
                               const LstmDirParams& w, LstmDirParams* gw) {
  const Eigen::Index d3 = w.Ui.rows();
  Id Wi = t.param(&w.Wi, gw ? &gw->Wi : nullptr);
  Id Wf = t.param(&w.Wf, gw ? &gw->Wf : nullptr);
  Id Wg = t.param(&w.Wg, gw ? &gw->Wg : nullptr);
  Id Wo = t.param(&w.Wo, gw ? &gw->Wo : nullptr);
  Id Ui = t.param(&w.Ui, gw ? &gw->Ui : nullptr);
  Id Uf = t.param(&w.Uf, gw ? &gw->Uf : nullptr);
  Id Ug = t.param(&w.Ug, gw ? &gw->Ug : nullptr);
  Id Uo = t.param(&w.Uo, gw ? &gw->Uo : nullptr);
  Id bi = t.param(&w.bi, gw ? &gw->bi : nullptr);
  Id bf = t.param(&w.bf, gw ? &gw->bf : nullptr);
  Id bg = t.param(&w.bg, gw ? &gw->bg : nullptr);
  Id bo = t.param(&w.bo, gw ? &gw->bo : nullptr);

  Id h = t.input(Mat::Zero(1, d3));
  Id c = t.input(Mat::Zero(1, d3));
  std::vector<Id> hs;
  hs.reserve(xs.size());
  for (Id x : xs) {
    Id i = t.sigmoid(t.add(t.add(t.matmul(x, Wi), t.matmul(h, Ui)), bi));
    Id f = t.sigmoid(t.add(t.add(t.matmul(x, Wf), t.matmul(h, Uf)), bf));
    Id gg = t.tanh(t.add(t.add(t.matmul(x, Wg), t.matmul(h, Ug)), bg));
    Id o = t.sigmoid(t.add(t.add(t.matmul(x, Wo), t.matmul(h, Uo)), bo));
    c = t.add(t.mul(f, c), t.mul(i, gg));
    h = t.mul(o, t.tanh(c));
    hs.push_back(h);
  }
  return hs;
}

Id build_bilstm(Tape& t, Id f, const ModelParams& p, ModelParams* g,
                size_t total, size_t n_real) {
  std::vector<Id> fwd_x, bwd_x;
  fwd_x.reserve(n_real);
  bwd_x.reserve(n_real);
  for (size_t k = 0; k < n_real; ++k) {
    fwd_x.push_back(t.row(f, static_cast<int>(k)));
  }
  for (size_t k = n_real; k-- > 0;) {
    bwd_x.push_back(t.row(f, static_cast<int>(k)));
  }
  std::vector<Id> hf = build_lstm_dir(t, fwd_x, p.fwd, g ? &g->fwd : nullptr);
  std::vector<Id> hb = build_lstm_dir(t, bwd_x, p.bwd, g ? &g->bwd : nullptr);

  const Eigen::Index d3 = p.fwd.Ui.rows();
  Id zero_row = -1;
  std::vector<Id> rows;
  rows.reserve(total);
  for (size_t k = 0; k < total; ++k) {
    if (k < n_real) {
      rows.push_back(t.add(hf[k], hb[n_real - 1 - k]));
    } else {
      if (zero_row < 0) zero_row = t.input(Mat::Zero(1, d3));
      rows.push_back(zero_row);
    }
  }
  return t.vconcat(rows);
}

Id build_conv(Tape& t, Id f, const ModelParams& p, ModelParams* g,
              const std::vector<bool>& mask) {
  Id W = t.param(&p.conv_W, g ? &g->conv_W : nullptr);
  Id b = t.param(&p.conv_b, g ? &g->conv_b : nullptr);
  Id z = t.zero_rows(f, mask);
  return t.add_rowvec(t.matmul(t.im2col(z, p.config.conv_kernel_size), W), b);
}

Id build_queries(Tape& t, const ModelParams& p, ModelParams* g) {
  Id cls = t.param(&p.q_class, g ? &g->q_class : nullptr);
  Id W1 = t.param(&p.q_W1, g ? &g->q_W1 : nullptr);
  Id b1 = t.param(&p.q_b1, g ? &g->q_b1 : nullptr);
  Id W2 = t.param(&p.q_W2, g ? &g->q_W2 : nullptr);
  Id b2 = t.param(&p.q_b2, g ? &g->q_b2 : nullptr);
  return t.add_rowvec(
      t.matmul(t.relu(t.add_rowvec(t.matmul(cls, W1), b1)), W2), b2);
}

Id build_decode(Tape& t, Id Q, Id E, const ModelParams& p, ModelParams* g,
                const std::vector<bool>& mask, bool training, Rng* rng,
                std::vector<Id>* head_attn_out) {
  const size_t n_heads = p.mha_Wq.size();
  std::vector<Id> heads;
  heads.reserve(n_heads);
  for (size_t i = 0; i < n_heads; ++i) {
    Id Wq = t.param(&p.mha_Wq[i], g ? &g->mha_Wq[i] : nullptr);
    Id Wk = t.param(&p.mha_Wk[i], g ? &g->mha_Wk[i] : nullptr);
    Id Wv = t.param(&p.mha_Wv[i], g ? &g->mha_Wv[i] : nullptr);
    Id logits = t.matmul(t.matmul(Q, Wq), t.transpose(t.matmul(E, Wk)));
    if (p.config.attention_scaling) {
      logits =
          t.scale(logits, 1.0 / std::sqrt(static_cast<double>(p.mha_Wq[i].cols())));
    }
    Id attn = t.softmax_rows(logits, mask);
    if (head_attn_out != nullptr) head_attn_out->push_back(attn);
    heads.push_back(t.matmul(attn, t.matmul(E, Wv)));
  }
  Id Wo = t.param(&p.mha_Wo, g ? &g->mha_Wo : nullptr);
  Id T = t.matmul(t.hconcat(heads), Wo);

  Id Tmixed;
  if (training && p.config.dropout_rate > 0.0) {
    if (rng == nullptr) {
      throw make_error(ErrorCode::InvalidArgument,
                       "training with dropout requires an rng");
    }
    Tmixed = t.add(Q, t.dropout(T, p.config.dropout_rate, *rng));
  } else {
    Tmixed = t.add(Q, T);
  }

  Id W1 = t.param(&p.f_W1, g ? &g->f_W1 : nullptr);
  Id b1 = t.param(&p.f_b1, g ? &g->f_b1 : nullptr);
  Id W2 = t.param(&p.f_W2, g ? &g->f_W2 : nullptr);
  Id b2 = t.param(&p.f_b2, g ? &g->f_b2 : nullptr);
  Id scores = t.add_rowvec(
      t.matmul(t.relu(t.add_rowvec(t.matmul(Tmixed, W1), b1)), W2), b2);
  return t.softmax_rows(t.transpose(scores), {true, true});
}

GraphOut build_forward(Tape& t, const EncodedSeq& triples, size_t n_real,
                       const ModelParams& p, ModelParams* g, bool training,
                       Rng* rng) {
  if (triples.empty() || n_real == 0) {
    throw make_error(ErrorCode::AllMasked,
                     "sequence has no real path contexts");
  }
  if (n_real > triples.size()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "n_real exceeds the sequence length");
  }

  const size_t K = triples.size();
  const std::vector<bool> mask = real_mask(K, n_real);

  std::vector<int> src_ids(K), path_ids(K), snk_ids(K);
  for (size_t k = 0; k < K; ++k) {
    src_ids[k] = triples[k][0];
    path_ids[k] = triples[k][1];
    snk_ids[k] = triples[k][2];
  }

  GraphOut out;
  Id src = t.gather_rows(p.node_table, g ? &g->node_table : nullptr, src_ids);
  Id pth = t.gather_rows(p.path_table, g ? &g->path_table : nullptr, path_ids);
  Id snk = t.gather_rows(p.node_table, g ? &g->node_table : nullptr, snk_ids);
  out.femb = t.hconcat({src, pth, snk});

  Id S = build_self_attention(t, out.femb, p, g, mask, &out.self_attn);
  Id L = build_bilstm(t, out.femb, p, g, K, n_real);
  Id G = build_conv(t, out.femb, p, g, mask);
  out.E = t.zero_rows(t.hconcat({S, L, G}), mask);

  out.Q = build_queries(t, p, g);
  out.yhat =
      build_decode(t, out.Q, out.E, p, g, mask, training, rng, &out.head_attn);
  return out;
}

}  // namespace

Mat embed(const EncodedSeq& triples, const ModelParams& p) {
  const Eigen::Index d = p.node_table.cols();
  Mat out(static_cast<Eigen::Index>(triples.size()), 3 * d);
  auto fetch = [](const Mat& table, int id, const char* what) -> Mat {
    if (id < 0 || id >= table.rows()) {
      throw make_error(ErrorCode::IndexOutOfVocab,
                       std::string(what) + " id " + std::to_string(id) +
                           " outside table of " + std::to_string(table.rows()) +
                           " rows");
    }
    return table.row(id);
  };
  for (size_t k = 0; k < triples.size(); ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k);
    out.block(r, 0, 1, d) = fetch(p.node_table, triples[k][0], "node");
    out.block(r, d, 1, d) = fetch(p.path_table, triples[k][1], "path");
    out.block(r, 2 * d, 1, d) = fetch(p.node_table, triples[k][2], "node");
  }
  return out;
}

Mat self_attention_encode(const Mat& f, const ModelParams& p,
                          const std::vector<bool>& mask) {
  Tape t;
  Id fid = t.input(f);
  Id s = build_self_attention(t, fid, p, nullptr, mask, nullptr);
  return t.val(s);
}

Mat bilstm_encode(const Mat& f, const ModelParams& p, size_t n_real) {
  Tape t;
  Id fid = t.input(f);
  Id l = build_bilstm(t, fid, p, nullptr, static_cast<size_t>(f.rows()), n_real);
  return t.val(l);
}

Mat conv1d_encode(const Mat& f, const ModelParams& p, size_t n_real) {
  Tape t;
  Id fid = t.input(f);
  const std::vector<bool> mask = real_mask(static_cast<size_t>(f.rows()), n_real);
  Id gout = t.zero_rows(build_conv(t, fid, p, nullptr, mask), mask);
  return t.val(gout);
}

Mat encode(const Mat& f, const ModelParams& p, const std::vector<bool>& mask) {
  if (static_cast<Eigen::Index>(mask.size()) != f.rows()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "mask length must match the number of context rows");
  }
  // Padding is always a suffix: the real rows form a prefix.
  size_t n_real = 0;
  while (n_real < mask.size() && mask[n_real]) ++n_real;
  for (size_t k = n_real; k < mask.size(); ++k) {
    if (mask[k]) {
      throw make_error(ErrorCode::InvalidArgument,
                       "mask must mark a prefix of real rows");
    }
  }
  Tape t;
  Id fid = t.input(f);
  Id S = build_self_attention(t, fid, p, nullptr, mask, nullptr);
  Id L = build_bilstm(t, fid, p, nullptr, static_cast<size_t>(f.rows()), n_real);
  Id G = build_conv(t, fid, p, nullptr, mask);
  Id E = t.zero_rows(t.hconcat({S, L, G}), mask);
  return t.val(E);
}

Mat make_queries(const ModelParams& p) {
  Tape t;
  return t.val(build_queries(t, p, nullptr));
}

Eigen::Vector2d decode_and_classify(const Mat& Q, const Mat& E,
                                    const ModelParams& p,
                                    const std::vector<bool>& mask,
                                    bool training, Rng* dropout_rng) {
  Tape t;
  Id q = t.input(Q);
  Id e = t.input(E);
  Id y = build_decode(t, q, e, p, nullptr, mask, training, dropout_rng, nullptr);
  const Mat& v = t.val(y);
  return Eigen::Vector2d(v(0, 0), v(0, 1));
}

double loss(const Eigen::Vector2d& yhat, int y) {
  if (y != 0 && y != 1) {
    throw make_error(ErrorCode::InvalidArgument,
                     "label must be 0 or 1, got " + std::to_string(y));
  }
  return -std::log(std::max(yhat(y), 1e-12));
}

ForwardResult forward(const EncodedSeq& triples, size_t n_real,
                      const ModelParams& p, bool training, Rng* dropout_rng) {
  Tape t;
  GraphOut g = build_forward(t, triples, n_real, p, nullptr, training,
                             dropout_rng);
  ForwardResult r;
  const Mat& y = t.val(g.yhat);
  r.yhat = Eigen::Vector2d(y(0, 0), y(0, 1));
  r.artifacts.E = t.val(g.E);
  r.artifacts.Q = t.val(g.Q);
  r.artifacts.self_attn = t.val(g.self_attn);
  for (Id h : g.head_attn) r.artifacts.head_attn.push_back(t.val(h));
  r.artifacts.mask = real_mask(triples.size(), n_real);
  return r;
}

double accumulate_gradients(const EncodedSeq& triples, size_t n_real,
                            int label, const ModelParams& p,
                            ModelParams& grads, bool training,
                            Rng* dropout_rng, double loss_scale,
                            Eigen::Vector2d* yhat_out) {
  if (label != 0 && label != 1) {
    throw make_error(ErrorCode::InvalidArgument,
                     "label must be 0 or 1, got " + std::to_string(label));
  }
  Tape t;
  GraphOut g =
      build_forward(t, triples, n_real, p, &grads, training, dropout_rng);
  Id nll = t.pick_neg_log(g.yhat, label);
  const double sample_loss = t.val(nll)(0, 0);
  if (yhat_out != nullptr) {
    const Mat& y = t.val(g.yhat);
    *yhat_out = Eigen::Vector2d(y(0, 0), y(0, 1));
  }
  t.backward(nll, loss_scale);
  return sample_loss;
}

ModelParams backward(const EncodedSeq& triples, size_t n_real, int label,
                     const ModelParams& p) {
  ModelParams grads = zeros_like(p);
  accumulate_gradients(triples, n_real, label, p, grads, /*training=*/false,
                       nullptr, 1.0);
  return grads;
}

}  // namespace mcaf
