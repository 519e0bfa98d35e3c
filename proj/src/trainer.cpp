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

#include "mcaf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mcaf/error.hpp"
#include "mcaf/rng.hpp"

namespace mcaf {

void TrainConfig::check() const {
  if (epochs < 1) {
    throw make_error(ErrorCode::ConfigError,
                     "epochs must be >= 1, got " + std::to_string(epochs));
  }
  if (batch_size < 1) {
    throw make_error(ErrorCode::ConfigError, "batch_size must be >= 1, got " +
                                                 std::to_string(batch_size));
  }
  if (!(learning_rate >= 0.0)) {
    throw make_error(ErrorCode::ConfigError,
                     "learning_rate must be >= 0");
  }
  if (!(val_fraction > 0.0) || !(val_fraction < 1.0)) {
    throw make_error(ErrorCode::ConfigError,
                     "val_fraction must lie in (0, 1)");
  }
  if (!(train_fit_ce > 0.0)) {
    throw make_error(ErrorCode::ConfigError, "train_fit_ce must be > 0");
  }
}

SplitResult stratified_split(const std::vector<int>& labels,
                             double val_fraction, uint64_t seed) {
  if (!(val_fraction > 0.0) || !(val_fraction < 1.0)) {
    throw make_error(ErrorCode::ConfigError,
                     "val_fraction must lie in (0, 1)");
  }
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw make_error(ErrorCode::InvalidArgument,
                       "label at index " + std::to_string(i) +
                           " must be 0 or 1");
    }
    by_class[labels[i]].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw make_error(ErrorCode::SingleClassDataset,
                     "a stratified split needs both classes");
  }

  SplitResult out;
  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, RngStream::Split, static_cast<uint64_t>(c)));
    rng.shuffle(by_class[c]);
    const size_t n_val = static_cast<size_t>(std::llround(
        static_cast<double>(by_class[c].size()) * val_fraction));
    for (size_t k = 0; k < by_class[c].size(); ++k) {
      (k < n_val ? out.val_idx : out.train_idx).push_back(by_class[c][k]);
    }
  }
  std::sort(out.train_idx.begin(), out.train_idx.end());
  std::sort(out.val_idx.begin(), out.val_idx.end());
  return out;
}

namespace {

void validate_dataset(const EncodedDataset& data) {
  if (data.seqs.size() != data.labels.size()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "sequence and label counts differ");
  }
  if (data.seqs.empty()) {
    throw make_error(ErrorCode::EmptyCorpus, "dataset is empty");
  }
  for (size_t i = 0; i < data.seqs.size(); ++i) {
    if (data.seqs[i].empty()) {
      throw make_error(ErrorCode::InvalidArgument,
                       "sample " + std::to_string(i) +
                           " has no path contexts");
    }
  }
}

struct AdamState {
  ModelParams m;
  ModelParams v;
  long long step = 0;
};

std::vector<Mat*> mats_of(ModelParams& p) {
  std::vector<Mat*> out;
  p.for_each([&](const std::string&, Mat& m) { out.push_back(&m); });
  return out;
}

void adam_update(ModelParams& params, ModelParams& grads, AdamState& st,
                 double lr) {
  ++st.step;
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(st.step));

  std::vector<Mat*> pv = mats_of(params);
  std::vector<Mat*> gv = mats_of(grads);
  std::vector<Mat*> mv = mats_of(st.m);
  std::vector<Mat*> vv = mats_of(st.v);
  for (size_t k = 0; k < pv.size(); ++k) {
    Mat& g = *gv[k];
    Mat& m = *mv[k];
    Mat& v = *vv[k];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    const Mat mhat = m / bc1;
    const Mat vhat = v / bc2;
    pv[k]->noalias() -=
        lr * mhat.cwiseQuotient((vhat.cwiseSqrt().array() + eps).matrix());
  }
}

// Mean inference loss and percent accuracy (threshold 0.5) over a subset.
void subset_metrics(const ModelParams& params, const EncodedDataset& data,
                    const std::vector<size_t>& idx, double* mean_loss,
                    double* acc_pct) {
  double total = 0.0;
  long long correct = 0;
  for (size_t i : idx) {
    ForwardResult r = forward(data.seqs[i], data.seqs[i].size(), params);
    total += loss(r.yhat, data.labels[i]);
    const int pred = r.yhat(1) >= 0.5 ? 1 : 0;
    correct += pred == data.labels[i];
  }
  *mean_loss = total / static_cast<double>(idx.size());
  *acc_pct = 100.0 * static_cast<double>(correct) /
             static_cast<double>(idx.size());
}

}  // namespace

TrainResult train(const EncodedDataset& data, const ModelConfig& mc,
                  const TrainConfig& tc, size_t node_vocab,
                  size_t path_vocab) {
  mc.check();
  tc.check();
  validate_dataset(data);

  TrainResult out;
  out.split = stratified_split(data.labels, tc.val_fraction, tc.seed);
  if (out.split.train_idx.empty() || out.split.val_idx.empty()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "the split left " +
                         std::string(out.split.val_idx.empty() ? "validation"
                                                               : "training") +
                         " empty; the corpus is too small for val_fraction " +
                         std::to_string(tc.val_fraction));
  }

  ModelParams params = init_params(mc, node_vocab, path_vocab);
  AdamState adam{zeros_like(params), zeros_like(params), 0};

  out.best_val_loss = std::numeric_limits<double>::infinity();
  int stale_epochs = 0;

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    std::vector<size_t> order = out.split.train_idx;
    Rng shuffle_rng(
        derive_seed(tc.seed, RngStream::Shuffle, static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);
    Rng dropout_rng(
        derive_seed(tc.seed, RngStream::Dropout, static_cast<uint64_t>(epoch)));

    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(tc.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(tc.batch_size));
      size_t batch_k = 0;
      for (size_t b = start; b < end; ++b) {
        batch_k = std::max(batch_k, data.seqs[order[b]].size());
      }

      ModelParams grads = zeros_like(params);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (size_t b = start; b < end; ++b) {
        const EncodedSeq& seq = data.seqs[order[b]];
        EncodedSeq padded = seq;
        padded.resize(batch_k, EncodedTriple{0, 0, 0});
        accumulate_gradients(padded, seq.size(), data.labels[order[b]], params,
                             grads, /*training=*/true, &dropout_rng, scale);
      }
      adam_update(params, grads, adam, tc.learning_rate);
    }

    EpochStats stats;
    stats.epoch = epoch;
    subset_metrics(params, data, out.split.train_idx, &stats.train_loss,
                   &stats.train_acc);
    subset_metrics(params, data, out.split.val_idx, &stats.val_loss,
                   &stats.val_acc);
    out.history.push_back(stats);

    if (stats.val_loss < out.best_val_loss - 1e-12) {
      out.best_val_loss = stats.val_loss;
      out.best_epoch = epoch;
      out.params = params;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
    }

    if (tc.early_stop_patience > 0 && stale_epochs >= tc.early_stop_patience) {
      break;
    }
    if (tc.stop_when_train_fit && stats.train_acc == 100.0 &&
        stats.train_loss < tc.train_fit_ce) {
      break;
    }
  }
  return out;
}

std::vector<double> predict_scores(const ModelParams& params,
                                   const std::vector<EncodedSeq>& seqs) {
  std::vector<double> scores;
  scores.reserve(seqs.size());
  for (const EncodedSeq& seq : seqs) {
    scores.push_back(forward(seq, seq.size(), params).yhat(1));
  }
  return scores;
}

MetricsReport evaluate(const ModelParams& params, const EncodedDataset& data,
                       double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw make_error(ErrorCode::InvalidArgument,
                     "threshold must lie in (0, 1)");
  }
  validate_dataset(data);

  std::vector<double> scores;
  scores.reserve(data.seqs.size());
  double total_ce = 0.0;
  for (size_t i = 0; i < data.seqs.size(); ++i) {
    ForwardResult r = forward(data.seqs[i], data.seqs[i].size(), params);
    scores.push_back(r.yhat(1));
    total_ce += loss(r.yhat, data.labels[i]);
  }

  const Confusion c = confusion_at(scores, data.labels, threshold);
  if (c.tp + c.fn == 0) {
    throw make_error(ErrorCode::NoPositiveLabels,
                     "recall is undefined without positive samples");
  }

  MetricsReport r;
  r.precision =
      c.tp + c.fp == 0 ? 100.0 : 100.0 * c.tp / static_cast<double>(c.tp + c.fp);
  r.recall = 100.0 * c.tp / static_cast<double>(c.tp + c.fn);
  r.specificity =
      c.tn + c.fp == 0 ? 100.0 : 100.0 * c.tn / static_cast<double>(c.tn + c.fp);
  r.f1 = f1_from(r.precision, r.recall);
  r.auc = 100.0 * auc_from(roc_curve(scores, data.labels));
  r.mean_ce = total_ce / static_cast<double>(data.seqs.size());
  r.n_samples = static_cast<int>(data.seqs.size());
  r.threshold = threshold;
  return r;
}

std::string history_to_csv(const std::vector<EpochStats>& history) {
  std::string out = "epoch,train_loss,val_loss,train_acc,val_acc\n";
  char buf[160];
  for (const EpochStats& s : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.4f,%.4f\n", s.epoch,
                  s.train_loss, s.val_loss, s.train_acc, s.val_acc);
    out += buf;
  }
  return out;
}

}  // namespace mcaf
