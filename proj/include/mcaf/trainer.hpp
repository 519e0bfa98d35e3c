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

#include "mcaf/metrics.hpp"
#include "mcaf/model.hpp"
#include "mcaf/path_miner.hpp"

namespace mcaf {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 16;
  double learning_rate = 1e-3;  // adam with beta1=0.9, beta2=0.999, eps=1e-8
  double val_fraction = 0.2;    // 4:1 train:val split
  uint64_t seed = 1;
  int early_stop_patience = 15;  // epochs without val-loss improvement; <=0 off

  // Optional extra stop: halt once train accuracy hits 100% and train
  // cross-entropy drops below train_fit_ce (overfit sanity runs).
  bool stop_when_train_fit = false;
  double train_fit_ce = 0.05;

  void check() const;  // ConfigError on unusable values; lr 0 is legal
};

struct EncodedDataset {
  std::vector<EncodedSeq> seqs;
  std::vector<int> labels;
};

struct SplitResult {
  std::vector<size_t> train_idx;  // ascending
  std::vector<size_t> val_idx;
};

// Per-class validation count = round(class_size * val_fraction), so each
// class's proportions sit within one sample of the global ratio. Deterministic
// in seed; the two sets partition [0, n).
SplitResult stratified_split(const std::vector<int>& labels,
                             double val_fraction, uint64_t seed);

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;  // percent at threshold 0.5
  double val_acc = 0.0;
};

struct TrainResult {
  ModelParams params;  // snapshot with the best validation loss
  std::vector<EpochStats> history;
  SplitResult split;
  int best_epoch = 0;
  double best_val_loss = 0.0;
};

// Batched Adam loop over a stratified split. Batches are padded to the batch
// maximum with PAD triples; epoch metrics run in inference mode. Reruns with
// the same seed produce bit-identical histories and parameters.
TrainResult train(const EncodedDataset& data, const ModelConfig& mc,
                  const TrainConfig& tc, size_t node_vocab, size_t path_vocab);

// Class-1 probability per sequence, inference mode.
std::vector<double> predict_scores(const ModelParams& params,
                                   const std::vector<EncodedSeq>& seqs);

// Positive iff score >= threshold (threshold must lie in (0,1)). Reports
// percentages; precision and specificity fall back to 100 when their
// denominator is empty. Throws NoPositiveLabels when the set has no
// positive samples.
MetricsReport evaluate(const ModelParams& params, const EncodedDataset& data,
                       double threshold);

// "epoch,train_loss,val_loss,train_acc,val_acc" rows, fixed formatting.
std::string history_to_csv(const std::vector<EpochStats>& history);

}  // namespace mcaf
