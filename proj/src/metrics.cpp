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

#include "mcaf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "mcaf/error.hpp"

namespace mcaf {

namespace {

void check_labels(const std::vector<double>& scores,
                  const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw make_error(ErrorCode::InvalidArgument,
                     "scores and labels differ in length");
  }
  if (scores.empty()) {
    throw make_error(ErrorCode::EmptyCorpus, "no samples to score");
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw make_error(ErrorCode::InvalidArgument,
                       "label at index " + std::to_string(i) +
                           " must be 0 or 1, got " +
                           std::to_string(labels[i]));
    }
    if (!std::isfinite(scores[i])) {
      throw make_error(ErrorCode::InvalidArgument,
                       "score at index " + std::to_string(i) +
                           " is not finite");
    }
  }
}

}  // namespace

Confusion confusion_at(const std::vector<double>& scores,
                       const std::vector<int>& labels, double threshold) {
  check_labels(scores, labels);
  Confusion c;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      (predicted ? c.tp : c.fn)++;
    } else {
      (predicted ? c.fp : c.tn)++;
    }
  }
  return c;
}

double f1_from(double precision_pct, double recall_pct) {
  const double sum = precision_pct + recall_pct;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision_pct * recall_pct / sum;
}

RocCurve roc_curve(const std::vector<double>& scores,
                   const std::vector<int>& labels) {
  check_labels(scores, labels);

  long long n_pos = 0, n_neg = 0;
  // Per-score class counts, highest score first.
  std::map<double, std::pair<long long, long long>, std::greater<double>>
      groups;
  for (size_t i = 0; i < scores.size(); ++i) {
    auto& g = groups[scores[i]];
    if (labels[i] == 1) {
      ++g.first;
      ++n_pos;
    } else {
      ++g.second;
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    throw make_error(ErrorCode::SingleClassDataset,
                     "the ROC sweep needs both classes");
  }

  RocCurve roc;
  const double top = groups.begin()->first;
  roc.points.push_back({(top + 1.0) / 2.0, 0.0, 0.0});

  long long tp = 0, fp = 0;
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    tp += it->second.first;
    fp += it->second.second;
    auto next = std::next(it);
    const double thr = next == groups.end() ? it->first / 2.0
                                            : (it->first + next->first) / 2.0;
    roc.points.push_back({thr, static_cast<double>(tp) / n_pos,
                          static_cast<double>(fp) / n_neg});
  }
  return roc;
}

double auc_from(const RocCurve& roc) {
  if (roc.points.size() < 2) {
    throw make_error(ErrorCode::InvalidArgument,
                     "an ROC curve needs at least two points");
  }
  double area = 0.0;
  for (size_t i = 0; i + 1 < roc.points.size(); ++i) {
    const RocPoint& a = roc.points[i];
    const RocPoint& b = roc.points[i + 1];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double select_threshold(const RocCurve& roc) {
  if (roc.points.empty()) {
    throw make_error(ErrorCode::InvalidArgument, "empty ROC curve");
  }
  double best_j = -2.0;
  double best_thr = 0.5;
  for (const RocPoint& pt : roc.points) {
    const double j = pt.tpr - pt.fpr;
    if (j > best_j + 1e-12) {
      best_j = j;
      best_thr = pt.threshold;
      continue;
    }
    if (std::fabs(j - best_j) <= 1e-12) {
      const double cur = std::fabs(pt.threshold - 0.5);
      const double old = std::fabs(best_thr - 0.5);
      if (cur < old - 1e-12 ||
          (std::fabs(cur - old) <= 1e-12 && pt.threshold < best_thr)) {
        best_thr = pt.threshold;
      }
    }
  }
  return best_thr;
}

std::string report_to_json(const MetricsReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\"precision\": %.2f, \"recall\": %.2f, \"f1\": %.2f, "
                "\"specificity\": %.2f, \"auc\": %.2f, \"mean_ce\": %.6f, "
                "\"n_samples\": %d, \"threshold\": %.6f}",
                r.precision, r.recall, r.f1, r.specificity, r.auc, r.mean_ce,
                r.n_samples, r.threshold);
  return std::string(buf);
}

}  // namespace mcaf
