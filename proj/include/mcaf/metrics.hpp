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

#include <string>
#include <vector>

namespace mcaf {

// Classification quality numbers; rate fields are percentages in [0, 100].
struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double specificity = 0.0;
  double auc = 0.0;
  double mean_ce = 0.0;
  int n_samples = 0;
  double threshold = 0.5;
};

struct Confusion {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;
};

// Prediction rule: positive iff score >= threshold. Labels must be 0/1.
Confusion confusion_at(const std::vector<double>& scores,
                       const std::vector<int>& labels, double threshold);

// Harmonic mean of two percentages; 0 when both are 0.
double f1_from(double precision_pct, double recall_pct);

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

// Sweep from "predict nothing positive" (0,0) to "predict everything
// positive" (1,1), one point per distinct score. Each point's threshold is
// the midpoint of the score gap it sits in; the endpoints use (max+1)/2 and
// min/2, which bracket probability-valued scores.
struct RocCurve {
  std::vector<RocPoint> points;  // decreasing threshold, increasing rates
};

// Throws SingleClassDataset unless both labels occur.
RocCurve roc_curve(const std::vector<double>& scores,
                   const std::vector<int>& labels);

// Trapezoidal area under the (FPR, TPR) polyline, as a fraction in [0, 1].
double auc_from(const RocCurve& roc);

// Threshold maximizing Youden's J = TPR - FPR; ties prefer the threshold
// closest to 0.5, then the smaller one.
double select_threshold(const RocCurve& roc);

// Fixed-format JSON so reruns are byte-identical: percentages with two
// decimals, mean_ce and threshold with six.
std::string report_to_json(const MetricsReport& r);

}  // namespace mcaf
