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

#include "mcaf/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcaf/error.hpp"

namespace mcaf {

Tape::Id Tape::push(Mat value, std::function<void(Tape&)> back) {
  Node n;
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

const Mat& Tape::val(Id id) const {
  const Node& n = nodes_[static_cast<size_t>(id)];
  return n.pvalue ? *n.pvalue : n.value;
}

const Mat& Tape::grad_of(Id id) const {
  return nodes_[static_cast<size_t>(id)].grad;
}

Tape::Id Tape::input(Mat value) { return push(std::move(value), nullptr); }

Tape::Id Tape::param(const Mat* value, Mat* grad) {
  Node n;
  n.pvalue = value;
  n.pgrad = grad;
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::gather_rows(const Mat& table, Mat* table_grad,
                           const std::vector<int>& ids) {
  Mat out(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] < 0 || ids[k] >= table.rows()) {
      throw make_error(ErrorCode::IndexOutOfVocab,
                       "embedding id " + std::to_string(ids[k]) +
                           " outside table of " +
                           std::to_string(table.rows()) + " rows");
    }
    out.row(static_cast<Eigen::Index>(k)) = table.row(ids[k]);
  }
  Id self = push(std::move(out), nullptr);
  if (table_grad) {
    nodes_[static_cast<size_t>(self)].back = [self, table_grad,
                                              ids](Tape& t) {
      const Mat& g = t.grad(self);
      for (size_t k = 0; k < ids.size(); ++k) {
        if (ids[k] == 0) continue;  // PAD row is frozen
        table_grad->row(ids[k]) += g.row(static_cast<Eigen::Index>(k));
      }
    };
  }
  return self;
}

Tape::Id Tape::matmul(Id a, Id b) {
  Id self = push(val(a) * val(b), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, b](Tape& t) {
    const Mat& g = t.grad(self);
    t.grad(a) += g * t.val(b).transpose();
    t.grad(b) += t.val(a).transpose() * g;
  };
  return self;
}

Tape::Id Tape::add(Id a, Id b) {
  Id self = push(val(a) + val(b), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, b](Tape& t) {
    const Mat& g = t.grad(self);
    t.grad(a) += g;
    t.grad(b) += g;
  };
  return self;
}

Tape::Id Tape::mul(Id a, Id b) {
  Id self = push(val(a).cwiseProduct(val(b)), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, b](Tape& t) {
    const Mat& g = t.grad(self);
    t.grad(a) += g.cwiseProduct(t.val(b));
    t.grad(b) += g.cwiseProduct(t.val(a));
  };
  return self;
}

Tape::Id Tape::scale(Id a, double s) {
  Id self = push(val(a) * s, nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, s](Tape& t) {
    t.grad(a) += t.grad(self) * s;
  };
  return self;
}

Tape::Id Tape::add_rowvec(Id a, Id row) {
  Mat out = val(a);
  out.rowwise() += val(row).row(0);
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, row](Tape& t) {
    const Mat& g = t.grad(self);
    t.grad(a) += g;
    t.grad(row).row(0) += g.colwise().sum();
  };
  return self;
}

Tape::Id Tape::sigmoid(Id a) {
  Mat out = val(a).unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a](Tape& t) {
    const Mat& s = t.val(self);
    t.grad(a) += t.grad(self).cwiseProduct(
        s.cwiseProduct(Mat::Ones(s.rows(), s.cols()) - s));
  };
  return self;
}

Tape::Id Tape::tanh(Id a) {
  Mat out = val(a).array().tanh().matrix();
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a](Tape& t) {
    const Mat& s = t.val(self);
    t.grad(a) += t.grad(self).cwiseProduct(
        (Mat::Ones(s.rows(), s.cols()) - s.cwiseProduct(s)));
  };
  return self;
}

Tape::Id Tape::relu(Id a) {
  Mat out = val(a).cwiseMax(0.0);
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a](Tape& t) {
    const Mat& x = t.val(a);
    t.grad(a) += t.grad(self).cwiseProduct(
        x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
  };
  return self;
}

Tape::Id Tape::transpose(Id a) {
  Id self = push(val(a).transpose(), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a](Tape& t) {
    t.grad(a) += t.grad(self).transpose();
  };
  return self;
}

Tape::Id Tape::row(Id a, int r) {
  Id self = push(val(a).row(r), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, r](Tape& t) {
    t.grad(a).row(r) += t.grad(self).row(0);
  };
  return self;
}

Tape::Id Tape::hconcat(const std::vector<Id>& xs) {
  Eigen::Index rows = val(xs.front()).rows();
  Eigen::Index cols = 0;
  for (Id x : xs) cols += val(x).cols();
  Mat out(rows, cols);
  Eigen::Index at = 0;
  for (Id x : xs) {
    out.middleCols(at, val(x).cols()) = val(x);
    at += val(x).cols();
  }
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, xs](Tape& t) {
    const Mat& g = t.grad(self);
    Eigen::Index pos = 0;
    for (Id x : xs) {
      Eigen::Index w = t.val(x).cols();
      t.grad(x) += g.middleCols(pos, w);
      pos += w;
    }
  };
  return self;
}

Tape::Id Tape::vconcat(const std::vector<Id>& xs) {
  Eigen::Index cols = val(xs.front()).cols();
  Eigen::Index rows = 0;
  for (Id x : xs) rows += val(x).rows();
  Mat out(rows, cols);
  Eigen::Index at = 0;
  for (Id x : xs) {
    out.middleRows(at, val(x).rows()) = val(x);
    at += val(x).rows();
  }
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, xs](Tape& t) {
    const Mat& g = t.grad(self);
    Eigen::Index pos = 0;
    for (Id x : xs) {
      Eigen::Index h = t.val(x).rows();
      t.grad(x) += g.middleRows(pos, h);
      pos += h;
    }
  };
  return self;
}

Tape::Id Tape::zero_rows(Id a, const std::vector<bool>& keep) {
  Mat out = val(a);
  for (size_t r = 0; r < keep.size(); ++r) {
    if (!keep[r]) out.row(static_cast<Eigen::Index>(r)).setZero();
  }
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, keep](Tape& t) {
    Mat g = t.grad(self);
    for (size_t r = 0; r < keep.size(); ++r) {
      if (!keep[r]) g.row(static_cast<Eigen::Index>(r)).setZero();
    }
    t.grad(a) += g;
  };
  return self;
}

Tape::Id Tape::softmax_rows(Id a, const std::vector<bool>& key_mask) {
  const Mat& x = val(a);
  bool any = false;
  for (bool b : key_mask) any = any || b;
  if (!any || key_mask.size() != static_cast<size_t>(x.cols())) {
    throw make_error(ErrorCode::AllMasked,
                     "softmax needs at least one unmasked key");
  }
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (key_mask[static_cast<size_t>(c)]) mx = std::max(mx, x(r, c));
    }
    double denom = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (key_mask[static_cast<size_t>(c)]) {
        out(r, c) = std::exp(x(r, c) - mx);
        denom += out(r, c);
      }
    }
    out.row(r) /= denom;
  }
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a](Tape& t) {
    // Masked outputs are exactly 0, so p (dot) rule zeroes them anyway.
    const Mat& p = t.val(self);
    const Mat& g = t.grad(self);
    Mat& ga = t.grad(a);
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      double dot = g.row(r).dot(p.row(r));
      ga.row(r) += p.row(r).cwiseProduct(
          g.row(r) - Eigen::RowVectorXd::Constant(p.cols(), dot));
    }
  };
  return self;
}

Tape::Id Tape::im2col(Id a, int kernel_size) {
  const Mat& x = val(a);
  const int pad = (kernel_size - 1) / 2;
  const Eigen::Index k = x.rows();
  const Eigen::Index d = x.cols();
  Mat out = Mat::Zero(k, d * kernel_size);
  for (Eigen::Index t = 0; t < k; ++t) {
    for (int dt = 0; dt < kernel_size; ++dt) {
      Eigen::Index src = t + dt - pad;
      if (src < 0 || src >= k) continue;
      out.block(t, dt * d, 1, d) = x.row(src);
    }
  }
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a, kernel_size, pad,
                                            d](Tape& t) {
    const Mat& g = t.grad(self);
    Mat& ga = t.grad(a);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (int dt = 0; dt < kernel_size; ++dt) {
        Eigen::Index src = r + dt - pad;
        if (src < 0 || src >= ga.rows()) continue;
        ga.row(src) += g.block(r, dt * d, 1, d);
      }
    }
  };
  return self;
}

Tape::Id Tape::dropout(Id a, double rate, Rng& rng) {
  if (rate <= 0.0) return a;
  const Mat& x = val(a);
  Mat mask(x.rows(), x.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      mask(r, c) = rng.uniform() < rate ? 0.0 : keep_scale;
    }
  }
  Id self = push(x.cwiseProduct(mask), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, a,
                                            mask = std::move(mask)](Tape& t) {
    t.grad(a) += t.grad(self).cwiseProduct(mask);
  };
  return self;
}

Tape::Id Tape::pick_neg_log(Id yhat, int index) {
  double p = val(yhat)(0, index);
  double clamped = std::max(p, 1e-12);
  Mat out(1, 1);
  out(0, 0) = -std::log(clamped);
  Id self = push(std::move(out), nullptr);
  nodes_[static_cast<size_t>(self)].back = [self, yhat, index, p](Tape& t) {
    if (p > 1e-12) {
      t.grad(yhat)(0, index) += -t.grad(self)(0, 0) / p;
    }
  };
  return self;
}

void Tape::backward(Id target, double seed) {
  for (Node& n : nodes_) {
    const Mat& v = n.pvalue ? *n.pvalue : n.value;
    n.grad = Mat::Zero(v.rows(), v.cols());
  }
  Node& t = nodes_[static_cast<size_t>(target)];
  if (t.grad.rows() != 1 || t.grad.cols() != 1) {
    throw make_error(ErrorCode::InvalidArgument,
                     "backward target must be a scalar");
  }
  t.grad(0, 0) = seed;
  for (size_t i = nodes_.size(); i-- > 0;) {
    if (nodes_[i].back) nodes_[i].back(*this);
  }
  for (Node& n : nodes_) {
    if (n.pgrad) *n.pgrad += n.grad;
  }
}

}  // namespace mcaf
