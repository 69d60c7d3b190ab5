// Copyright 2026 The scoring Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scoring/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scoring/error.h"

namespace scoring {

TieMode parse_tie_mode(const std::string& text) {
  if (text == "half") return TieMode::kHalf;
  if (text == "strict") return TieMode::kStrict;
  fail(ErrorKind::kConfig, "tie mode must be 'half' or 'strict', got '" + text + "'");
}

const char* tie_mode_name(TieMode mode) {
  return mode == TieMode::kHalf ? "half" : "strict";
}

double logistic_loss(double u) {
  if (u > 0) return std::log1p(std::exp(-u));
  return -u + std::log1p(std::exp(u));
}

double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double auc(const ScoreSample& sample, TieMode mode) {
  const std::size_t n_pos = sample.pos_scores.size();
  const std::size_t n_neg = sample.neg_scores.size();
  if (n_pos == 0 || n_neg == 0) {
    fail(ErrorKind::kInput, "AUC needs at least one score of each class");
  }
  std::vector<double> neg = sample.neg_scores;
  std::sort(neg.begin(), neg.end());
  // Integer counts keep the sum exact up to 2^53 pairs.
  long double wins = 0;
  long double ties = 0;
  for (double s : sample.pos_scores) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), s);
    const auto hi = std::upper_bound(lo, neg.end(), s);
    wins += static_cast<long double>(lo - neg.begin());
    ties += static_cast<long double>(hi - lo);
  }
  const long double credit = mode == TieMode::kHalf ? wins + 0.5L * ties : wins;
  return static_cast<double>(credit / (static_cast<long double>(n_pos) *
                                       static_cast<long double>(n_neg)));
}

double bpoe_at_zero(const WeightedSamples& errors) {
  const auto& values = errors.values;
  const auto& weights = errors.weights;
  if (values.size() != weights.size()) {
    fail(ErrorKind::kInput, "values and weights differ in length");
  }
  double total = 0;
  for (double w : weights) {
    if (!(w > 0)) fail(ErrorKind::kInput, "bPOE weights must be positive");
    total += w;
  }
  if (values.empty()) fail(ErrorKind::kInput, "bPOE of an empty sample");

  // g(a) = (S0 + a * S1) / total, where S0, S1 sum weight and weight * value
  // over the terms still positive at a. A negative value leaves the active
  // set at its breakpoint a = -1 / value.
  std::vector<std::size_t> negative;
  double s0 = 0, s1 = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    s0 += weights[k];
    s1 += weights[k] * values[k];
    if (values[k] < 0) negative.push_back(k);
  }
  if (negative.size() == values.size()) return 0.0;
  std::sort(negative.begin(), negative.end(), [&](std::size_t a, std::size_t b) {
    return -1.0 / values[a] < -1.0 / values[b];
  });

  double best = 1.0;  // a = 0
  std::size_t i = 0;
  while (i < negative.size()) {
    const double a = -1.0 / values[negative[i]];
    // Every term with this breakpoint is exactly zero at a.
    std::size_t j = i;
    while (j < negative.size() && -1.0 / values[negative[j]] == a) {
      s0 -= weights[negative[j]];
      s1 -= weights[negative[j]] * values[negative[j]];
      ++j;
    }
    best = std::min(best, std::max(0.0, (s0 + a * s1) / total));
    i = j;
  }
  return best;
}

std::vector<double> linear_scores(std::span<const double> w,
                                  const BinaryDataset& data) {
  if (w.size() != data.p()) fail(ErrorKind::kInput, "coefficient length differs from p");
  std::vector<double> out(data.n(), 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    auto row = data.row(i);
    double s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j]) s += w[j];
    }
    out[i] = s;
  }
  return out;
}

ScoreSample score_sample(std::span<const double> w, const BinaryDataset& data,
                         double intercept) {
  const auto scores = linear_scores(w, data);
  ScoreSample out;
  for (std::size_t i = 0; i < data.n(); ++i) {
    (data.label(i) > 0 ? out.pos_scores : out.neg_scores)
        .push_back(scores[i] + intercept);
  }
  return out;
}

double bauc(std::span<const double> w, const PairDiffSet& pairs) {
  if (w.size() != pairs.p) fail(ErrorKind::kInput, "coefficient length differs from p");
  WeightedSamples errors;
  errors.values.resize(pairs.size());
  errors.weights = pairs.weights;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto d = pairs.diff(k);
    double e = 0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d[j]) e += d[j] * w[j];
    }
    errors.values[k] = e;
  }
  return 1.0 - bpoe_at_zero(errors);
}

double bauc(std::span<const double> w, const BinaryDataset& data) {
  return bauc(w, pair_differences(data));
}

double negative_log_likelihood(double w0, std::span<const double> w,
                               const BinaryDataset& data) {
  const auto scores = linear_scores(w, data);
  double total = 0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    total += logistic_loss(data.label(i) * (scores[i] + w0));
  }
  return total;
}

}  // namespace scoring
