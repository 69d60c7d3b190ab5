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

#ifndef SCORING_METRICS_H_
#define SCORING_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "scoring/dataset.h"

namespace scoring {

enum class TieMode {
  kStrict,  // ties earn no credit
  kHalf,    // ties earn 0.5 (trapezoidal ROC area)
};

TieMode parse_tie_mode(const std::string& text);
const char* tie_mode_name(TieMode mode);

struct ScoreSample {
  std::vector<double> pos_scores;
  std::vector<double> neg_scores;
};

// Distribution of ranking errors; weights must be positive.
struct WeightedSamples {
  std::vector<double> values;
  std::vector<double> weights;
};

// log(1 + exp(-u)), evaluated without overflow for any finite u.
double logistic_loss(double u);

// 1 / (1 + exp(-u)).
double sigmoid(double u);

// Rank-based O(n log n) AUC.
double auc(const ScoreSample& sample, TieMode mode);

// min over a >= 0 of the weighted mean of [a * value + 1]_+ .
double bpoe_at_zero(const WeightedSamples& errors);

std::vector<double> linear_scores(std::span<const double> w,
                                  const BinaryDataset& data);
ScoreSample score_sample(std::span<const double> w, const BinaryDataset& data,
                         double intercept = 0.0);

// 1 - bPOE of the pairwise ranking errors w . (x_neg - x_pos).
double bauc(std::span<const double> w, const BinaryDataset& data);
double bauc(std::span<const double> w, const PairDiffSet& pairs);

// Sum over rows of logistic_loss(y_i (w . x_i + w0)).
double negative_log_likelihood(double w0, std::span<const double> w,
                               const BinaryDataset& data);

}  // namespace scoring

#endif  // SCORING_METRICS_H_
