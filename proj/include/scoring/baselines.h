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

#ifndef SCORING_BASELINES_H_
#define SCORING_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "scoring/dataset.h"

namespace scoring {

struct DenseFit {
  std::vector<double> w;
  double w0 = 0.0;
  double lambda = 0.0;
  double alpha_mix = 1.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  // Set by the selection routines when nothing could be selected.
  bool empty_selection = false;
  std::vector<int> selected_groups;  // ascending group indices
};

struct LogisticOptions {
  double tolerance = 1e-6;  // min-norm subgradient of the objective
  int max_iterations = 20000;
  // Called with F after every accepted iterate (debug monotonicity check).
  bool check_monotone = false;
};

// Minimizes (1/n) sum logistic_loss(y (w.x + w0))
//   + lambda (alpha ||w||_1 + (1 - alpha) / 2 ||w||_2^2)
// by monotone accelerated proximal gradient with backtracking. The
// intercept is unpenalized. `start` warm-starts from a previous fit.
DenseFit fit_penalized_logistic(const BinaryDataset& data, double lambda,
                                double alpha_mix,
                                const LogisticOptions& options = {},
                                const DenseFit* start = nullptr);

double penalized_objective(const BinaryDataset& data, const DenseFit& fit);

// Largest |w_j| subgradient residual of the penalized objective at fit.
double subgradient_residual(const BinaryDataset& data, const DenseFit& fit);

// Groups with at least one nonzero coefficient.
std::vector<int> selected_groups(const BinaryDataset& data,
                                 std::span<const double> w);

struct PathOptions {
  int points = 100;
  double min_ratio = 1e-4;
  LogisticOptions solver;
  // When positive, the path ends after three consecutive points select more
  // groups than this. Group counts only grow as lambda falls, so no later
  // point could satisfy a budget of stop_above.
  int stop_above = 0;
};

struct PathPoint {
  double lambda = 0.0;
  DenseFit fit;
  int selected_groups = 0;
};

// Smallest lambda for which w = 0 is optimal (alpha_mix > 0).
double lambda_max(const BinaryDataset& data, double alpha_mix);

std::vector<PathPoint> regularization_path(const BinaryDataset& data,
                                           double alpha_mix,
                                           const PathOptions& options = {});

// Index of the point with the most selected groups not exceeding theta,
// taking the largest lambda among ties; -1 if every point selects none.
int select_path_point(const std::vector<PathPoint>& path, int theta);

DenseFit regularization_path_select(const BinaryDataset& data, int theta,
                                    double alpha_mix,
                                    const PathOptions& options = {},
                                    std::vector<PathPoint>* path_out = nullptr);

enum class StepGranularity { kGroup, kVariable };

struct StepwiseOptions {
  double validation_fraction = 0.2;
  StepGranularity granularity = StepGranularity::kGroup;
  int refit_iterations = 200;
  double ridge = 1e-8;
};

struct StepwiseTrace {
  std::vector<int> order;        // groups (or variables) in the order chosen
  std::vector<double> val_auc;   // validation AUC after each step
  bool stratified_fallback = false;
};

// Unpenalized (ridge-jittered) logistic fit restricted to `features`, by
// Newton's method with step halving.
DenseFit fit_logistic_subset(const BinaryDataset& data,
                             std::span<const int> features, int max_iterations,
                             double ridge);

DenseFit forward_select(const BinaryDataset& data, int theta,
                        std::uint64_t seed, const StepwiseOptions& options = {},
                        StepwiseTrace* trace = nullptr);

DenseFit backward_eliminate(const BinaryDataset& data, int theta,
                            std::uint64_t seed,
                            const StepwiseOptions& options = {},
                            StepwiseTrace* trace = nullptr);

// w_j <- round(w_j / max_k |w_k| * (M + 0.49)), half away from zero.
std::vector<int> integerize(std::span<const double> w, int M);

}  // namespace scoring

#endif  // SCORING_BASELINES_H_
