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

#ifndef SCORING_TRAINER_H_
#define SCORING_TRAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "scoring/dataset.h"
#include "scoring/mip.h"

namespace scoring {

struct TrainConfig {
  int M = 1;
  int theta = 1;
  double lambda1 = 0.005;
  // Rows drawn from the training data before building the model; nullopt
  // or a value >= n uses every row.
  std::optional<std::size_t> sample_size = 300;
  std::uint64_t seed = 0;
  MipConfig mip;
};

struct SolverStats {
  std::string status;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  std::int64_t nodes = 0;
  double seconds = 0.0;
};

struct CoefVector {
  std::string method;
  int M = 0;
  int theta = 0;
  double lambda1 = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> w;
  std::vector<int> z;
  SolverStats solver;
  // Rows actually used for fitting (after subsampling).
  std::size_t rows_used = 0;

  // Throws kInternal if |w| > M, an ungated coefficient, or sum z > theta.
  void check(const BinaryDataset& data) const;
  std::vector<int> integer_w() const;
};

nlohmann::json coef_to_json(const CoefVector& coef);
CoefVector coef_from_json(const nlohmann::json& doc);

// Column indices of each variable family in the model.
struct VariableMap {
  std::vector<int> v, w, w_plus, w_minus, z;
  std::vector<int> pair_rows;
  int cardinality_row = -1;
};

struct BaucModel {
  MipModel mip;
  VariableMap vars;
};

BaucModel build_bauc_model(const PairDiffSet& pairs,
                           const std::vector<std::vector<int>>& groups,
                           const TrainConfig& cfg, bool integral_w);

// (1 / (n+ n-)) sum_k weight_k [d_k . w + 1]_+ + lambda1 ||w||_1.
double bauc_objective(std::span<const double> w, const PairDiffSet& pairs,
                      double lambda1);

// Rows the trainer fits on: a seeded subsample when sample_size < n.
BinaryDataset training_rows(const BinaryDataset& data, const TrainConfig& cfg);

CoefVector train_bauc_integer(const BinaryDataset& data, const TrainConfig& cfg);
CoefVector train_bauc_rounding(const BinaryDataset& data, const TrainConfig& cfg);

// Keeps the groups supported by w, at most theta of them by largest |w|
// mass (ties: larger real mass, then lower index); zeroes the others.
std::vector<int> gate_groups(std::vector<double>& w,
                             const std::vector<std::vector<int>>& groups,
                             int theta,
                             std::span<const double> tie_mass = {});

}  // namespace scoring

#endif  // SCORING_TRAINER_H_
