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

#ifndef SCORING_MIP_H_
#define SCORING_MIP_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "scoring/lp.h"

namespace scoring {

enum class VarType { kContinuous, kInteger, kBinary };

// Where the scorecard variables live inside a model. When present, the
// rounding heuristic repairs group gating and recomputes the hinge and
// split variables instead of only rounding.
struct ScorecardLayout {
  std::vector<int> w;          // per feature
  std::vector<int> w_plus;     // per feature
  std::vector<int> w_minus;    // per feature
  std::vector<int> z;          // per group
  std::vector<int> group_of;   // feature -> group
  std::vector<int> v;          // per pair
  std::vector<int> pair_rows;  // row holding v[k] >= d_k . w + 1
  int theta = 0;
};

struct MipModel {
  lp::LpModel lp;
  std::vector<VarType> type;
  // Larger values branch first. Defaults: binaries 1, integers 0.
  std::vector<int> priority;
  std::optional<ScorecardLayout> layout;

  int add_variable(double lower, double upper, double cost, VarType kind,
                   std::string name = {});
  int num_variables() const { return lp.num_variables(); }
  bool is_integral(int j) const { return type[j] != VarType::kContinuous; }

  // Throws kInput on size mismatches or binaries with bounds outside [0, 1].
  void validate() const;
};

struct MipConfig {
  double rel_gap = 1e-4;
  double abs_gap = 1e-9;
  double time_limit_seconds = 300.0;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double integer_tol = 1e-6;
  // Progress line every this many nodes; 0 disables.
  std::int64_t log_interval = 0;
  std::ostream* log = nullptr;
  bool warm_start = true;
  lp::LpConfig lp;
};

enum class MipStatus { kOptimal, kFeasible, kInfeasible, kTimeLimit };
const char* mip_status_name(MipStatus status);

struct MipSolution {
  MipStatus status = MipStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = lp::kInfinity;
  double bound = -lp::kInfinity;
  double gap = lp::kInfinity;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double seconds = 0.0;
  bool node_limit_hit = false;
  // Global bound and incumbent value after every node, in order.
  std::vector<double> bound_trace;
  std::vector<double> incumbent_trace;
};

// (incumbent - bound) / max(1, |incumbent|); infinite without an incumbent.
double relative_gap(double incumbent, double bound);

MipSolution solve_mip(const MipModel& model, const MipConfig& config = {});

// Rounds integral variables of x and, for scorecard models, keeps the
// theta groups with the largest |w| mass, zeroes the rest and recomputes
// v, w+ and w-. Returns nothing if the result violates the model.
std::optional<std::vector<double>> rounding_heuristic(
    const std::vector<double>& x, const MipModel& model,
    double feasibility_tol = lp::kFeasibilityTol);

}  // namespace scoring

#endif  // SCORING_MIP_H_
