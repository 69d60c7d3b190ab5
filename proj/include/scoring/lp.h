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

#ifndef SCORING_LP_H_
#define SCORING_LP_H_

#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scoring/lp_tolerances.h"

namespace scoring::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

// min c.x  s.t.  rows (sparse, with sense and rhs), lower <= x <= upper.
class LpModel {
 public:
  int add_variable(double lower, double upper, double cost,
                   std::string name = {});
  int add_row(std::span<const int> columns, std::span<const double> values,
              RowSense sense, double rhs, std::string name = {});

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }

  double cost(int j) const { return cost_[j]; }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  void set_bounds(int j, double lower, double upper);
  void set_cost(int j, double cost) { cost_[j] = cost; }
  const std::string& variable_name(int j) const { return var_names_[j]; }

  RowSense sense(int i) const { return sense_[i]; }
  double rhs(int i) const { return rhs_[i]; }
  std::span<const int> row_columns(int i) const {
    return {row_index_.data() + row_start_[i],
            static_cast<std::size_t>(row_start_[i + 1] - row_start_[i])};
  }
  std::span<const double> row_values(int i) const {
    return {row_value_.data() + row_start_[i],
            static_cast<std::size_t>(row_start_[i + 1] - row_start_[i])};
  }
  const std::string& row_name(int i) const { return row_names_[i]; }

  // Row activity a_i . x.
  double activity(int i, std::span<const double> x) const;
  double objective(std::span<const double> x) const;
  // Largest bound or row violation of x.
  double max_violation(std::span<const double> x) const;

  // Throws if indices are out of range, lower > upper or a cost is not finite.
  void validate() const;

  // CPLEX-style LP text, for cross-checking with external solvers.
  std::string to_lp_format() const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::string> var_names_;
  std::vector<int> row_start_{0};
  std::vector<int> row_index_;
  std::vector<double> row_value_;
  std::vector<RowSense> sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
const char* lp_status_name(LpStatus status);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kAtZero };

// Status of every structural variable followed by every row logical.
struct Basis {
  std::vector<VarStatus> status;
};

struct LpConfig {
  double feasibility_tol = kFeasibilityTol;
  double optimality_tol = kOptimalityTol;
  double pivot_tol = kPivotTol;
  std::int64_t iteration_limit = kDefaultIterationLimit;
  int degenerate_stall_limit = kDegenerateStallLimit;
  // Solve stops with kIterationLimit when the clock passes this point.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  std::int64_t iterations = 0;
  bool deadline_hit = false;
  // Row duals y and structural reduced costs c - A^T y at the final basis.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  Basis basis;
};

class SimplexEngine;

// Bounded revised simplex over one model. Bounds can be changed between
// solves and the previous basis reused, which is how branch-and-bound
// re-solves child relaxations.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LpModel& model, LpConfig config = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  const LpModel& model() const;
  LpConfig& config();

  void set_bounds(int j, double lower, double upper);
  double lower(int j) const;
  double upper(int j) const;

  LpSolution solve(const Basis* warm_start = nullptr);

 private:
  std::unique_ptr<SimplexEngine> engine_;
};

LpSolution solve_lp(const LpModel& model, const LpConfig& config = {},
                    const Basis* warm_start = nullptr);

}  // namespace scoring::lp

#endif  // SCORING_LP_H_
