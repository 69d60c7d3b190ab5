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

// Bounded revised simplex (primal and dual) with a kernel factorization.
//
// Every row i carries a logical r_i = a_i . x, so the working system is
// [A  -I] (x, r) = 0 with bounds on all n + m variables. Columns with a
// single nonzero (all logicals, and structural singletons such as hinge
// slacks) are "singleton" columns. In any basis the basic singletons cover
// distinct rows; the remaining basic columns and uncovered rows form a small
// square kernel F that is factored densely. With B permuted as
//
//     [ D  E ]   rows covered by singletons
//     [ 0  F ]   kernel rows
//
// a solve with B costs one kernel solve plus a sweep over the kernel
// columns. Models built from pairwise hinge terms have thousands of rows
// but kernels no larger than the number of coefficient variables.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "scoring/error.h"
#include "scoring/lp.h"

namespace scoring::lp {

class SimplexEngine {
 public:
  SimplexEngine(const LpModel& model, LpConfig config);

  const LpModel& model() const { return model_; }
  LpConfig& config() { return config_; }
  void set_bounds(int j, double lower, double upper) {
    lo_[j] = lower;
    hi_[j] = upper;
  }
  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return hi_[j]; }

  LpSolution solve(const Basis* warm_start);

 private:
  enum class Outcome { kOptimal, kInfeasible, kUnbounded, kLimit, kRetry };

  // --- setup -------------------------------------------------------------
  void crash_basis();
  void load_basis(const Basis& basis);
  void normalize_nonbasic(int j);
  void place_nonbasic(int j, double near);

  // --- factorization -----------------------------------------------------
  bool refactor();  // returns true if the basis had to be repaired
  void factor_kernel();
  template <typename F>
  void for_column(int j, F&& f) const;
  void ftran(std::vector<double>& rhs, std::vector<double>& out);
  void ftran_column(int j, std::vector<double>& out);
  void btran(const std::vector<double>& c_slot, std::vector<double>& y);
  void btran_unit(int slot);  // fills rho_ / rho_index_
  void pivot_row();           // alpha_row_ over nonbasics from rho_

  // --- state recomputation ----------------------------------------------
  void compute_primal();
  void compute_duals(const std::vector<double>& c);
  double infeasibility(int j) const;
  double total_infeasibility() const;
  bool dual_feasible() const;

  // --- algorithms --------------------------------------------------------
  Outcome primal(bool phase_one);
  Outcome dual();
  Outcome run_rounds();
  void perturb_rows();
  bool absorb_drift();
  int relief_for(int row, int k, double delta, int entering) const;
  bool out_of_budget();
  void make_basic(int entering, int leaving_slot, VarStatus leaving_status,
                  double leaving_value);

  LpModel model_;
  LpConfig config_;
  int n_ = 0, m_ = 0, total_ = 0;

  std::vector<double> cost_, lo_, hi_;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<int> single_row_;       // row of a singleton column, else -1
  std::vector<double> single_val_;
  std::vector<std::vector<int>> row_singletons_;  // structural singletons

  std::vector<VarStatus> status_;
  std::vector<double> x_, d_;
  std::vector<int> basic_var_;  // slot (row) -> variable
  std::vector<int> slot_of_;    // variable -> slot, -1 if nonbasic

  std::vector<int> owner_;  // row -> basic singleton covering it, or -1
  std::vector<int> kernel_rows_, kernel_vars_;
  std::vector<int> kernel_row_pos_, kernel_var_pos_;
  Eigen::MatrixXd kernel_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;

  // Scratch.
  std::vector<double> work_m_, work_m2_, alpha_col_, y_;
  std::vector<double> rho_;
  std::vector<int> rho_index_;
  std::vector<double> alpha_row_;
  std::vector<int> alpha_touched_;
  std::vector<char> alpha_mark_;

  // Long-step breakpoints of the current primal ratio test.
  struct Breakpoint {
    double t;
    int slot;
    int relief;   // nonbasic singleton of the same row that takes over
    double dslope;
    double bound;
    VarStatus status;
  };
  std::vector<Breakpoint> breaks_;
  std::vector<char> skip_;
  std::vector<int> prev_kernel_vars_, prev_kernel_rows_;
  bool lu_valid_ = false;

  std::int64_t iterations_ = 0;
  bool deadline_hit_ = false;
  int since_recompute_ = 0;
  // Bounds as given to solve(); lo_/hi_ may be widened while it runs.
  std::vector<double> saved_lo_, saved_hi_;
  bool bounds_changed_ = false;
  bool shifting_allowed_ = true;
};

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

SimplexEngine::SimplexEngine(const LpModel& model, LpConfig config)
    : model_(model), config_(config) {
  model_.validate();
  n_ = model_.num_variables();
  m_ = model_.num_rows();
  total_ = n_ + m_;
  cost_.assign(total_, 0.0);
  lo_.resize(total_);
  hi_.resize(total_);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = model_.cost(j);
    lo_[j] = model_.lower(j);
    hi_[j] = model_.upper(j);
  }
  for (int i = 0; i < m_; ++i) {
    const double rhs = model_.rhs(i);
    switch (model_.sense(i)) {
      case RowSense::kLessEqual:
        lo_[n_ + i] = -kInfinity;
        hi_[n_ + i] = rhs;
        break;
      case RowSense::kGreaterEqual:
        lo_[n_ + i] = rhs;
        hi_[n_ + i] = kInfinity;
        break;
      case RowSense::kEqual:
        lo_[n_ + i] = hi_[n_ + i] = rhs;
        break;
    }
  }

  // Column-wise copy of A.
  std::vector<int> count(n_ + 1, 0);
  for (int i = 0; i < m_; ++i) {
    for (int j : model_.row_columns(i)) ++count[j + 1];
  }
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  col_row_.resize(col_start_[n_]);
  col_val_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    auto cols = model_.row_columns(i);
    auto vals = model_.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      col_row_[fill[cols[k]]] = i;
      col_val_[fill[cols[k]]] = vals[k];
      ++fill[cols[k]];
    }
  }

  single_row_.assign(total_, -1);
  single_val_.assign(total_, 0.0);
  row_singletons_.assign(m_, {});
  for (int j = 0; j < n_; ++j) {
    if (col_start_[j + 1] - col_start_[j] == 1) {
      single_row_[j] = col_row_[col_start_[j]];
      single_val_[j] = col_val_[col_start_[j]];
      row_singletons_[single_row_[j]].push_back(j);
    }
  }
  for (int i = 0; i < m_; ++i) {
    single_row_[n_ + i] = i;
    single_val_[n_ + i] = -1.0;
  }

  work_m_.assign(m_, 0.0);
  work_m2_.assign(m_, 0.0);
  alpha_col_.assign(m_, 0.0);
  y_.assign(m_, 0.0);
  rho_.assign(m_, 0.0);
  alpha_row_.assign(total_, 0.0);
  alpha_mark_.assign(total_, 0);
  owner_.assign(m_, -1);
  kernel_row_pos_.assign(m_, -1);
  kernel_var_pos_.assign(total_, -1);
  slot_of_.assign(total_, -1);
  basic_var_.assign(m_, -1);
  skip_.assign(m_, 0);
}

template <typename F>
void SimplexEngine::for_column(int j, F&& f) const {
  if (j >= n_) {
    f(j - n_, -1.0);
    return;
  }
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
}

// ---------------------------------------------------------------------------
// Basis setup
// ---------------------------------------------------------------------------

void SimplexEngine::place_nonbasic(int j, double near) {
  const double lo = lo_[j], hi = hi_[j];
  if (finite(lo) && finite(hi)) {
    if (std::abs(near - lo) <= std::abs(hi - near)) {
      status_[j] = VarStatus::kAtLower;
      x_[j] = lo;
    } else {
      status_[j] = VarStatus::kAtUpper;
      x_[j] = hi;
    }
  } else if (finite(lo)) {
    status_[j] = VarStatus::kAtLower;
    x_[j] = lo;
  } else if (finite(hi)) {
    status_[j] = VarStatus::kAtUpper;
    x_[j] = hi;
  } else {
    status_[j] = VarStatus::kAtZero;
    x_[j] = 0.0;
  }
}

void SimplexEngine::normalize_nonbasic(int j) {
  switch (status_[j]) {
    case VarStatus::kBasic:
      return;
    case VarStatus::kAtLower:
      if (finite(lo_[j])) {
        x_[j] = lo_[j];
        return;
      }
      break;
    case VarStatus::kAtUpper:
      if (finite(hi_[j])) {
        x_[j] = hi_[j];
        return;
      }
      break;
    case VarStatus::kAtZero:
      if (lo_[j] < 0.0 && hi_[j] > 0.0) {
        x_[j] = 0.0;
        return;
      }
      break;
  }
  place_nonbasic(j, 0.0);
}

void SimplexEngine::crash_basis() {
  status_.assign(total_, VarStatus::kAtLower);
  x_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] < 0.0 && hi_[j] > 0.0) {
      status_[j] = VarStatus::kAtZero;
      x_[j] = 0.0;
    } else {
      place_nonbasic(j, 0.0);
    }
  }
  for (int i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::kBasic;

  // Repair violated rows with a structural singleton of that row.
  for (int i = 0; i < m_; ++i) {
    const int logical = n_ + i;
    const double act = model_.activity(i, std::span<const double>(x_.data(), n_));
    double target;
    if (act < lo_[logical] - config_.feasibility_tol) target = lo_[logical];
    else if (act > hi_[logical] + config_.feasibility_tol) target = hi_[logical];
    else continue;
    for (int j : row_singletons_[i]) {
      if (status_[j] == VarStatus::kBasic) continue;
      const double value = x_[j] + (target - act) / single_val_[j];
      if (value < lo_[j] - config_.feasibility_tol ||
          value > hi_[j] + config_.feasibility_tol) {
        continue;
      }
      status_[j] = VarStatus::kBasic;
      x_[j] = value;
      status_[logical] = target == lo_[logical] ? VarStatus::kAtLower
                                                : VarStatus::kAtUpper;
      x_[logical] = target;
      break;
    }
  }
}

void SimplexEngine::load_basis(const Basis& basis) {
  status_ = basis.status;
  x_.assign(total_, 0.0);
  int basics = 0;
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic) ++basics;
    else normalize_nonbasic(j);
  }
  if (basics != m_) {
    crash_basis();
  }
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

bool SimplexEngine::refactor() {
  bool repaired = false;
  std::fill(owner_.begin(), owner_.end(), -1);
  kernel_vars_.clear();
  for (int j = 0; j < total_; ++j) {
    if (status_[j] != VarStatus::kBasic) continue;
    const int r = single_row_[j];
    if (r >= 0) {
      if (owner_[r] == -1) {
        owner_[r] = j;
      } else {
        place_nonbasic(j, x_[j]);  // two singletons on one row
        repaired = true;
      }
    } else if (col_start_[j + 1] == col_start_[j]) {
      place_nonbasic(j, x_[j]);  // empty column
      repaired = true;
    } else {
      kernel_vars_.push_back(j);
    }
  }
  kernel_rows_.clear();
  for (int i = 0; i < m_; ++i) {
    if (owner_[i] == -1) kernel_rows_.push_back(i);
  }
  if (kernel_vars_.size() > kernel_rows_.size()) {
    fail(ErrorKind::kInternal, "simplex basis has more columns than rows");
  }

  const bool same_kernel = lu_valid_ && kernel_vars_ == prev_kernel_vars_ &&
                           kernel_rows_ == prev_kernel_rows_;
  for (int attempt = 0; attempt < 2 && !same_kernel; ++attempt) {
    const int rows = static_cast<int>(kernel_rows_.size());
    const int cols = static_cast<int>(kernel_vars_.size());
    std::fill(kernel_row_pos_.begin(), kernel_row_pos_.end(), -1);
    for (int a = 0; a < rows; ++a) kernel_row_pos_[kernel_rows_[a]] = a;
    for (int j : kernel_vars_) kernel_var_pos_[j] = -1;
    // kernel_var_pos_ is only meaningful for current kernel members.
    std::fill(kernel_var_pos_.begin(), kernel_var_pos_.end(), -1);
    for (int b = 0; b < cols; ++b) kernel_var_pos_[kernel_vars_[b]] = b;

    kernel_.setZero(rows, cols);
    for (int a = 0; a < rows; ++a) {
      const int i = kernel_rows_[a];
      auto idx = model_.row_columns(i);
      auto val = model_.row_values(i);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const int b = kernel_var_pos_[idx[k]];
        if (b >= 0) kernel_(a, b) = val[k];
      }
    }

    bool ok = rows == cols;
    if (ok && rows > 0) {
      lu_.compute(kernel_);
      const auto& lu = lu_.matrixLU();
      double dmax = 0, dmin = std::numeric_limits<double>::infinity();
      for (int a = 0; a < rows; ++a) {
        dmax = std::max(dmax, std::abs(lu(a, a)));
        dmin = std::min(dmin, std::abs(lu(a, a)));
      }
      ok = dmin > kSingularRatio * std::max(1.0, dmax);
    }
    if (ok) break;
    if (attempt == 1) fail(ErrorKind::kInternal, "basis repair failed");

    // Rank-revealing pass: keep a maximal independent set of kernel columns
    // and cover the remaining kernel rows with their logicals.
    repaired = true;
    Eigen::FullPivLU<Eigen::MatrixXd> full(kernel_);
    full.setThreshold(kSingularRatio);
    const int rank = static_cast<int>(full.rank());
    const auto& p = full.permutationP().indices();
    const auto& q = full.permutationQ().indices();
    std::vector<int> keep_vars;
    for (int b = 0; b < rank; ++b) keep_vars.push_back(kernel_vars_[q[b]]);
    for (int b = rank; b < cols; ++b) {
      const int j = kernel_vars_[q[b]];
      place_nonbasic(j, x_[j]);
    }
    std::vector<int> keep_rows;
    for (int a = 0; a < rows; ++a) {
      const int i = kernel_rows_[a];
      if (p[a] < rank) {
        keep_rows.push_back(i);
      } else {
        const int logical = n_ + i;
        status_[logical] = VarStatus::kBasic;
        owner_[i] = logical;
      }
    }
    std::sort(keep_vars.begin(), keep_vars.end());
    kernel_vars_ = std::move(keep_vars);
    kernel_rows_ = std::move(keep_rows);
  }

  prev_kernel_vars_ = kernel_vars_;
  prev_kernel_rows_ = kernel_rows_;
  lu_valid_ = true;

  std::fill(slot_of_.begin(), slot_of_.end(), -1);
  for (int i = 0; i < m_; ++i) {
    if (owner_[i] >= 0) {
      basic_var_[i] = owner_[i];
      slot_of_[owner_[i]] = i;
    }
  }
  for (std::size_t b = 0; b < kernel_vars_.size(); ++b) {
    basic_var_[kernel_rows_[b]] = kernel_vars_[b];
    slot_of_[kernel_vars_[b]] = kernel_rows_[b];
  }
  return repaired;
}

// Solves B x = rhs. rhs is indexed by row and is clobbered; out by slot.
void SimplexEngine::ftran(std::vector<double>& rhs, std::vector<double>& out) {
  const int t = static_cast<int>(kernel_vars_.size());
  Eigen::VectorXd u;
  if (t > 0) {
    Eigen::VectorXd b(t);
    for (int a = 0; a < t; ++a) b[a] = rhs[kernel_rows_[a]];
    u = lu_.solve(b);
    for (int c = 0; c < t; ++c) {
      const double uc = u[c];
      if (uc == 0.0) continue;
      for_column(kernel_vars_[c], [&](int i, double v) { rhs[i] -= v * uc; });
    }
  }
  for (int i = 0; i < m_; ++i) {
    const int j = owner_[i];
    if (j >= 0) out[i] = rhs[i] / single_val_[j];
  }
  for (int c = 0; c < t; ++c) out[kernel_rows_[c]] = u[c];
}

void SimplexEngine::ftran_column(int j, std::vector<double>& out) {
  std::fill(work_m_.begin(), work_m_.end(), 0.0);
  for_column(j, [&](int i, double v) { work_m_[i] += v; });
  ftran(work_m_, out);
}

// Solves B^T y = c where c is indexed by slot; y by row.
void SimplexEngine::btran(const std::vector<double>& c_slot, std::vector<double>& y) {
  for (int i = 0; i < m_; ++i) {
    const int j = owner_[i];
    y[i] = j >= 0 ? c_slot[i] / single_val_[j] : 0.0;
  }
  const int t = static_cast<int>(kernel_vars_.size());
  if (t == 0) return;
  Eigen::VectorXd rhs(t);
  for (int b = 0; b < t; ++b) {
    double g = 0;
    for_column(kernel_vars_[b], [&](int i, double v) {
      if (owner_[i] >= 0) g += v * y[i];
    });
    rhs[b] = c_slot[kernel_rows_[b]] - g;
  }
  Eigen::VectorXd y2 = lu_.transpose().solve(rhs);
  for (int a = 0; a < t; ++a) y[kernel_rows_[a]] = y2[a];
}

void SimplexEngine::btran_unit(int slot) {
  for (int i : rho_index_) rho_[i] = 0.0;
  rho_index_.clear();
  const int t = static_cast<int>(kernel_vars_.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(t);
  if (owner_[slot] >= 0) {
    const double yr = 1.0 / single_val_[owner_[slot]];
    rho_[slot] = yr;
    rho_index_.push_back(slot);
    if (t > 0) {
      auto idx = model_.row_columns(slot);
      auto val = model_.row_values(slot);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const int b = kernel_var_pos_[idx[k]];
        if (b >= 0 && status_[idx[k]] == VarStatus::kBasic) rhs[b] -= val[k] * yr;
      }
    }
  } else {
    rhs[kernel_row_pos_[slot]] = 1.0;
  }
  if (t == 0) return;
  Eigen::VectorXd y2 = lu_.transpose().solve(rhs);
  for (int a = 0; a < t; ++a) {
    if (y2[a] == 0.0) continue;
    rho_[kernel_rows_[a]] = y2[a];
    rho_index_.push_back(kernel_rows_[a]);
  }
}

void SimplexEngine::pivot_row() {
  for (int j : alpha_touched_) {
    alpha_row_[j] = 0.0;
    alpha_mark_[j] = 0;
  }
  alpha_touched_.clear();
  auto touch = [&](int j, double v) {
    if (status_[j] == VarStatus::kBasic) return;
    if (!alpha_mark_[j]) {
      alpha_mark_[j] = 1;
      alpha_touched_.push_back(j);
    }
    alpha_row_[j] += v;
  };
  for (int i : rho_index_) {
    const double r = rho_[i];
    auto idx = model_.row_columns(i);
    auto val = model_.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) touch(idx[k], r * val[k]);
    touch(n_ + i, -r);
  }
  std::sort(alpha_touched_.begin(), alpha_touched_.end());
}

// ---------------------------------------------------------------------------
// Recomputation
// ---------------------------------------------------------------------------

void SimplexEngine::compute_primal() {
  std::fill(work_m2_.begin(), work_m2_.end(), 0.0);
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    const double xj = x_[j];
    for_column(j, [&](int i, double v) { work_m2_[i] -= v * xj; });
  }
  ftran(work_m2_, alpha_col_);
  for (int i = 0; i < m_; ++i) x_[basic_var_[i]] = alpha_col_[i];
  since_recompute_ = 0;
}

void SimplexEngine::compute_duals(const std::vector<double>& c) {
  std::vector<double> c_slot(m_);
  for (int i = 0; i < m_; ++i) c_slot[i] = c[basic_var_[i]];
  btran(c_slot, y_);
  d_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::kBasic) continue;
    double s = c[j];
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) s -= y_[col_row_[k]] * col_val_[k];
    d_[j] = s;
  }
  for (int i = 0; i < m_; ++i) {
    if (status_[n_ + i] != VarStatus::kBasic) d_[n_ + i] = c[n_ + i] + y_[i];
  }
}

double SimplexEngine::infeasibility(int j) const {
  if (x_[j] < lo_[j] - config_.feasibility_tol) return lo_[j] - x_[j];
  if (x_[j] > hi_[j] + config_.feasibility_tol) return x_[j] - hi_[j];
  return 0.0;
}

double SimplexEngine::total_infeasibility() const {
  double s = 0;
  for (int i = 0; i < m_; ++i) s += infeasibility(basic_var_[i]);
  return s;
}

bool SimplexEngine::dual_feasible() const {
  const double tol = std::max(config_.optimality_tol, 1e-7);
  for (int j = 0; j < total_; ++j) {
    if (lo_[j] == hi_[j]) continue;
    switch (status_[j]) {
      case VarStatus::kBasic:
        break;
      case VarStatus::kAtLower:
        if (d_[j] < -tol) return false;
        break;
      case VarStatus::kAtUpper:
        if (d_[j] > tol) return false;
        break;
      case VarStatus::kAtZero:
        if (std::abs(d_[j]) > tol) return false;
        break;
    }
  }
  return true;
}

bool SimplexEngine::out_of_budget() {
  if (iterations_ >= config_.iteration_limit) return true;
  if (config_.deadline && (iterations_ & 31) == 0 &&
      std::chrono::steady_clock::now() > *config_.deadline) {
    deadline_hit_ = true;
    return true;
  }
  return false;
}

void SimplexEngine::make_basic(int entering, int leaving_slot,
                               VarStatus leaving_status, double leaving_value) {
  const int leaving = basic_var_[leaving_slot];
  status_[leaving] = leaving_status;
  x_[leaving] = leaving_value;
  d_[entering] = 0.0;
  status_[entering] = VarStatus::kBasic;
  ++iterations_;
  ++since_recompute_;
  // A repaired basis invalidates the incremental x and d updates; the
  // caller's loop recomputes both on its next pass.
  if (refactor()) since_recompute_ = kRecomputeInterval;
}

// ---------------------------------------------------------------------------
// Primal simplex
// ---------------------------------------------------------------------------

SimplexEngine::Outcome SimplexEngine::primal(bool phase_one) {
  const double ftol = config_.feasibility_tol;
  const double dtol = config_.optimality_tol;
  std::vector<double> phase_cost(total_, 0.0);
  int degenerate = 0;
  bool bland = false;
  bool fresh = true;

  auto set_phase_costs = [&]() {
    std::fill(phase_cost.begin(), phase_cost.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      const int j = basic_var_[i];
      if (x_[j] < lo_[j] - ftol) phase_cost[j] = -1.0;
      else if (x_[j] > hi_[j] + ftol) phase_cost[j] = 1.0;
    }
  };

  if (phase_one) {
    set_phase_costs();
    compute_duals(phase_cost);
  } else {
    compute_duals(cost_);
  }

  while (true) {
    if (out_of_budget()) return Outcome::kLimit;
    if (since_recompute_ >= kRecomputeInterval) {
      compute_primal();
      if (!phase_one) {
        if (!absorb_drift()) return Outcome::kRetry;
        compute_duals(cost_);
      }
      fresh = true;
    }
    if (phase_one) {
      if (total_infeasibility() == 0.0) return Outcome::kOptimal;
      set_phase_costs();
      compute_duals(phase_cost);
    }

    // Pricing.
    int q = -1;
    double best = 0;
    for (int j = 0; j < total_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::kBasic || lo_[j] == hi_[j]) continue;
      double score = 0;
      if (s == VarStatus::kAtLower) score = -d_[j];
      else if (s == VarStatus::kAtUpper) score = d_[j];
      else score = std::abs(d_[j]);
      if (score <= dtol) continue;
      if (bland) {
        q = j;
        break;
      }
      if (score > best) {
        best = score;
        q = j;
      }
    }
    if (q < 0) {
      if (!fresh) {
        compute_primal();
        if (phase_one) {
          set_phase_costs();
          compute_duals(phase_cost);
        } else {
          compute_duals(cost_);
          if (!absorb_drift()) return Outcome::kRetry;
        }
        fresh = true;
        continue;
      }
      if (phase_one) {
        return total_infeasibility() > 0.0 ? Outcome::kInfeasible : Outcome::kOptimal;
      }
      return Outcome::kOptimal;
    }

    const double dir = status_[q] == VarStatus::kAtLower   ? 1.0
                       : status_[q] == VarStatus::kAtUpper ? -1.0
                       : (d_[q] < 0 ? 1.0 : -1.0);
    ftran_column(q, alpha_col_);

    // Ratio test. Basic at slot i moves at rate delta_i = -dir * alpha_i.
    double theta_flip = dir > 0 ? hi_[q] - x_[q] : x_[q] - lo_[q];
    int leave = -1;
    double theta = kInfinity;
    VarStatus leave_status = VarStatus::kAtLower;
    double leave_value = 0;

    auto limit_of = [&](int i, double& bound, VarStatus& st) -> double {
      const double delta = -dir * alpha_col_[i];
      if (std::abs(delta) <= config_.pivot_tol) return kInfinity;
      const int k = basic_var_[i];
      const double xk = x_[k];
      const bool below = xk < lo_[k] - ftol;
      const bool above = xk > hi_[k] + ftol;
      if (phase_one && (below || above)) {
        if (below && delta > 0) {
          bound = lo_[k];
          st = VarStatus::kAtLower;
          return (lo_[k] - xk) / delta;
        }
        if (above && delta < 0) {
          bound = hi_[k];
          st = VarStatus::kAtUpper;
          return (xk - hi_[k]) / -delta;
        }
        return kInfinity;
      }
      if (delta < 0 && finite(lo_[k])) {
        bound = lo_[k];
        st = VarStatus::kAtLower;
        return std::max(0.0, (xk - lo_[k]) / -delta);
      }
      if (delta > 0 && finite(hi_[k])) {
        bound = hi_[k];
        st = VarStatus::kAtUpper;
        return std::max(0.0, (hi_[k] - xk) / delta);
      }
      return kInfinity;
    };

    // Long step: a basic singleton that reaches its bound can hand its row
    // to another singleton of that row, which then moves without limit.
    // Such breakpoints are passed while the objective keeps falling.
    for (const auto& b : breaks_) skip_[b.slot] = 0;
    breaks_.clear();
    if (!phase_one && !bland) {
      for (int i = 0; i < m_; ++i) {
        const double delta = -dir * alpha_col_[i];
        if (std::abs(delta) <= config_.pivot_tol) continue;
        const int k = basic_var_[i];
        if (single_row_[k] != i) continue;
        const double bound = delta < 0 ? lo_[k] : hi_[k];
        if (!finite(bound)) continue;
        const int j = relief_for(i, k, delta, q);
        if (j < 0) continue;
        const double rate = delta * single_val_[k] / single_val_[j];
        breaks_.push_back({std::max(0.0, (bound - x_[k]) / delta), i, j,
                           -cost_[k] * delta + cost_[j] * rate, bound,
                           delta < 0 ? VarStatus::kAtLower : VarStatus::kAtUpper});
        skip_[i] = 1;
      }
    }

    if (bland || phase_one) {
      for (int i = 0; i < m_; ++i) {
        double bound = 0;
        VarStatus st = VarStatus::kAtLower;
        const double lim = limit_of(i, bound, st);
        if (lim == kInfinity) continue;
        const bool better =
            lim < theta - 1e-12 ||
            (lim <= theta + 1e-12 && leave >= 0 &&
             (bland ? basic_var_[i] < basic_var_[leave]
                    : std::abs(alpha_col_[i]) > std::abs(alpha_col_[leave])));
        if (leave < 0 || better) {
          theta = lim;
          leave = i;
          leave_status = st;
          leave_value = bound;
        }
      }
    } else {
      // Harris two-pass: a relaxed bound, then the largest pivot under it.
      double relaxed = kInfinity;
      for (int i = 0; i < m_; ++i) {
        const double delta = -dir * alpha_col_[i];
        if (std::abs(delta) <= config_.pivot_tol || skip_[i]) continue;
        const int k = basic_var_[i];
        if (delta < 0 && finite(lo_[k])) {
          relaxed = std::min(relaxed, std::max(0.0, x_[k] - lo_[k] + ftol) / -delta);
        } else if (delta > 0 && finite(hi_[k])) {
          relaxed = std::min(relaxed, std::max(0.0, hi_[k] - x_[k] + ftol) / delta);
        }
      }
      if (relaxed < kInfinity) {
        double best_pivot = 0;
        for (int i = 0; i < m_; ++i) {
          if (skip_[i]) continue;
          double bound = 0;
          VarStatus st = VarStatus::kAtLower;
          const double lim = limit_of(i, bound, st);
          if (lim > relaxed) continue;
          if (std::abs(alpha_col_[i]) > best_pivot) {
            best_pivot = std::abs(alpha_col_[i]);
            theta = lim;
            leave = i;
            leave_status = st;
            leave_value = bound;
          }
        }
      }
    }

    std::size_t passed = 0;
    bool flip = theta_flip <= theta;
    if (!breaks_.empty()) {
      std::sort(breaks_.begin(), breaks_.end(), [](const Breakpoint& a, const Breakpoint& b) {
        return a.t < b.t || (a.t == b.t && a.slot < b.slot);
      });
      double slope = dir * d_[q];
      const double limit = std::min(theta, theta_flip);
      for (const auto& b : breaks_) {
        if (b.t > limit) break;
        if (slope + b.dslope < -dtol) {
          slope += b.dslope;
          ++passed;
          continue;
        }
        leave = b.slot;
        theta = b.t;
        leave_status = b.status;
        leave_value = b.bound;
        flip = false;
        break;
      }
    }
    if (passed > 0) {
      for (std::size_t a = 0; a < passed; ++a) {
        const int k = basic_var_[breaks_[a].slot];
        status_[k] = breaks_[a].status;
        x_[k] = breaks_[a].bound;
        status_[breaks_[a].relief] = VarStatus::kBasic;
      }
      const double d_q = d_[q];
      const double step = flip ? theta_flip : theta;
      if (flip) {
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        ++iterations_;
        refactor();
      } else {
        x_[q] += dir * theta;
        make_basic(q, leave, leave_status, leave_value);
      }
      if (step * std::abs(d_q) <= kDegenerateStep) {
        if (++degenerate >= config_.degenerate_stall_limit) bland = true;
      } else {
        degenerate = 0;
      }
      compute_primal();
      if (!absorb_drift()) return Outcome::kRetry;
      compute_duals(cost_);
      fresh = true;
      continue;
    }

    if (flip) {
      if (theta_flip == kInfinity) {
        return phase_one ? Outcome::kRetry : Outcome::kUnbounded;
      }
      // Bound flip, basis unchanged.
      for (int i = 0; i < m_; ++i) {
        if (alpha_col_[i] != 0.0) x_[basic_var_[i]] -= theta_flip * dir * alpha_col_[i];
      }
      x_[q] = dir > 0 ? hi_[q] : lo_[q];
      status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      ++iterations_;
      ++since_recompute_;
      fresh = false;
      degenerate = 0;
      continue;
    }

    const double alpha_rq = alpha_col_[leave];
    const double d_q = d_[q];
    if (!phase_one) {
      btran_unit(leave);
      pivot_row();
    }
    for (int i = 0; i < m_; ++i) {
      if (alpha_col_[i] != 0.0) x_[basic_var_[i]] -= theta * dir * alpha_col_[i];
    }
    x_[q] += dir * theta;
    if (!phase_one) {
      const double theta_d = d_[q] / alpha_rq;
      for (int j : alpha_touched_) d_[j] -= theta_d * alpha_row_[j];
      d_[basic_var_[leave]] = -theta_d;
    }

    if (theta * std::abs(d_q) <= kDegenerateStep) {
      if (++degenerate >= config_.degenerate_stall_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    make_basic(q, leave, leave_status, leave_value);
    fresh = false;
  }
}

// ---------------------------------------------------------------------------
// Dual simplex
// ---------------------------------------------------------------------------

SimplexEngine::Outcome SimplexEngine::dual() {
  const double dtol = config_.optimality_tol;
  compute_duals(cost_);
  int degenerate = 0;
  bool bland = false;
  bool fresh = true;

  while (true) {
    if (out_of_budget()) return Outcome::kLimit;
    if (since_recompute_ >= kRecomputeInterval) {
      compute_primal();
      compute_duals(cost_);
      fresh = true;
      if (!dual_feasible()) return Outcome::kRetry;
    }

    // Leaving row: largest bound violation (Bland: lowest variable index).
    int r = -1;
    double worst = 0;
    for (int i = 0; i < m_; ++i) {
      const int k = basic_var_[i];
      const double v = infeasibility(k);
      if (v <= 0) continue;
      if (bland) {
        if (r < 0 || k < basic_var_[r]) r = i;
      } else if (v > worst) {
        worst = v;
        r = i;
      }
    }
    if (r < 0) {
      if (!fresh) {
        compute_primal();
        compute_duals(cost_);
        fresh = true;
        if (!dual_feasible()) return Outcome::kRetry;
        continue;
      }
      return Outcome::kOptimal;
    }

    const int k = basic_var_[r];
    const bool to_upper = x_[k] > hi_[k];
    const double target = to_upper ? hi_[k] : lo_[k];
    const double s = to_upper ? 1.0 : -1.0;

    btran_unit(r);
    pivot_row();

    auto eligible = [&](int j) {
      if (lo_[j] == hi_[j]) return 0.0;
      const double a = alpha_row_[j];
      if (std::abs(a) <= config_.pivot_tol) return 0.0;
      switch (status_[j]) {
        case VarStatus::kAtLower:
          return s * a > 0 ? a : 0.0;
        case VarStatus::kAtUpper:
          return s * a < 0 ? a : 0.0;
        case VarStatus::kAtZero:
          return a;
        case VarStatus::kBasic:
          return 0.0;
      }
      return 0.0;
    };

    int q = -1;
    if (bland) {
      double theta = kInfinity;
      for (int j : alpha_touched_) {
        const double a = eligible(j);
        if (a == 0.0) continue;
        const double ratio = std::abs(d_[j]) / std::abs(a);
        if (ratio < theta - 1e-12) {
          theta = ratio;
          q = j;
        }
      }
    } else {
      double relaxed = kInfinity;
      for (int j : alpha_touched_) {
        const double a = eligible(j);
        if (a == 0.0) continue;
        relaxed = std::min(relaxed, (std::abs(d_[j]) + dtol) / std::abs(a));
      }
      double best_pivot = 0;
      for (int j : alpha_touched_) {
        const double a = eligible(j);
        if (a == 0.0) continue;
        if (std::abs(d_[j]) / std::abs(a) > relaxed) continue;
        if (std::abs(a) > best_pivot) {
          best_pivot = std::abs(a);
          q = j;
        }
      }
    }
    if (q < 0) {
      if (!fresh) {
        compute_primal();
        compute_duals(cost_);
        fresh = true;
        continue;
      }
      return Outcome::kInfeasible;
    }

    const double alpha_rq = alpha_row_[q];
    double theta_d = d_[q] / alpha_rq;
    // Keep dual signs exact: the entering reduced cost may carry noise.
    if (status_[q] == VarStatus::kAtLower && d_[q] < 0) theta_d = 0;
    if (status_[q] == VarStatus::kAtUpper && d_[q] > 0) theta_d = 0;
    for (int j : alpha_touched_) d_[j] -= theta_d * alpha_row_[j];
    d_[k] = -theta_d;

    ftran_column(q, alpha_col_);
    const double theta_p = (x_[k] - target) / alpha_col_[r];
    for (int i = 0; i < m_; ++i) {
      if (alpha_col_[i] != 0.0) x_[basic_var_[i]] -= theta_p * alpha_col_[i];
    }
    x_[q] += theta_p;

    if (std::abs(theta_d) <= kDegenerateStep) {
      if (++degenerate >= config_.degenerate_stall_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    make_basic(q, r, to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower, target);
    fresh = false;
  }
}

// ---------------------------------------------------------------------------

SimplexEngine::Outcome SimplexEngine::run_rounds() {
  Outcome outcome = Outcome::kRetry;
  for (int round = 0; round < 20 && outcome == Outcome::kRetry; ++round) {
    if (total_infeasibility() == 0.0) {
      outcome = primal(false);
    } else if (dual_feasible()) {
      outcome = dual();
      if (outcome == Outcome::kOptimal) {
        compute_duals(cost_);
        if (!dual_feasible()) outcome = Outcome::kRetry;
      }
    } else {
      outcome = primal(true);
      if (outcome == Outcome::kOptimal) outcome = Outcome::kRetry;
    }
    if (outcome == Outcome::kRetry) {
      refactor();
      compute_primal();
      compute_duals(cost_);
    }
  }
  return outcome;
}

// A nonbasic singleton of `row` that can replace basic k when k stops at
// its bound; it must be free to move in the direction k was pushing.
int SimplexEngine::relief_for(int row, int k, double delta, int entering) const {
  auto fits = [&](int j) {
    if (j == k || j == entering || status_[j] == VarStatus::kBasic || lo_[j] == hi_[j]) return false;
    const double rate = delta * single_val_[k] / single_val_[j];
    return (rate > 0 && status_[j] == VarStatus::kAtLower && !finite(hi_[j])) ||
           (rate < 0 && status_[j] == VarStatus::kAtUpper && !finite(lo_[j]));
  };
  if (fits(n_ + row)) return n_ + row;
  for (int j : row_singletons_[row]) {
    if (fits(j)) return j;
  }
  return -1;
}

// Small violations left by the Harris ratio test are absorbed by moving the
// violated bound onto the value; solve() restores the bounds afterwards.
bool SimplexEngine::absorb_drift() {
  for (int i = 0; i < m_; ++i) {
    const int k = basic_var_[i];
    const double v = infeasibility(k);
    if (v == 0.0) continue;
    if (!shifting_allowed_ || v > kMaxBoundShift) return false;
    if (x_[k] < lo_[k]) lo_[k] = x_[k];
    else hi_[k] = x_[k];
    bounds_changed_ = true;
  }
  return true;
}

void SimplexEngine::perturb_rows() {
  bounds_changed_ = true;
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  auto next = [&h]() {
    h += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < m_; ++i) {
    const int j = n_ + i;
    const double u = next();
    if (lo_[j] == hi_[j]) continue;
    if (finite(lo_[j])) lo_[j] -= kPerturbScale * (1.0 + std::abs(lo_[j])) * (0.5 + 0.5 * u);
    if (finite(hi_[j])) hi_[j] += kPerturbScale * (1.0 + std::abs(hi_[j])) * (0.5 + 0.5 * u);
  }
  for (int j = n_; j < total_; ++j) normalize_nonbasic(j);
  compute_primal();
}

LpSolution SimplexEngine::solve(const Basis* warm_start) {
  iterations_ = 0;
  deadline_hit_ = false;
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] > hi_[j]) {
      LpSolution out;
      out.status = LpStatus::kInfeasible;
      return out;
    }
  }
  if (warm_start && static_cast<int>(warm_start->status.size()) == total_) {
    load_basis(*warm_start);
  } else {
    crash_basis();
  }
  refactor();
  compute_primal();
  compute_duals(cost_);

  // Widening row bounds keeps the start feasible and breaks the ties that
  // integer pair data creates between hinge breakpoints.
  saved_lo_ = lo_;
  saved_hi_ = hi_;
  bounds_changed_ = false;
  shifting_allowed_ = true;
  if (total_infeasibility() == 0.0 || !dual_feasible()) perturb_rows();
  Outcome outcome = run_rounds();
  for (int pass = 0; pass < 3 && bounds_changed_; ++pass) {
    lo_ = saved_lo_;
    hi_ = saved_hi_;
    bounds_changed_ = false;
    if (outcome != Outcome::kOptimal) break;
    shifting_allowed_ = pass < 2;
    for (int j = 0; j < total_; ++j) normalize_nonbasic(j);
    compute_primal();
    compute_duals(cost_);
    outcome = run_rounds();
  }
  if (bounds_changed_) {
    lo_ = saved_lo_;
    hi_ = saved_hi_;
    for (int j = 0; j < total_; ++j) normalize_nonbasic(j);
    compute_primal();
  }

  LpSolution out;
  out.iterations = iterations_;
  out.deadline_hit = deadline_hit_;
  switch (outcome) {
    case Outcome::kOptimal:
      out.status = LpStatus::kOptimal;
      break;
    case Outcome::kInfeasible:
      out.status = LpStatus::kInfeasible;
      break;
    case Outcome::kUnbounded:
      out.status = LpStatus::kUnbounded;
      break;
    case Outcome::kLimit:
    case Outcome::kRetry:
      out.status = LpStatus::kIterationLimit;
      break;
  }
  out.x.assign(x_.begin(), x_.begin() + n_);
  out.objective = 0;
  for (int j = 0; j < n_; ++j) out.objective += cost_[j] * out.x[j];
  compute_duals(cost_);
  out.row_duals = y_;
  out.reduced_costs.assign(d_.begin(), d_.begin() + n_);
  out.basis.status = status_;
  return out;
}

// ---------------------------------------------------------------------------

SimplexSolver::SimplexSolver(const LpModel& model, LpConfig config)
    : engine_(std::make_unique<SimplexEngine>(model, config)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

const LpModel& SimplexSolver::model() const { return engine_->model(); }
LpConfig& SimplexSolver::config() { return engine_->config(); }
void SimplexSolver::set_bounds(int j, double lower, double upper) {
  engine_->set_bounds(j, lower, upper);
}
double SimplexSolver::lower(int j) const { return engine_->lower(j); }
double SimplexSolver::upper(int j) const { return engine_->upper(j); }
LpSolution SimplexSolver::solve(const Basis* warm_start) {
  return engine_->solve(warm_start);
}

LpSolution solve_lp(const LpModel& model, const LpConfig& config,
                    const Basis* warm_start) {
  SimplexSolver solver(model, config);
  return solver.solve(warm_start);
}

}  // namespace scoring::lp
