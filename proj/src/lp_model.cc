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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scoring/error.h"
#include "scoring/lp.h"

namespace scoring::lp {

const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

int LpModel::add_variable(double lower, double upper, double cost,
                          std::string name) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  if (name.empty()) name = "x" + std::to_string(cost_.size() - 1);
  var_names_.push_back(std::move(name));
  return static_cast<int>(cost_.size()) - 1;
}

int LpModel::add_row(std::span<const int> columns, std::span<const double> values,
                     RowSense sense, double rhs, std::string name) {
  if (columns.size() != values.size()) {
    fail(ErrorKind::kInternal, "row column and value lists differ in length");
  }
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (values[k] == 0.0) continue;
    row_index_.push_back(columns[k]);
    row_value_.push_back(values[k]);
  }
  row_start_.push_back(static_cast<int>(row_index_.size()));
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  if (name.empty()) name = "r" + std::to_string(rhs_.size() - 1);
  row_names_.push_back(std::move(name));
  return static_cast<int>(rhs_.size()) - 1;
}

void LpModel::set_bounds(int j, double lower, double upper) {
  lower_[j] = lower;
  upper_[j] = upper;
}

double LpModel::activity(int i, std::span<const double> x) const {
  double s = 0;
  for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
    s += row_value_[k] * x[row_index_[k]];
  }
  return s;
}

double LpModel::objective(std::span<const double> x) const {
  double s = 0;
  for (int j = 0; j < num_variables(); ++j) s += cost_[j] * x[j];
  return s;
}

double LpModel::max_violation(std::span<const double> x) const {
  double worst = 0;
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max({worst, lower_[j] - x[j], x[j] - upper_[j]});
  }
  for (int i = 0; i < num_rows(); ++i) {
    const double a = activity(i, x);
    switch (sense_[i]) {
      case RowSense::kLessEqual:
        worst = std::max(worst, a - rhs_[i]);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, rhs_[i] - a);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(a - rhs_[i]));
        break;
    }
  }
  return worst;
}

void LpModel::validate() const {
  const int n = num_variables();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(cost_[j])) {
      fail(ErrorKind::kConfig, "cost of " + var_names_[j] + " is not finite");
    }
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j] ||
        lower_[j] == kInfinity || upper_[j] == -kInfinity) {
      fail(ErrorKind::kConfig, "bounds of " + var_names_[j] + " are inconsistent");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rhs_[i])) {
      fail(ErrorKind::kConfig, "rhs of " + row_names_[i] + " is not finite");
    }
    for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      if (row_index_[k] < 0 || row_index_[k] >= n) {
        fail(ErrorKind::kConfig, "row " + row_names_[i] + " has a column out of range");
      }
      if (!std::isfinite(row_value_[k])) {
        fail(ErrorKind::kConfig, "row " + row_names_[i] + " has a non-finite entry");
      }
    }
  }
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_term(std::ostringstream& out, double coef, const std::string& name,
                 bool first) {
  if (coef < 0) out << (first ? "- " : " - ");
  else out << (first ? "" : " + ");
  out << num(std::abs(coef)) << ' ' << name;
}

}  // namespace

std::string LpModel::to_lp_format() const {
  std::ostringstream out;
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < num_variables(); ++j) {
    if (cost_[j] == 0) continue;
    out << ' ';
    append_term(out, cost_[j], var_names_[j], first);
    first = false;
  }
  if (first) out << " 0 " << (num_variables() ? var_names_[0] : "x");
  out << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    out << ' ' << row_names_[i] << ": ";
    first = true;
    for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      append_term(out, row_value_[k], var_names_[row_index_[k]], first);
      first = false;
    }
    if (first) out << "0 " << var_names_[0];
    const char* op = sense_[i] == RowSense::kLessEqual      ? " <= "
                     : sense_[i] == RowSense::kGreaterEqual ? " >= "
                                                            : " = ";
    out << op << num(rhs_[i]) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < num_variables(); ++j) {
    const double lo = lower_[j], hi = upper_[j];
    out << ' ';
    if (lo == -kInfinity && hi == kInfinity) {
      out << var_names_[j] << " free\n";
      continue;
    }
    out << (lo == -kInfinity ? std::string("-inf") : num(lo)) << " <= "
        << var_names_[j] << " <= " << (hi == kInfinity ? std::string("+inf") : num(hi))
        << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace scoring::lp
