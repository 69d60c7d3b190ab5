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

#include "scoring/trainer.h"

#include <algorithm>
#include <cmath>

#include "scoring/baselines.h"
#include "scoring/error.h"

namespace scoring {

void CoefVector::check(const BinaryDataset& data) const {
  if (w.size() != data.p() || z.size() != data.q()) {
    fail(ErrorKind::kInternal, "coefficient vector does not match the dataset shape");
  }
  int used = 0;
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (z[s] != 0 && z[s] != 1) fail(ErrorKind::kInternal, "z entry is not binary");
    used += z[s];
  }
  if (used > theta) fail(ErrorKind::kInternal, "more than theta questions selected");
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (std::abs(w[j]) > M + 1e-9) fail(ErrorKind::kInternal, "|w_j| exceeds M");
    if (w[j] != 0.0 && z[data.group_of(j)] == 0) {
      fail(ErrorKind::kInternal, "nonzero coefficient in an unselected question");
    }
  }
}

std::vector<int> CoefVector::integer_w() const {
  std::vector<int> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    out[j] = static_cast<int>(std::lround(w[j]));
    if (std::abs(w[j] - out[j]) > 1e-6) {
      fail(ErrorKind::kInternal, "coefficient " + std::to_string(j) + " is not integral");
    }
  }
  return out;
}

nlohmann::json coef_to_json(const CoefVector& c) {
  nlohmann::json doc;
  doc["method"] = c.method;
  doc["M"] = c.M;
  doc["theta"] = c.theta;
  doc["lambda1"] = c.lambda1;
  doc["seed"] = c.seed;
  doc["w"] = c.w;
  doc["z"] = c.z;
  doc["rows_used"] = c.rows_used;
  doc["solver"] = {{"status", c.solver.status},   {"objective", c.solver.objective},
                   {"bound", c.solver.bound},     {"gap", c.solver.gap},
                   {"nodes", c.solver.nodes},     {"seconds", c.solver.seconds}};
  return doc;
}

CoefVector coef_from_json(const nlohmann::json& doc) {
  try {
    CoefVector c;
    c.method = doc.at("method").get<std::string>();
    c.M = doc.at("M").get<int>();
    c.theta = doc.at("theta").get<int>();
    c.lambda1 = doc.at("lambda1").get<double>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.w = doc.at("w").get<std::vector<double>>();
    c.z = doc.at("z").get<std::vector<int>>();
    c.rows_used = doc.value("rows_used", std::size_t{0});
    const auto& s = doc.at("solver");
    c.solver.status = s.at("status").get<std::string>();
    c.solver.objective = s.value("objective", 0.0);
    c.solver.bound = s.value("bound", 0.0);
    c.solver.gap = s.value("gap", 0.0);
    c.solver.nodes = s.value("nodes", std::int64_t{0});
    c.solver.seconds = s.value("seconds", 0.0);
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("malformed coefficient JSON: ") + e.what());
  }
}

BaucModel build_bauc_model(const PairDiffSet& pairs,
                           const std::vector<std::vector<int>>& groups,
                           const TrainConfig& cfg, bool integral_w) {
  const int p = static_cast<int>(pairs.p);
  const int q = static_cast<int>(groups.size());
  if (pairs.size() == 0) fail(ErrorKind::kInput, "cannot build a model from an empty pair set");
  if (cfg.M < 1) fail(ErrorKind::kConfig, "M must be at least 1");
  if (cfg.theta < 1 || cfg.theta > q) {
    fail(ErrorKind::kConfig, "theta must lie in [1, q] (q = " + std::to_string(q) + ")");
  }
  if (cfg.lambda1 < 0) fail(ErrorKind::kConfig, "lambda1 must be nonnegative");

  BaucModel out;
  MipModel& m = out.mip;
  VariableMap& vars = out.vars;
  const double scale = 1.0 / (static_cast<double>(pairs.n_pos) * pairs.n_neg);
  const double big_m = cfg.M;

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    vars.v.push_back(m.add_variable(0, lp::kInfinity, pairs.weights[k] * scale,
                                    VarType::kContinuous, "v" + std::to_string(k)));
  }
  for (int j = 0; j < p; ++j) {
    vars.w.push_back(m.add_variable(-big_m, big_m, 0.0,
                                    integral_w ? VarType::kInteger : VarType::kContinuous,
                                    "w" + std::to_string(j)));
  }
  for (int j = 0; j < p; ++j) {
    vars.w_plus.push_back(m.add_variable(0, lp::kInfinity, cfg.lambda1, VarType::kContinuous,
                                         "wp" + std::to_string(j)));
  }
  for (int j = 0; j < p; ++j) {
    vars.w_minus.push_back(m.add_variable(0, lp::kInfinity, cfg.lambda1, VarType::kContinuous,
                                          "wm" + std::to_string(j)));
  }
  for (int s = 0; s < q; ++s) {
    vars.z.push_back(m.add_variable(0, 1, 0.0, VarType::kBinary, "z" + std::to_string(s)));
  }

  std::vector<int> cols;
  std::vector<double> vals;
  // v_k - d_k . w >= 1
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    cols.assign(1, vars.v[k]);
    vals.assign(1, 1.0);
    const auto d = pairs.diff(k);
    for (int j = 0; j < p; ++j) {
      if (d[j] == 0) continue;
      cols.push_back(vars.w[j]);
      vals.push_back(-static_cast<double>(d[j]));
    }
    vars.pair_rows.push_back(
        m.lp.add_row(cols, vals, lp::RowSense::kGreaterEqual, 1.0, "pair" + std::to_string(k)));
  }
  // w_j - w+_j + w-_j = 0
  for (int j = 0; j < p; ++j) {
    const int c[3] = {vars.w[j], vars.w_plus[j], vars.w_minus[j]};
    const double a[3] = {1.0, -1.0, 1.0};
    m.lp.add_row(c, a, lp::RowSense::kEqual, 0.0, "split" + std::to_string(j));
  }
  // -M z_s <= w_j <= M z_s
  std::vector<int> group_of(p, -1);
  for (int s = 0; s < q; ++s) {
    for (int j : groups[s]) {
      if (j < 0 || j >= p || group_of[j] != -1) {
        fail(ErrorKind::kInput, "groups do not partition the features");
      }
      group_of[j] = s;
      const int c[2] = {vars.w[j], vars.z[s]};
      const double up[2] = {1.0, -big_m};
      const double dn[2] = {1.0, big_m};
      m.lp.add_row(c, up, lp::RowSense::kLessEqual, 0.0, "gate_up" + std::to_string(j));
      m.lp.add_row(c, dn, lp::RowSense::kGreaterEqual, 0.0, "gate_dn" + std::to_string(j));
    }
  }
  if (std::find(group_of.begin(), group_of.end(), -1) != group_of.end()) {
    fail(ErrorKind::kInput, "groups do not cover every feature");
  }
  std::vector<double> ones(q, 1.0);
  vars.cardinality_row =
      m.lp.add_row(vars.z, ones, lp::RowSense::kLessEqual, cfg.theta, "cardinality");

  ScorecardLayout layout;
  layout.w = vars.w;
  layout.w_plus = vars.w_plus;
  layout.w_minus = vars.w_minus;
  layout.z = vars.z;
  layout.group_of = group_of;
  layout.v = vars.v;
  layout.pair_rows = vars.pair_rows;
  layout.theta = cfg.theta;
  m.layout = std::move(layout);
  return out;
}

double bauc_objective(std::span<const double> w, const PairDiffSet& pairs, double lambda1) {
  long double hinge = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto d = pairs.diff(k);
    double e = 1.0;
    for (std::size_t j = 0; j < pairs.p; ++j) e += d[j] * w[j];
    if (e > 0) hinge += pairs.weights[k] * e;
  }
  double l1 = 0;
  for (double x : w) l1 += std::abs(x);
  return static_cast<double>(hinge / (static_cast<long double>(pairs.n_pos) * pairs.n_neg)) +
         lambda1 * l1;
}

BinaryDataset training_rows(const BinaryDataset& data, const TrainConfig& cfg) {
  if (cfg.sample_size && *cfg.sample_size < data.n()) {
    return subsample(data, *cfg.sample_size, cfg.seed);
  }
  return data;
}

namespace {

SolverStats stats_of(const MipSolution& s) {
  SolverStats out;
  out.status = mip_status_name(s.status);
  out.objective = s.objective;
  out.bound = s.bound;
  out.gap = s.gap;
  out.nodes = s.nodes;
  out.seconds = s.seconds;
  return out;
}

MipSolution solve_checked(const BaucModel& model, const TrainConfig& cfg) {
  MipSolution sol = solve_mip(model.mip, cfg.mip);
  if (sol.status == MipStatus::kInfeasible) {
    // w = 0 with v = 1 is always feasible.
    fail(ErrorKind::kInternal, "scorecard model reported infeasible");
  }
  if (!sol.has_incumbent) {
    fail(ErrorKind::kSolver, "no feasible scorecard found within the time limit");
  }
  return sol;
}

}  // namespace

CoefVector train_bauc_integer(const BinaryDataset& data, const TrainConfig& cfg) {
  const BinaryDataset rows = training_rows(data, cfg);
  const PairDiffSet pairs = pair_differences(rows);
  const BaucModel model = build_bauc_model(pairs, data.groups(), cfg, true);
  const MipSolution sol = solve_checked(model, cfg);

  CoefVector c;
  c.method = "bauc-integer";
  c.M = cfg.M;
  c.theta = cfg.theta;
  c.lambda1 = cfg.lambda1;
  c.seed = cfg.seed;
  c.rows_used = rows.n();
  c.solver = stats_of(sol);
  for (int j : model.vars.w) c.w.push_back(std::round(sol.x[j]));
  for (int s : model.vars.z) c.z.push_back(static_cast<int>(std::lround(sol.x[s])));
  // Drop selections that carry no coefficient; they do not change the score.
  for (std::size_t s = 0; s < c.z.size(); ++s) {
    bool any = false;
    for (int j : data.groups()[s]) any = any || c.w[j] != 0.0;
    if (!any) c.z[s] = 0;
  }
  c.check(data);
  return c;
}

std::vector<int> gate_groups(std::vector<double>& w, const std::vector<std::vector<int>>& groups,
                             int theta, std::span<const double> tie_mass) {
  const int q = static_cast<int>(groups.size());
  std::vector<double> mass(q, 0.0), tie(q, 0.0);
  for (int s = 0; s < q; ++s) {
    for (int j : groups[s]) {
      mass[s] += std::abs(w[j]);
      if (!tie_mass.empty()) tie[s] += std::abs(tie_mass[j]);
    }
  }
  std::vector<int> order(q);
  for (int s = 0; s < q; ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (mass[a] != mass[b]) return mass[a] > mass[b];
    return tie[a] > tie[b];
  });
  std::vector<int> z(q, 0);
  for (int t = 0; t < std::min(theta, q); ++t) {
    if (mass[order[t]] > 0) z[order[t]] = 1;
  }
  for (int s = 0; s < q; ++s) {
    if (z[s]) continue;
    for (int j : groups[s]) w[j] = 0.0;
  }
  return z;
}

CoefVector train_bauc_rounding(const BinaryDataset& data, const TrainConfig& cfg) {
  const BinaryDataset rows = training_rows(data, cfg);
  const PairDiffSet pairs = pair_differences(rows);
  const BaucModel model = build_bauc_model(pairs, data.groups(), cfg, false);
  const MipSolution sol = solve_checked(model, cfg);

  std::vector<double> relaxed;
  for (int j : model.vars.w) relaxed.push_back(sol.x[j]);
  const std::vector<int> rounded = integerize(relaxed, cfg.M);

  CoefVector c;
  c.method = "bauc-rounding";
  c.M = cfg.M;
  c.theta = cfg.theta;
  c.lambda1 = cfg.lambda1;
  c.seed = cfg.seed;
  c.rows_used = rows.n();
  c.solver = stats_of(sol);
  c.w.assign(rounded.begin(), rounded.end());
  c.z = gate_groups(c.w, data.groups(), cfg.theta, relaxed);
  c.check(data);
  return c;
}

}  // namespace scoring
