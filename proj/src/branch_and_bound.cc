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

// LP-relaxation branch-and-bound.
//
// Nodes are kept in a best-bound queue. After each branching the search
// dives into the lower child while the upper child waits in the queue, so
// incumbents appear early and the bound still advances on the best node.
// Every node stores its bound changes relative to the root and the basis of
// its parent; child relaxations re-solve from that basis with the dual
// simplex.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "scoring/error.h"
#include "scoring/mip.h"

namespace scoring {

const char* mip_status_name(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal:
      return "optimal";
    case MipStatus::kFeasible:
      return "feasible";
    case MipStatus::kInfeasible:
      return "infeasible";
    case MipStatus::kTimeLimit:
      return "time_limit";
  }
  return "unknown";
}

int MipModel::add_variable(double lower, double upper, double cost, VarType kind,
                           std::string name) {
  const int j = lp.add_variable(lower, upper, cost, std::move(name));
  type.push_back(kind);
  priority.push_back(kind == VarType::kBinary ? 1 : 0);
  return j;
}

void MipModel::validate() const {
  lp.validate();
  const int n = lp.num_variables();
  if (static_cast<int>(type.size()) != n || static_cast<int>(priority.size()) != n) {
    fail(ErrorKind::kInput, "mip model: integrality or priority marks do not cover all variables");
  }
  for (int j = 0; j < n; ++j) {
    if (type[j] == VarType::kBinary && (lp.lower(j) < 0.0 || lp.upper(j) > 1.0)) {
      fail(ErrorKind::kInput, "mip model: binary variable " + std::to_string(j) +
                                  " has bounds outside [0, 1]");
    }
  }
  if (layout) {
    const auto in_range = [n](const std::vector<int>& ids) {
      return std::all_of(ids.begin(), ids.end(), [n](int j) { return j >= 0 && j < n; });
    };
    if (!in_range(layout->w) || !in_range(layout->w_plus) || !in_range(layout->w_minus) ||
        !in_range(layout->z) || !in_range(layout->v) ||
        layout->pair_rows.size() != layout->v.size() ||
        layout->group_of.size() != layout->w.size()) {
      fail(ErrorKind::kInput, "mip model: scorecard layout is inconsistent");
    }
  }
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return lp::kInfinity;
  if (!std::isfinite(bound)) return lp::kInfinity;
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

namespace {

bool integral_at(const MipModel& model, const std::vector<double>& x, double tol) {
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.is_integral(j) && std::abs(x[j] - std::round(x[j])) > tol) return false;
  }
  return true;
}

bool acceptable(const MipModel& model, const std::vector<double>& x, double feas_tol,
                double int_tol) {
  return model.lp.max_violation(x) <= feas_tol && integral_at(model, x, int_tol);
}

// Recomputes the auxiliary variables of a scorecard point from w.
void recompute_scorecard(const MipModel& model, std::vector<double>& x) {
  const ScorecardLayout& lay = *model.layout;
  for (std::size_t j = 0; j < lay.w.size(); ++j) {
    const double w = x[lay.w[j]];
    x[lay.w_plus[j]] = std::max(0.0, w);
    x[lay.w_minus[j]] = std::max(0.0, -w);
  }
  for (std::size_t k = 0; k < lay.v.size(); ++k) {
    const int row = lay.pair_rows[k];
    const int v = lay.v[k];
    auto cols = model.lp.row_columns(row);
    auto vals = model.lp.row_values(row);
    double rest = 0, coef = 0;
    for (std::size_t t = 0; t < cols.size(); ++t) {
      if (cols[t] == v) coef = vals[t];
      else rest += vals[t] * x[cols[t]];
    }
    // coef * v + rest >= rhs with coef > 0.
    x[v] = std::max(model.lp.lower(v), (model.lp.rhs(row) - rest) / coef);
  }
}

struct BoundChange {
  int var;
  double lower, upper;
};

struct Node {
  std::vector<BoundChange> changes;
  std::shared_ptr<const lp::Basis> basis;
  double bound;
  std::int64_t id;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

}  // namespace

std::optional<std::vector<double>> rounding_heuristic(const std::vector<double>& x,
                                                      const MipModel& model,
                                                      double feasibility_tol) {
  std::vector<double> r = x;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (!model.is_integral(j)) continue;
    r[j] = std::clamp(std::round(r[j]), model.lp.lower(j), model.lp.upper(j));
  }
  if (model.layout) {
    const ScorecardLayout& lay = *model.layout;
    const int q = static_cast<int>(lay.z.size());
    std::vector<double> mass(q, 0.0);
    for (std::size_t j = 0; j < lay.w.size(); ++j) {
      mass[lay.group_of[j]] += std::abs(r[lay.w[j]]);
    }
    std::vector<int> order(q);
    for (int s = 0; s < q; ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return mass[a] > mass[b]; });
    std::vector<char> keep(q, 0);
    for (int t = 0; t < std::min(q, lay.theta); ++t) {
      if (mass[order[t]] > 0) keep[order[t]] = 1;
    }
    for (int s = 0; s < q; ++s) r[lay.z[s]] = keep[s] ? 1.0 : 0.0;
    for (std::size_t j = 0; j < lay.w.size(); ++j) {
      if (!keep[lay.group_of[j]]) r[lay.w[j]] = 0.0;
    }
    recompute_scorecard(model, r);
  }
  if (!acceptable(model, r, feasibility_tol, 1e-9)) return std::nullopt;
  return r;
}

MipSolution solve_mip(const MipModel& model, const MipConfig& config) {
  model.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(config.time_limit_seconds));
  const int n = model.num_variables();

  lp::LpConfig lp_config = config.lp;
  lp_config.deadline = deadline;
  lp::SimplexSolver solver(model.lp, lp_config);

  MipSolution out;
  double incumbent = lp::kInfinity;
  const double feas_tol = lp_config.feasibility_tol * 10;

  auto offer = [&](const std::vector<double>& x) {
    const double obj = model.lp.objective(x);
    if (obj < incumbent) {
      incumbent = obj;
      out.x = x;
      out.has_incumbent = true;
    }
  };
  auto prune_threshold = [&]() {
    if (!std::isfinite(incumbent)) return lp::kInfinity;
    return incumbent - std::max(config.abs_gap, config.rel_gap * std::max(1.0, std::abs(incumbent)));
  };

  // Branching candidate: highest priority, then most fractional, then index.
  auto choose_branch = [&](const std::vector<double>& x) {
    int best = -1;
    int best_priority = std::numeric_limits<int>::min();
    double best_score = -1;
    for (int j = 0; j < n; ++j) {
      if (!model.is_integral(j)) continue;
      const double f = x[j] - std::floor(x[j]);
      const double score = std::min(f, 1.0 - f);
      if (score <= config.integer_tol) continue;
      const int pr = model.priority[j];
      if (pr > best_priority || (pr == best_priority && score > best_score)) {
        best = j;
        best_priority = pr;
        best_score = score;
      }
    }
    return best;
  };

  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder>
      open;
  std::int64_t next_id = 0;
  auto root = std::make_shared<Node>();
  root->bound = -lp::kInfinity;
  root->id = next_id++;

  std::vector<int> touched;  // variables whose bounds differ from the root
  double best_bound = -lp::kInfinity;
  bool limit_hit = false;
  bool root_infeasible = false;
  std::shared_ptr<Node> current = root;

  // Smallest bound among nodes discarded by the gap test rather than by
  // infeasibility; they still limit what the final bound may claim.
  double pruned_floor = lp::kInfinity;
  auto global_bound = [&](double current_bound) {
    double b = std::min(current_bound, pruned_floor);
    if (!open.empty()) b = std::min(b, open.top()->bound);
    return std::min(b, incumbent);
  };
  auto record = [&](double current_bound) {
    best_bound = std::max(best_bound, global_bound(current_bound));
    out.bound_trace.push_back(best_bound);
    out.incumbent_trace.push_back(incumbent);
    if (config.log && config.log_interval > 0 && out.nodes % config.log_interval == 0) {
      *config.log << "node=" << out.nodes << " bound=" << best_bound
                  << " incumbent=" << incumbent
                  << " gap=" << relative_gap(incumbent, best_bound) << '\n';
    }
  };

  while (true) {
    if (!current) {
      // Drop queued nodes the incumbent has made irrelevant.
      while (!open.empty() && open.top()->bound >= prune_threshold()) {
        pruned_floor = std::min(pruned_floor, open.top()->bound);
        open.pop();
      }
      if (open.empty()) break;
      if (std::isfinite(incumbent) &&
          (relative_gap(incumbent, open.top()->bound) <= config.rel_gap ||
           incumbent - open.top()->bound <= config.abs_gap)) {
        pruned_floor = std::min(pruned_floor, open.top()->bound);
        break;
      }
      current = open.top();
      open.pop();
    }
    if (out.nodes >= config.node_limit) {
      out.node_limit_hit = true;
      limit_hit = true;
      open.push(current);
      break;
    }
    if (Clock::now() > deadline) {
      limit_hit = true;
      open.push(current);
      break;
    }

    // Load this node's bounds.
    for (int j : touched) solver.set_bounds(j, model.lp.lower(j), model.lp.upper(j));
    touched.clear();
    for (const BoundChange& c : current->changes) {
      solver.set_bounds(c.var, c.lower, c.upper);
      touched.push_back(c.var);
    }
    const lp::LpSolution rel =
        solver.solve(config.warm_start && current->basis ? current->basis.get() : nullptr);
    ++out.nodes;
    out.lp_iterations += rel.iterations;

    if (rel.status == lp::LpStatus::kIterationLimit) {
      limit_hit = true;
      open.push(current);
      break;
    }
    if (rel.status == lp::LpStatus::kUnbounded) {
      fail(ErrorKind::kSolver, "mip relaxation is unbounded");
    }
    if (rel.status == lp::LpStatus::kInfeasible) {
      if (current == root) root_infeasible = true;
      current.reset();
      record(lp::kInfinity);
      if (root_infeasible) break;
      continue;
    }

    const double node_bound = std::max(rel.objective, current->bound);
    if (node_bound >= prune_threshold()) {
      pruned_floor = std::min(pruned_floor, node_bound);
      current.reset();
      record(lp::kInfinity);
      continue;
    }

    if (integral_at(model, rel.x, config.integer_tol)) {
      std::vector<double> snapped = rel.x;
      for (int j = 0; j < n; ++j) {
        if (model.is_integral(j)) snapped[j] = std::round(snapped[j]);
      }
      if (model.layout) recompute_scorecard(model, snapped);
      if (acceptable(model, snapped, feas_tol, 1e-9)) offer(snapped);
      else offer(rel.x);
      current.reset();
      record(lp::kInfinity);
      continue;
    }

    if (auto h = rounding_heuristic(rel.x, model, feas_tol)) offer(*h);
    if (node_bound >= prune_threshold()) {
      pruned_floor = std::min(pruned_floor, node_bound);
      current.reset();
      record(lp::kInfinity);
      continue;
    }

    const int j = choose_branch(rel.x);
    const double value = rel.x[j];
    auto basis = std::make_shared<const lp::Basis>(rel.basis);
    double lo = model.lp.lower(j), hi = model.lp.upper(j);
    for (const BoundChange& c : current->changes) {
      if (c.var == j) {
        lo = c.lower;
        hi = c.upper;
      }
    }
    auto down = std::make_shared<Node>();
    down->changes = current->changes;
    down->changes.push_back({j, lo, std::floor(value)});
    down->basis = basis;
    down->bound = node_bound;
    down->id = next_id++;
    auto up = std::make_shared<Node>();
    up->changes = std::move(current->changes);
    up->changes.push_back({j, std::ceil(value), hi});
    up->basis = basis;
    up->bound = node_bound;
    up->id = next_id++;
    open.push(up);
    current = down;
    record(node_bound);
  }

  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  out.objective = incumbent;
  if (root_infeasible) {
    out.status = MipStatus::kInfeasible;
    out.bound = lp::kInfinity;
    return out;
  }
  if (!limit_hit) {
    if (!out.has_incumbent) {
      out.status = MipStatus::kInfeasible;
      out.bound = lp::kInfinity;
      return out;
    }
    out.status = MipStatus::kOptimal;
    out.bound = std::max(best_bound, global_bound(lp::kInfinity));
    out.gap = relative_gap(incumbent, out.bound);
    return out;
  }
  out.bound = std::max(best_bound, global_bound(lp::kInfinity));
  out.gap = relative_gap(incumbent, out.bound);
  if (out.has_incumbent && out.gap <= config.rel_gap) out.status = MipStatus::kOptimal;
  else if (out.has_incumbent && !out.node_limit_hit) out.status = MipStatus::kTimeLimit;
  else if (out.has_incumbent) out.status = MipStatus::kFeasible;
  else out.status = MipStatus::kTimeLimit;
  return out;
}

}  // namespace scoring
