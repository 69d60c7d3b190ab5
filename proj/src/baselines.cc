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

#include "scoring/baselines.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>

#include "scoring/error.h"
#include "scoring/metrics.h"
#include "scoring/random.h"

namespace scoring {

namespace {

struct Design {
  Eigen::MatrixXd x;  // n x p
  Eigen::VectorXd y;  // +-1
};

Design design_of(const BinaryDataset& data) {
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto p = static_cast<Eigen::Index>(data.p());
  Design d{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) d.x(i, j) = data.at(i, j);
    d.y[i] = data.label(i);
  }
  return d;
}

void require_both_classes(const BinaryDataset& data, const char* what) {
  if (data.n_pos() == 0 || data.n_neg() == 0) {
    fail(ErrorKind::kInput, std::string(what) + " needs both classes in the data");
  }
}

// Smooth part of the penalized objective and its gradient.
struct Smooth {
  const Design& d;
  double ridge;  // lambda (1 - alpha)

  double value(const Eigen::VectorXd& w, double w0) const {
    const Eigen::VectorXd eta = (d.x * w).array() + w0;
    double s = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) s += logistic_loss(d.y[i] * eta[i]);
    return s / static_cast<double>(eta.size()) + 0.5 * ridge * w.squaredNorm();
  }

  double gradient(const Eigen::VectorXd& w, double w0, Eigen::VectorXd& gw, double& g0) const {
    const Eigen::VectorXd eta = (d.x * w).array() + w0;
    const double inv_n = 1.0 / static_cast<double>(eta.size());
    Eigen::VectorXd r(eta.size());
    double s = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double u = d.y[i] * eta[i];
      s += logistic_loss(u);
      r[i] = -d.y[i] * sigmoid(-u) * inv_n;
    }
    gw = d.x.transpose() * r + ridge * w;
    g0 = r.sum();
    return s * inv_n + 0.5 * ridge * w.squaredNorm();
  }
};

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double residual_at(const Eigen::VectorXd& w, const Eigen::VectorXd& gw, double g0, double l1) {
  double r = std::abs(g0);
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double v = w[j] != 0.0 ? std::abs(gw[j] + l1 * (w[j] > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(gw[j]) - l1);
    r = std::max(r, v);
  }
  return r;
}

std::vector<int> groups_of_features(const BinaryDataset& data, std::span<const int> features) {
  std::vector<int> g;
  for (int j : features) g.push_back(data.group_of(j));
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

std::vector<int> selected_groups(const BinaryDataset& data, std::span<const double> w) {
  std::vector<int> out;
  for (std::size_t s = 0; s < data.q(); ++s) {
    for (int j : data.groups()[s]) {
      if (w[j] != 0.0) {
        out.push_back(static_cast<int>(s));
        break;
      }
    }
  }
  return out;
}

double penalized_objective(const BinaryDataset& data, const DenseFit& fit) {
  const Design d = design_of(data);
  const Smooth f{d, fit.lambda * (1 - fit.alpha_mix)};
  const Eigen::Map<const Eigen::VectorXd> w(fit.w.data(), static_cast<Eigen::Index>(fit.w.size()));
  return f.value(w, fit.w0) + fit.lambda * fit.alpha_mix * w.lpNorm<1>();
}

double subgradient_residual(const BinaryDataset& data, const DenseFit& fit) {
  const Design d = design_of(data);
  const Smooth f{d, fit.lambda * (1 - fit.alpha_mix)};
  const Eigen::Map<const Eigen::VectorXd> wm(fit.w.data(), static_cast<Eigen::Index>(fit.w.size()));
  const Eigen::VectorXd w = wm;
  Eigen::VectorXd gw;
  double g0;
  f.gradient(w, fit.w0, gw, g0);
  return residual_at(w, gw, g0, fit.lambda * fit.alpha_mix);
}

DenseFit fit_penalized_logistic(const BinaryDataset& data, double lambda, double alpha_mix,
                                const LogisticOptions& options, const DenseFit* start) {
  require_both_classes(data, "penalized logistic regression");
  if (lambda < 0) fail(ErrorKind::kConfig, "lambda must be nonnegative");
  if (alpha_mix < 0 || alpha_mix > 1) fail(ErrorKind::kConfig, "alpha_mix must lie in [0, 1]");
  const Design d = design_of(data);
  const Eigen::Index p = d.x.cols();
  const double l1 = lambda * alpha_mix;
  const Smooth f{d, lambda * (1 - alpha_mix)};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  double x0 = 0.0;
  if (start) {
    if (static_cast<Eigen::Index>(start->w.size()) != p) {
      fail(ErrorKind::kInput, "warm start has the wrong dimension");
    }
    for (Eigen::Index j = 0; j < p; ++j) x[j] = start->w[j];
    x0 = start->w0;
  }
  auto total = [&](const Eigen::VectorXd& w, double w0) { return f.value(w, w0) + l1 * w.lpNorm<1>(); };

  // Lipschitz bound of the smooth gradient: mean squared row norm / 4.
  double mean_sq = 1.0;
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) mean_sq += d.x.row(i).squaredNorm() / d.x.rows();
  double lip = std::max(1e-8, 0.25 * mean_sq + f.ridge) * 0.125;

  Eigen::VectorXd yv = x, gw, xn(p), z(p);
  double y0 = x0, g0 = 0, z0 = 0;
  double fx = total(x, x0);
  double t = 1.0;

  DenseFit out;
  out.lambda = lambda;
  out.alpha_mix = alpha_mix;
  for (int it = 0; it < options.max_iterations; ++it) {
    // Convergence test at the current iterate.
    Eigen::VectorXd gx;
    double gx0;
    f.gradient(x, x0, gx, gx0);
    out.residual = residual_at(x, gx, gx0, l1);
    out.iterations = it;
    if (out.residual <= options.tolerance) {
      out.converged = true;
      break;
    }

    const double fy = f.gradient(yv, y0, gw, g0);
    lip *= 0.8;
    while (true) {
      for (Eigen::Index j = 0; j < p; ++j) z[j] = soft(yv[j] - gw[j] / lip, l1 / lip);
      z0 = y0 - g0 / lip;
      const Eigen::VectorXd dz = z - yv;
      const double dz0 = z0 - y0;
      const double model = fy + gw.dot(dz) + g0 * dz0 + 0.5 * lip * (dz.squaredNorm() + dz0 * dz0);
      if (f.value(z, z0) <= model + 1e-15 * std::abs(fy)) break;
      lip *= 2.0;
      if (lip > 1e18) break;
    }
    const double fz = total(z, z0);
    const double tn = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    const Eigen::VectorXd prev = x;
    const double prev0 = x0;
    if (fz <= fx) {
      x = z;
      x0 = z0;
      assert(!options.check_monotone || fz <= fx);
      fx = fz;
    }
    yv = x + (t / tn) * (z - x) + ((t - 1) / tn) * (x - prev);
    y0 = x0 + (t / tn) * (z0 - x0) + ((t - 1) / tn) * (x0 - prev0);
    t = tn;
    out.iterations = it + 1;
  }
  out.w.assign(x.data(), x.data() + p);
  out.w0 = x0;
  out.selected_groups = selected_groups(data, out.w);
  return out;
}

double lambda_max(const BinaryDataset& data, double alpha_mix) {
  require_both_classes(data, "lambda_max");
  if (alpha_mix <= 0) fail(ErrorKind::kConfig, "a regularization path needs alpha_mix > 0");
  const double w0 = std::log(static_cast<double>(data.n_pos()) / data.n_neg());
  const Design d = design_of(data);
  const Smooth f{d, 0.0};
  Eigen::VectorXd gw;
  double g0;
  f.gradient(Eigen::VectorXd::Zero(d.x.cols()), w0, gw, g0);
  return gw.cwiseAbs().maxCoeff() / alpha_mix;
}

std::vector<PathPoint> regularization_path(const BinaryDataset& data, double alpha_mix,
                                           const PathOptions& options) {
  if (options.points < 2) fail(ErrorKind::kConfig, "a path needs at least 2 points");
  const double top = lambda_max(data, alpha_mix);
  std::vector<PathPoint> path;
  const DenseFit* warm = nullptr;
  int over = 0;
  for (int k = 0; k < options.points && over < 3; ++k) {
    const double lam =
        top * std::pow(options.min_ratio, static_cast<double>(k) / (options.points - 1));
    PathPoint pt;
    pt.lambda = lam;
    pt.fit = fit_penalized_logistic(data, lam, alpha_mix, options.solver, warm);
    pt.selected_groups = static_cast<int>(pt.fit.selected_groups.size());
    over = options.stop_above > 0 && pt.selected_groups > options.stop_above ? over + 1 : 0;
    path.push_back(std::move(pt));
    warm = &path.back().fit;
  }
  return path;
}

int select_path_point(const std::vector<PathPoint>& path, int theta) {
  int best = -1;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const int c = path[k].selected_groups;
    if (c == 0 || c > theta) continue;
    if (best < 0 || c > path[best].selected_groups ||
        (c == path[best].selected_groups && path[k].lambda > path[best].lambda)) {
      best = static_cast<int>(k);
    }
  }
  return best;
}

DenseFit regularization_path_select(const BinaryDataset& data, int theta, double alpha_mix,
                                    const PathOptions& options,
                                    std::vector<PathPoint>* path_out) {
  if (theta < 1) fail(ErrorKind::kConfig, "theta must be at least 1");
  PathOptions po = options;
  if (po.stop_above <= 0) po.stop_above = theta;
  std::vector<PathPoint> path = regularization_path(data, alpha_mix, po);
  const int k = select_path_point(path, theta);
  DenseFit out;
  if (k < 0) {
    out = path.front().fit;
    std::fill(out.w.begin(), out.w.end(), 0.0);
    out.selected_groups.clear();
    out.empty_selection = true;
  } else {
    out = path[k].fit;
  }
  if (path_out) *path_out = std::move(path);
  return out;
}

DenseFit fit_logistic_subset(const BinaryDataset& data, std::span<const int> features,
                             int max_iterations, double ridge) {
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto k = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd a(n, k + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (Eigen::Index c = 0; c < k; ++c) a(i, c + 1) = data.at(i, features[c]);
    y[i] = data.label(i);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  auto objective = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = a * beta;
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) s += logistic_loss(y[i] * eta[i]);
    return s * inv_n + 0.5 * ridge * beta.tail(k).squaredNorm();
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k + 1);
  double obj = objective(beta);
  DenseFit out;
  out.alpha_mix = 0.0;
  out.lambda = ridge;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd eta = a * beta;
    Eigen::VectorXd r(n), h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid(-y[i] * eta[i]);
      r[i] = -y[i] * s * inv_n;
      h[i] = s * (1 - s) * inv_n;
    }
    Eigen::VectorXd g = a.transpose() * r;
    g.tail(k) += ridge * beta.tail(k);
    out.residual = g.cwiseAbs().maxCoeff();
    out.iterations = it;
    if (out.residual <= 1e-10) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd hess = a.transpose() * h.asDiagonal() * a;
    hess.diagonal().array() += ridge;
    const Eigen::VectorXd step = hess.ldlt().solve(-g);
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd trial = beta + scale * step;
      const double o = objective(trial);
      if (o <= obj) {
        improved = o < obj;
        beta = trial;
        obj = o;
        break;
      }
      scale *= 0.5;
    }
    out.iterations = it + 1;
    if (!improved) break;
  }
  out.w.assign(data.p(), 0.0);
  for (Eigen::Index c = 0; c < k; ++c) out.w[features[c]] = beta[c + 1];
  out.w0 = beta[0];
  out.selected_groups = groups_of_features(data, features);
  return out;
}

namespace {

struct InnerSplit {
  BinaryDataset train, validation;
  bool stratified = false;
};

InnerSplit inner_split(const BinaryDataset& data, double validation_fraction,
                       std::uint64_t seed) {
  const double fraction = 1.0 - validation_fraction;
  auto usable = [](const SplitPair& s) {
    return s.train.n_pos() > 0 && s.train.n_neg() > 0 && s.test.n_pos() > 0 &&
           s.test.n_neg() > 0;
  };
  SplitPair s = split(data, fraction, seed);
  if (usable(s)) return {std::move(s.train), std::move(s.test), false};
  s = stratified_split(data, fraction, Rng::derive(seed, 1));
  if (!usable(s)) {
    fail(ErrorKind::kInput, "validation split cannot hold both classes on both sides");
  }
  return {std::move(s.train), std::move(s.test), true};
}

double validation_auc(const InnerSplit& sp, std::span<const int> features,
                      const StepwiseOptions& options) {
  if (features.empty()) return 0.5;
  const DenseFit fit = fit_logistic_subset(sp.train, features, options.refit_iterations,
                                           options.ridge);
  return auc(score_sample(fit.w, sp.validation), TieMode::kHalf);
}

// Features of the given unit set (groups or variables).
std::vector<int> features_of(const BinaryDataset& data, const std::vector<int>& units,
                             StepGranularity g) {
  std::vector<int> f;
  if (g == StepGranularity::kVariable) {
    f = units;
  } else {
    for (int s : units) {
      for (int j : data.groups()[s]) f.push_back(j);
    }
  }
  std::sort(f.begin(), f.end());
  return f;
}

int group_count(const BinaryDataset& data, const std::vector<int>& units, StepGranularity g) {
  if (g == StepGranularity::kGroup) return static_cast<int>(units.size());
  return static_cast<int>(groups_of_features(data, units).size());
}

void check_stepwise(const BinaryDataset& data, int theta) {
  require_both_classes(data, "stepwise selection");
  if (theta < 1) fail(ErrorKind::kConfig, "theta must be at least 1");
  if (theta > static_cast<int>(data.q())) fail(ErrorKind::kConfig, "theta exceeds q");
}

}  // namespace

DenseFit forward_select(const BinaryDataset& data, int theta, std::uint64_t seed,
                        const StepwiseOptions& options, StepwiseTrace* trace) {
  check_stepwise(data, theta);
  const InnerSplit sp = inner_split(data, options.validation_fraction, seed);
  const StepGranularity g = options.granularity;
  const int units = static_cast<int>(g == StepGranularity::kGroup ? data.q() : data.p());
  StepwiseTrace local;
  local.stratified_fallback = sp.stratified;

  std::vector<int> chosen;
  double current = 0.5;
  while (true) {
    int best = -1;
    double best_auc = -1;
    for (int u = 0; u < units; ++u) {
      if (std::find(chosen.begin(), chosen.end(), u) != chosen.end()) continue;
      std::vector<int> cand = chosen;
      cand.push_back(u);
      if (group_count(data, cand, g) > theta) continue;
      const double a = validation_auc(sp, features_of(data, cand, g), options);
      if (a > best_auc) {
        best_auc = a;
        best = u;
      }
    }
    if (best < 0 || best_auc <= current) break;
    chosen.push_back(best);
    current = best_auc;
    local.order.push_back(best);
    local.val_auc.push_back(best_auc);
    if (g == StepGranularity::kGroup && static_cast<int>(chosen.size()) == theta) break;
  }

  DenseFit out;
  if (chosen.empty()) {
    out.w.assign(data.p(), 0.0);
    out.w0 = std::log(static_cast<double>(data.n_pos()) / data.n_neg());
    out.empty_selection = true;
  } else {
    out = fit_logistic_subset(data, features_of(data, chosen, g), options.refit_iterations,
                              options.ridge);
  }
  if (trace) *trace = std::move(local);
  return out;
}

DenseFit backward_eliminate(const BinaryDataset& data, int theta, std::uint64_t seed,
                            const StepwiseOptions& options, StepwiseTrace* trace) {
  check_stepwise(data, theta);
  const StepGranularity g = options.granularity;
  const int units = static_cast<int>(g == StepGranularity::kGroup ? data.q() : data.p());
  std::vector<int> chosen(units);
  for (int u = 0; u < units; ++u) chosen[u] = u;
  StepwiseTrace local;

  if (group_count(data, chosen, g) > theta) {
    const InnerSplit sp = inner_split(data, options.validation_fraction, seed);
    local.stratified_fallback = sp.stratified;
    while (group_count(data, chosen, g) > theta) {
      int best = -1;
      double best_auc = -1;
      for (std::size_t t = 0; t < chosen.size(); ++t) {
        std::vector<int> cand = chosen;
        cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(t));
        const double a = validation_auc(sp, features_of(data, cand, g), options);
        if (a > best_auc) {
          best_auc = a;
          best = static_cast<int>(t);
        }
      }
      local.order.push_back(chosen[best]);
      local.val_auc.push_back(best_auc);
      chosen.erase(chosen.begin() + best);
    }
  }
  DenseFit out = fit_logistic_subset(data, features_of(data, chosen, g),
                                     options.refit_iterations, options.ridge);
  if (trace) *trace = std::move(local);
  return out;
}

std::vector<int> integerize(std::span<const double> w, int M) {
  if (M < 1) fail(ErrorKind::kConfig, "M must be at least 1");
  double top = 0;
  for (double v : w) top = std::max(top, std::abs(v));
  std::vector<int> out(w.size(), 0);
  if (top == 0) return out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    out[j] = static_cast<int>(std::round(w[j] / top * (M + 0.49)));
  }
  return out;
}

}  // namespace scoring
