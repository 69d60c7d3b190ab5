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

// End-to-end acceptance checks. Prints one line per criterion:
//   PASS|FAIL|SKIP|INFO <id> <name>: <detail>
// INFO lines are supplementary and never affect the exit status.
// Exit status is nonzero when any criterion fails, except those listed in
// kKnownUnattainable, which still print FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lp_oracle.h"
#include "oracles.h"
#include "random_lp.h"
#include "scoring/baselines.h"
#include "scoring/harness.h"
#include "scoring/lp.h"
#include "scoring/metrics.h"
#include "scoring/random.h"
#include "scoring/scorecard.h"
#include "scoring/trainer.h"
#include "synthetic.h"

namespace {

using namespace scoring;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr int kExactInstances = 200;
constexpr double kExactTol = 1e-9;
constexpr double kExactSeconds = 120.0;
constexpr int kBaucCases = 1000;
constexpr int kGridPoints = 10000;
constexpr double kLogitTol = 1e-9;
// Past this |s + w0| a double cannot hold 1 - p to kLogitTol relative accuracy.
constexpr double kLogitMargin = 12.0;
constexpr double kMushroomSeconds = 15 * 60.0;
constexpr double kMushroomAuc = 0.95;
constexpr int kLpCases = 500;
constexpr double kLpTol = 1e-6;

// 4a pins three percentages that no single intercept reproduces under a
// logistic link with unit slope: -2.806 gives 5.7%, 14.1%, 30.9%.
const std::set<std::string> kKnownUnattainable = {"4a"};

enum class Verdict { kPass, kFail, kSkip, kInfo };

struct Line {
  std::string id;
  std::string name;
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

std::vector<Line> g_lines;

void report(const std::string& id, const std::string& name, Verdict v, const std::string& detail) {
  static const char* words[] = {"PASS", "FAIL", "SKIP", "INFO"};
  g_lines.push_back({id, name, v, detail});
  std::cout << words[static_cast<int>(v)] << ' ' << id << ' ' << name << ": " << detail
            << std::endl;
}

void report(const std::string& id, const std::string& name, bool ok, const std::string& detail) {
  report(id, name, ok ? Verdict::kPass : Verdict::kFail, detail);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Runs a criterion body, turning an escaped exception into FAIL.
void guarded(const std::string& id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

void solver_exactness() {
  const auto t0 = Clock::now();
  Rng rng(2026);
  int done = 0, mismatches = 0;
  long long nodes = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; done < kExactInstances; ++seed) {
    const std::size_t n = 6 + rng.below(11);
    const std::size_t q = 1 + rng.below(3);
    const BinaryDataset d = synthetic::random_binary(n, q, seed);
    if (d.p() > 6) continue;
    TrainConfig cfg;
    cfg.M = 1;
    cfg.theta = 1 + static_cast<int>(rng.below(std::min<std::size_t>(2, d.q())));
    cfg.lambda1 = done % 2 == 0 ? 0.0 : 0.005;
    cfg.sample_size.reset();
    cfg.mip.rel_gap = 0;
    cfg.mip.abs_gap = 1e-12;
    const CoefVector c = train_bauc_integer(d, cfg);
    c.check(d);
    nodes += c.solver.nodes;
    const auto best = oracle::enumerate_scorecards(d, cfg.M, cfg.theta, cfg.lambda1);
    // Score the returned w with the oracle's own undeduplicated hinge sum.
    const double exact = oracle::raw_bauc_objective(c.w, d, cfg.lambda1);
    const double diff = std::max(std::abs(exact - best.objective),
                                 std::abs(c.solver.objective - best.objective));
    worst = std::max(worst, diff);
    if (diff > kExactTol) ++mismatches;
    ++done;
  }
  const double secs = seconds_since(t0);
  report("1", "solver exactness", mismatches == 0 && secs < kExactSeconds,
         std::to_string(done) + " instances (" + std::to_string(nodes) + " nodes), " +
             std::to_string(mismatches) + " mismatches, max |diff| " + fmt("%.2e", worst) + ", " + fmt("%.3f", secs) + " s");
}

void bauc_bound() {
  Rng rng(77);
  int order_violations = 0, grid_violations = 0;
  double worst_ratio = 0;
  for (int t = 0; t < kBaucCases; ++t) {
    const BinaryDataset d =
        synthetic::random_binary(4 + rng.below(30), 1 + rng.below(5), 5000 + t);
    std::vector<double> w(d.p());
    // Integer points half the time so that score ties occur.
    for (double& v : w) {
      v = t % 2 == 0 ? static_cast<double>(rng.below(5)) - 2 : (rng.uniform() * 2 - 1) * 3;
    }
    const ScoreSample s = score_sample(w, d);
    const double b = bauc(w, d);
    const double strict = auc(s, TieMode::kStrict);
    const double half = auc(s, TieMode::kHalf);
    if (!(b <= strict + 1e-12 && strict <= half + 1e-12)) ++order_violations;

    const PairDiffSet pairs = pair_differences(d);
    WeightedSamples e;
    e.weights = pairs.weights;
    double a_max = 0, lipschitz = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto diff = pairs.diff(k);
      double v = 0;
      for (std::size_t j = 0; j < diff.size(); ++j) v += diff[j] * w[j];
      e.values.push_back(v);
      if (v < 0) a_max = std::max(a_max, -1.0 / v);
      lipschitz = std::max(lipschitz, std::abs(v));
    }
    a_max += 1;
    const double exact = 1.0 - b;
    const double grid = oracle::grid_bpoe(e.values, e.weights, a_max, kGridPoints);
    // The objective in a is piecewise linear with slope at most max |v|.
    const double resolution = lipschitz * a_max / (kGridPoints - 1) + 1e-12;
    const double gap = grid - exact;
    worst_ratio = std::max(worst_ratio, std::abs(gap) / resolution);
    if (gap < -1e-12 || gap > resolution) ++grid_violations;
  }
  report("2", "bAUC bound", order_violations == 0 && grid_violations == 0,
         std::to_string(kBaucCases) + " cases, " + std::to_string(order_violations) +
             " order violations, " + std::to_string(grid_violations) +
             " grid mismatches, max |grid - exact| / resolution " + fmt("%.3f", worst_ratio));
}

void rounding() {
  const std::vector<double> w = {0.8, -0.3, 0.5};
  const std::vector<int> expect = {2, -1, 2};
  bool ok = integerize(w, 2) == expect;
  std::string detail = ok ? "(0.8, -0.3, 0.5), M=2 -> (2, -1, 2)" : "(0.8, -0.3, 0.5) mismatch";
  int singles = 0, wrong = 0;
  Rng rng(3);
  for (int M = 1; M <= 5; ++M) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> one(1 + rng.below(8), 0.0);
      const std::size_t j = rng.below(one.size());
      one[j] = (rng.uniform() + 1e-3) * (t % 2 ? -7 : 7);
      const std::vector<int> r = integerize(one, M);
      for (std::size_t k = 0; k < r.size(); ++k) {
        const int want = k == j ? (one[j] > 0 ? M : -M) : 0;
        if (r[k] != want) {
          ++wrong;
          break;
        }
      }
      ++singles;
    }
  }
  ok = ok && wrong == 0;
  report("3", "rounding formula", ok,
         detail + "; single nonzero -> +-M on " + std::to_string(singles - wrong) + "/" +
             std::to_string(singles));
}

void score_table() {
  const std::vector<int> w = {1, 1};
  const Scorecard card = build_table(w, -2.806);
  const std::vector<std::string> want = {"5.7%", "14.0%", "30.7%"};
  std::vector<std::string> got;
  for (const auto& r : card.table) got.push_back(format_percent(r.probability));
  std::string shown;
  for (const auto& s : got) shown += (shown.empty() ? "" : "/") + s;
  report("4a", "probability row at w0 = -2.806", got == want,
         "scores 0/1/2 give " + shown + ", expected 5.7%/14.0%/30.7%");

  // The full published row for scores -2..7 pins w0 to about [-2.8135, -2.8118].
  const std::vector<std::string> row = {"0.8%",  "2.2%",  "5.7%",  "14.0%", "30.7%",
                                        "54.7%", "76.6%", "89.9%", "96.0%", "98.5%"};
  const std::vector<int> wide = {-1, -1, 1, 1, 1, 1, 1, 1, 1};
  const Scorecard alt = build_table(wide, -2.8125);
  int matched = 0;
  for (std::size_t k = 0; k < alt.table.size() && k < row.size(); ++k) {
    matched += format_percent(alt.table[k].probability) == row[k] ? 1 : 0;
  }
  report("4a'", "probability row at w0 = -2.8125", Verdict::kInfo,
         std::to_string(matched) + "/10 percentages for scores -2..7 match");

  // Cards as the trainer emits them: calibrated intercept on real rows.
  Rng rng(41);
  int cards = 0, rows = 0, skipped = 0;
  double worst = 0;
  bool monotone = true;
  for (int t = 0; t < 300; ++t) {
    const BinaryDataset d = synthetic::random_binary(20 + rng.below(60), 1 + rng.below(6), 700 + t);
    std::vector<int> wi(d.p());
    for (int& v : wi) v = static_cast<int>(rng.below(5)) - 2;
    const InterceptFit fit = calibrate_intercept(wi, d);
    const Scorecard c = build_table(wi, fit.w0, &d);
    ++cards;
    for (std::size_t k = 1; k < c.table.size(); ++k) {
      const double a = c.table[k - 1].probability, b = c.table[k].probability;
      if (!(a < b)) monotone = false;
      if (std::abs(c.table[k].score + c.w0) > kLogitMargin ||
          std::abs(c.table[k - 1].score + c.w0) > kLogitMargin) {
        ++skipped;
        continue;
      }
      const double step = std::log(b / (1 - b)) - std::log(a / (1 - a));
      worst = std::max(worst, std::abs(step - 1.0));
      ++rows;
    }
  }
  report("4b", "logit linearity", monotone && worst <= kLogitTol,
         std::to_string(cards) + " cards, " + std::to_string(rows) + " adjacent rows, max |step - 1| " +
             fmt("%.2e", worst) + " (" + std::to_string(skipped) + " rows beyond |s + w0| > " +
             fmt("%.0f", kLogitMargin) + " not checked)");
}

std::optional<fs::path> data_dir() {
  if (const char* env = std::getenv("SCORING_DATA_DIR")) return fs::path(env);
  const fs::path local = fs::path(SCORING_SOURCE_DIR) / "data" / "uci";
  if (fs::exists(local)) return local;
  return std::nullopt;
}

std::optional<ExperimentConfig> real_config(const std::string& cfg_name, const std::string& csv) {
  const auto dir = data_dir();
  if (!dir || !fs::exists(*dir / csv)) return std::nullopt;
  ExperimentConfig cfg =
      load_experiment_config((fs::path(SCORING_SOURCE_DIR) / "configs" / cfg_name).string());
  cfg.data.path = (*dir / csv).string();
  cfg.output_dir.clear();
  return cfg;
}

double mean_auc(const RunReport& r, Method m) {
  for (const auto& c : r.cells) {
    if (c.method == m) return c.auc_mean;
  }
  return std::nan("");
}

// Same experiment on a generated table of the same shape, reported as INFO
// when the real table is absent. MIP time limits are cut to keep ctest short.
RunReport stand_in(const std::string& cfg_name, const std::string& csv,
                         const std::vector<Method>& methods, double time_limit, double* secs) {
  ExperimentConfig cfg =
      load_experiment_config((fs::path(SCORING_SOURCE_DIR) / "configs" / cfg_name).string());
  cfg.methods = methods;
  for (Method m : {Method::kBaucInteger, Method::kBaucRounding}) {
    auto [it, inserted] = cfg.per_method.try_emplace(m, cfg.defaults);
    it->second.time_limit = time_limit;
  }
  const BinaryDataset data = synthetic::from_csv_text(csv, cfg.data.csv.label_column,
                                                      cfg.data.csv.positive_label);
  const auto t0 = Clock::now();
  RunReport r = run_experiment(cfg, data);
  *secs = seconds_since(t0);
  return r;
}

void mushroom() {
  auto cfg = real_config("mushroom.cfg", "mushroom.csv");
  if (!cfg) {
    report("5", "mushroom end to end", Verdict::kSkip,
           "mushroom.csv not found (run scripts/fetch_datasets.sh or set SCORING_DATA_DIR)");
    double secs = 0;
    const RunReport r = stand_in("mushroom.cfg", synthetic::mushroom_like_csv(8124, 5),
                                 {Method::kBaucInteger}, 30.0, &secs);
    report("5'", "mushroom-like stand-in", Verdict::kInfo,
           "8124 generated rows, mean test AUC " + fmt("%.4f", mean_auc(r, Method::kBaucInteger)) +
               " over 5 replications at a 30 s MIP limit, " + fmt("%.0f", secs) + " s");
    return;
  }
  cfg->methods = {Method::kBaucInteger};
  const auto t0 = Clock::now();
  const RunReport r = run_experiment(*cfg);
  const double secs = seconds_since(t0);
  const double m = mean_auc(r, Method::kBaucInteger);
  report("5", "mushroom end to end", secs < kMushroomSeconds && m >= kMushroomAuc,
         "mean test AUC " + fmt("%.4f", m) + " over " + std::to_string(cfg->replications) +
             " replications, " + fmt("%.0f", secs) + " s");
}

void surgery() {
  const std::vector<Method> methods = {Method::kBaucInteger, Method::kElasticNet};
  auto cfg = real_config("surgery.cfg", "thoracic_surgery.csv");
  if (!cfg) {
    report("6", "surgery ordering", Verdict::kSkip,
           "thoracic_surgery.csv not found (run scripts/fetch_datasets.sh or set SCORING_DATA_DIR)");
    double secs = 0;
    const RunReport r =
        stand_in("surgery.cfg", synthetic::surgery_like_csv(470, 5), methods, 30.0, &secs);
    report("6'", "surgery-like stand-in", Verdict::kInfo,
           "470 generated rows, bauc-integer " + fmt("%.4f", mean_auc(r, Method::kBaucInteger)) +
               " vs elastic-net " + fmt("%.4f", mean_auc(r, Method::kElasticNet)) + ", " +
               fmt("%.0f", secs) + " s");
    return;
  }
  cfg->methods = methods;
  const RunReport r = run_experiment(*cfg);
  const double a = mean_auc(r, Method::kBaucInteger), b = mean_auc(r, Method::kElasticNet);
  report("6", "surgery ordering", a > b,
         "bauc-integer " + fmt("%.4f", a) + " vs elastic-net " + fmt("%.4f", b));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism() {
  const fs::path dir =
      fs::temp_directory_path() / ("scoring_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "data.csv") << synthetic::surgery_like_csv(240, 11);
  std::ofstream(dir / "exp.cfg") << "dataset = data.csv\nlabel = Risk1Yr\npositive = T\n"
                                    "methods = all\nM = 1, 2\ntheta = 2\nreplications = 2\n"
                                    "bauc-integer.node_limit = 400\n"
                                    "bauc-rounding.node_limit = 400\n";
  int codes = 0;
  for (const char* out : {"a", "b"}) {
    const std::string cmd = std::string(SCORING_CLI) + " benchmark --config " +
                            (dir / "exp.cfg").string() + " --out " + (dir / out).string() +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    codes += WIFEXITED(status) && WEXITSTATUS(status) == 0 ? 0 : 1;
  }
  const std::string a = slurp(dir / "a" / "report.csv"), b = slurp(dir / "b" / "report.csv");
  fs::remove_all(dir);
  report("7", "determinism", codes == 0 && !a.empty() && a == b,
         codes ? "benchmark exited with an error"
               : std::to_string(a.size()) + "-byte report.csv, " +
                     (a == b ? "identical" : "different") + " across two runs");
}

void lp_engine() {
  Rng rng(31337);
  int solved = 0, trials = 0, degenerate = 0, mismatches = 0, nonterminal = 0;
  double worst = 0;
  while (solved < kLpCases) {
    ++trials;
    const int n = 1 + static_cast<int>(rng.below(12));
    const int m = 1 + static_cast<int>(rng.below(12));
    const bool degen = trials % 3 == 0;
    lp::RandomCase rc = lp::random_case(rng, n, m, degen);
    if (oracle::vertex_enumeration_cost(rc.dense) > 60000) continue;
    const auto expected = oracle::vertex_enumeration_optimum(rc.dense);
    const lp::LpSolution s = lp::solve_lp(rc.model);
    if (s.status == lp::LpStatus::kIterationLimit) ++nonterminal;
    if (!expected || s.status != lp::LpStatus::kOptimal) {
      ++mismatches;
    } else {
      const double diff = std::abs(s.objective - *expected) / (1 + std::abs(*expected));
      worst = std::max(worst, diff);
      if (diff > kLpTol || rc.model.max_violation(s.x) > 1e-7) ++mismatches;
    }
    degenerate += degen ? 1 : 0;
    ++solved;
  }
  report("8", "LP engine", mismatches == 0 && nonterminal == 0,
         std::to_string(solved) + " LPs (" + std::to_string(degenerate) + " degenerate), " +
             std::to_string(mismatches) + " mismatches, " + std::to_string(nonterminal) +
             " iteration limits, max relative diff " + fmt("%.2e", worst));
}

}  // namespace

// Optional arguments name the criteria to run, e.g. "acceptance 1 8".
int main(int argc, char** argv) {
  const std::set<std::string> only(argv + 1, argv + argc);
  const auto run = [&](const std::string& id, const std::string& name,
                       const std::function<void()>& body) {
    if (only.empty() || only.count(id)) guarded(id, name, body);
  };
  run("1", "solver exactness", solver_exactness);
  run("2", "bAUC bound", bauc_bound);
  run("3", "rounding formula", rounding);
  run("4", "score table", score_table);
  run("5", "mushroom end to end", mushroom);
  run("6", "surgery ordering", surgery);
  run("7", "determinism", determinism);
  run("8", "LP engine", lp_engine);

  int failed = 0, known = 0;
  for (const auto& l : g_lines) {
    if (l.verdict != Verdict::kFail) continue;
    if (kKnownUnattainable.count(l.id)) ++known;
    else ++failed;
  }
  std::cout << "summary: " << failed << " failed, " << known << " known-unattainable failed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
