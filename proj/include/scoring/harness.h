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

#ifndef SCORING_HARNESS_H_
#define SCORING_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scoring/baselines.h"
#include "scoring/dataset.h"
#include "scoring/method.h"
#include "scoring/metrics.h"
#include "scoring/scorecard.h"

namespace scoring {

struct DataSource {
  std::string path;  // .json = cached BinaryDataset, anything else = CSV
  CsvOptions csv;
  std::vector<std::pair<std::string, std::string>> overrides;  // column, rule
};

BinaryDataset load_dataset(const DataSource& source,
                           std::vector<std::string>* warnings = nullptr);

// Settings a method may override with "<method>.<key> = value".
struct MethodSettings {
  double lambda1 = 0.005;
  std::optional<std::size_t> sample_size = 300;
  double time_limit = 300.0;
  std::int64_t node_limit = -1;  // -1: unlimited
  double rel_gap = 1e-4;
  double alpha_mix = 0.5;  // elastic-net
  int path_points = 100;
  StepGranularity granularity = StepGranularity::kGroup;
};

struct ExperimentConfig {
  DataSource data;
  std::vector<Method> methods;
  std::vector<int> M_values;
  std::vector<int> theta_values;
  int replications = 5;
  double fraction = 0.8;
  std::vector<std::uint64_t> seeds;  // one per replication; default 0..R-1
  TieMode tie_mode = TieMode::kHalf;
  MethodSettings defaults;
  std::map<Method, MethodSettings> per_method;
  std::string output_dir;
  int jobs = 1;
  bool write_scorecards = true;
  bool bold_best = false;
  std::int64_t log_interval = 0;

  const MethodSettings& settings(Method m) const;
  std::vector<std::pair<int, int>> grid() const;  // (M, theta), M outer
  void validate() const;
};

// Key-value text, one "key = value" per line, '#' comments. Relative
// dataset paths resolve against base_dir.
ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

struct DetailRow {
  Method method = Method::kBaucInteger;
  int M = 0;
  int theta = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string solver_status;
  double test_auc = 0.0;
  double train_auc = 0.0;
  double test_bauc = 0.0;
  int questions = 0;
  double w0 = 0.0;
  std::string error;
  double seconds = 0.0;  // training wall time; kept out of report.csv
};

struct CellSummary {
  Method method = Method::kBaucInteger;
  int M = 0;
  int theta = 0;
  int ok = 0;
  int failed = 0;
  double auc_mean = 0.0;
  double auc_se = 0.0;
  double seconds_mean = 0.0;
  double seconds_se = 0.0;
};

struct RunReport {
  std::vector<Method> methods;
  std::vector<std::pair<int, int>> grid;
  std::vector<DetailRow> details;  // method, cell, replication order
  std::vector<CellSummary> cells;
  std::vector<Scorecard> cards;    // parallel to details (empty card on failure)
  std::string environment;
  std::vector<std::string> warnings;
};

RunReport run_experiment(const ExperimentConfig& cfg);
RunReport run_experiment(const ExperimentConfig& cfg, const BinaryDataset& data);

// Mean and sample standard error over successful rows of each cell.
std::vector<CellSummary> aggregate(const std::vector<Method>& methods,
                                   const std::vector<std::pair<int, int>>& grid,
                                   const std::vector<DetailRow>& details);

enum class ReportFormat { kCsv, kMarkdown };

// report.csv: one row per (method, M, theta, replication), no timings.
std::string report_csv(const RunReport& report);
// Table of mean (se) test AUC, methods x cells plus an Average column,
// followed by mean training seconds in the same layout.
std::string report_markdown(const RunReport& report, bool bold_best = false);
std::string timings_csv(const RunReport& report);

// Writes report.csv, report.md, timings.csv and the per-cell scorecards.
void emit_report(const RunReport& report, const std::string& output_dir,
                 bool write_scorecards = true, bool bold_best = false);

std::vector<DetailRow> read_report_csv(std::istream& in);

std::string environment_stamp();

}  // namespace scoring

#endif  // SCORING_HARNESS_H_
