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

#include "scoring/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "scoring/baselines.h"
#include "scoring/error.h"
#include "scoring/random.h"
#include "scoring/trainer.h"

namespace scoring {

namespace fs = std::filesystem;

// Stream tags for seeds derived from a replication seed.
constexpr std::uint64_t kSampleStream = 0x5a4d;
constexpr std::uint64_t kStepwiseStream = 0x57e9;

BinaryDataset load_dataset(const DataSource& source, std::vector<std::string>* warnings) {
  if (source.path.empty()) fail(ErrorKind::kConfig, "no dataset path given");
  if (fs::path(source.path).extension() == ".json") {
    std::ifstream in(source.path);
    if (!in) fail(ErrorKind::kInput, "cannot open " + source.path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kInput, source.path + ": " + e.what());
    }
    return dataset_from_json(doc);
  }
  const RawTable table = load_csv(source.path, source.csv);
  BinarizationSpec spec = infer_spec(table);
  for (const auto& [column, rule] : source.overrides) apply_override(spec, table, column, rule);
  if (warnings) {
    warnings->insert(warnings->end(), spec.warnings.begin(), spec.warnings.end());
  }
  return binarize(table, spec);
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

const MethodSettings& ExperimentConfig::settings(Method m) const {
  auto it = per_method.find(m);
  return it == per_method.end() ? defaults : it->second;
}

std::vector<std::pair<int, int>> ExperimentConfig::grid() const {
  std::vector<std::pair<int, int>> g;
  for (int m : M_values) {
    for (int t : theta_values) g.emplace_back(m, t);
  }
  return g;
}

void ExperimentConfig::validate() const {
  if (replications < 1) fail(ErrorKind::kConfig, "replications must be at least 1");
  if (M_values.empty() || theta_values.empty()) fail(ErrorKind::kConfig, "the (M, theta) grid is empty");
  for (int m : M_values) {
    if (m < 1) fail(ErrorKind::kConfig, "M values must be at least 1");
  }
  for (int t : theta_values) {
    if (t < 1) fail(ErrorKind::kConfig, "theta values must be at least 1");
  }
  if (!(fraction > 0 && fraction < 1)) fail(ErrorKind::kConfig, "fraction must lie in (0, 1)");
  if (!seeds.empty() && static_cast<int>(seeds.size()) != replications) {
    fail(ErrorKind::kConfig, "seeds must list one value per replication");
  }
  if (jobs < 1) fail(ErrorKind::kConfig, "jobs must be at least 1");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void config_error(int line, const std::string& msg) {
  fail(ErrorKind::kConfig, "config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    config_error(line, "expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    config_error(line, "expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(line, "expected true or false, got '" + v + "'");
}

// Returns false if `key` is not a method setting.
bool apply_setting(MethodSettings& s, const std::string& key, const std::string& value, int line) {
  if (key == "lambda1") {
    s.lambda1 = to_double(value, line);
  } else if (key == "sample_size") {
    if (value == "none" || value == "all") s.sample_size.reset();
    else s.sample_size = static_cast<std::size_t>(to_int(value, line));
  } else if (key == "time_limit") {
    s.time_limit = to_double(value, line);
  } else if (key == "node_limit") {
    s.node_limit = to_int(value, line);
  } else if (key == "rel_gap") {
    s.rel_gap = to_double(value, line);
  } else if (key == "alpha_mix") {
    s.alpha_mix = to_double(value, line);
  } else if (key == "path_points") {
    s.path_points = static_cast<int>(to_int(value, line));
  } else if (key == "stepwise") {
    if (value == "group") s.granularity = StepGranularity::kGroup;
    else if (value == "variable") s.granularity = StepGranularity::kVariable;
    else config_error(line, "stepwise must be 'group' or 'variable'");
  } else {
    return false;
  }
  return true;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& base_dir) {
  ExperimentConfig cfg;
  cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
  cfg.M_values = {1, 2};
  cfg.theta_values = {4, 6, 8};
  std::optional<std::uint64_t> base_seed;
  struct Pending {
    Method method;
    std::string key, value;
    int line;
  };
  std::vector<Pending> pending;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) config_error(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));

    if (key == "dataset") {
      const fs::path p(value);
      cfg.data.path = p.is_absolute() ? value : (fs::path(base_dir) / p).string();
    } else if (key == "label_column" || key == "label") {
      cfg.data.csv.label_column = value;
    } else if (key == "positive_label" || key == "positive") {
      cfg.data.csv.positive_label = value;
    } else if (key == "exclude") {
      cfg.data.csv.excluded_columns = split_list(value);
    } else if (key == "delimiter") {
      if (value == "tab") cfg.data.csv.delimiter = '\t';
      else if (value.size() == 1) cfg.data.csv.delimiter = value[0];
      else config_error(line, "delimiter must be one character or 'tab'");
    } else if (key.rfind("override.", 0) == 0) {
      cfg.data.overrides.emplace_back(key.substr(9), value);
    } else if (key == "methods") {
      cfg.methods.clear();
      if (value == "all") {
        cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
      } else {
        for (const auto& m : split_list(value)) cfg.methods.push_back(parse_method(m));
      }
    } else if (key == "M") {
      cfg.M_values.clear();
      for (const auto& v : split_list(value)) cfg.M_values.push_back(static_cast<int>(to_int(v, line)));
    } else if (key == "theta") {
      cfg.theta_values.clear();
      for (const auto& v : split_list(value)) cfg.theta_values.push_back(static_cast<int>(to_int(v, line)));
    } else if (key == "replications") {
      cfg.replications = static_cast<int>(to_int(value, line));
    } else if (key == "fraction") {
      cfg.fraction = to_double(value, line);
    } else if (key == "seed") {
      base_seed = static_cast<std::uint64_t>(to_int(value, line));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& v : split_list(value)) cfg.seeds.push_back(static_cast<std::uint64_t>(to_int(v, line)));
    } else if (key == "tie_mode") {
      cfg.tie_mode = parse_tie_mode(value);
    } else if (key == "output") {
      const fs::path p(value);
      cfg.output_dir = p.is_absolute() ? value : (fs::path(base_dir) / p).string();
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(to_int(value, line));
    } else if (key == "scorecards") {
      cfg.write_scorecards = to_bool(value, line);
    } else if (key == "bold_best") {
      cfg.bold_best = to_bool(value, line);
    } else if (key == "log_interval") {
      cfg.log_interval = to_int(value, line);
    } else if (apply_setting(cfg.defaults, key, value, line)) {
      // global method setting
    } else if (const auto dot = key.find('.'); dot != std::string::npos) {
      Method m;
      try {
        m = parse_method(key.substr(0, dot));
      } catch (const Error&) {
        config_error(line, "unknown key '" + key + "'");
      }
      pending.push_back({m, key.substr(dot + 1), value, line});
    } else {
      config_error(line, "unknown key '" + key + "'");
    }
  }
  for (const Pending& p : pending) {
    auto [it, inserted] = cfg.per_method.try_emplace(p.method, cfg.defaults);
    if (!apply_setting(it->second, p.key, p.value, p.line)) {
      config_error(p.line, "unknown method setting '" + p.key + "'");
    }
  }
  if (cfg.seeds.empty()) {
    const std::uint64_t base = base_seed.value_or(0);
    for (int r = 0; r < cfg.replications; ++r) cfg.seeds.push_back(base + r);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInput, "cannot open config " + path);
  return parse_experiment_config(in, fs::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct CellResult {
  DetailRow row;
  Scorecard card;
};

struct CachedFit {
  DenseFit fit;
  double seconds = 0.0;
};

// Everything one replication computes. Baseline fits do not depend on M
// (and the path not on theta), so they are computed once and shared.
class Replication {
 public:
  Replication(const ExperimentConfig& cfg, const BinaryDataset& data, int r)
      : cfg_(cfg), data_(data), r_(r), seed_(cfg.seeds[r]) {}

  std::vector<CellResult> run() {
    std::vector<CellResult> out;
    std::optional<SplitPair> sp;
    std::string split_error;
    try {
      sp = split(data_, cfg_.fraction, seed_);
    } catch (const Error& e) {
      split_error = e.what();
    }
    for (Method m : cfg_.methods) {
      for (auto [M, theta] : cfg_.grid()) {
        CellResult cell;
        cell.row.method = m;
        cell.row.M = M;
        cell.row.theta = theta;
        cell.row.replication = r_;
        cell.row.seed = seed_;
        if (!sp) {
          cell.row.error = split_error;
        } else {
          try {
            run_cell(*sp, cell);
            cell.row.ok = true;
          } catch (const std::exception& e) {
            cell.row.ok = false;
            cell.row.error = e.what();
          }
        }
        out.push_back(std::move(cell));
      }
    }
    return out;
  }

 private:
  void run_cell(const SplitPair& sp, CellResult& cell) {
    const Method m = cell.row.method;
    const int M = cell.row.M, theta = cell.row.theta;
    const MethodSettings& s = cfg_.settings(m);
    if (theta > static_cast<int>(data_.q())) {
      fail(ErrorKind::kConfig, "theta " + std::to_string(theta) + " exceeds q = " +
                                   std::to_string(data_.q()));
    }
    const BinaryDataset& train = sp.train;
    std::vector<int> w;
    BinaryDataset fit_rows;
    const BinaryDataset* calib = &train;

    if (m == Method::kBaucInteger || m == Method::kBaucRounding) {
      TrainConfig tc;
      tc.M = M;
      tc.theta = theta;
      tc.lambda1 = s.lambda1;
      tc.sample_size = s.sample_size;
      tc.seed = Rng::derive(seed_, kSampleStream);
      tc.mip.time_limit_seconds = s.time_limit;
      if (s.node_limit >= 0) tc.mip.node_limit = s.node_limit;
      tc.mip.rel_gap = s.rel_gap;
      tc.mip.log_interval = cfg_.log_interval;
      tc.mip.log = cfg_.log_interval > 0 ? &std::cerr : nullptr;
      const auto start = Clock::now();
      const CoefVector c = m == Method::kBaucInteger ? train_bauc_integer(train, tc)
                                                     : train_bauc_rounding(train, tc);
      cell.row.seconds = seconds_since(start);
      cell.row.solver_status = c.solver.status;
      w = c.integer_w();
      fit_rows = training_rows(train, tc);
      calib = &fit_rows;
    } else {
      const CachedFit& cf = baseline_fit(train, m, theta, s);
      const auto start = Clock::now();
      w = integerize(cf.fit.w, M);
      cell.row.seconds = cf.seconds + seconds_since(start);
      cell.row.solver_status = cf.fit.empty_selection ? "empty" : (cf.fit.converged ? "converged" : "capped");
    }

    std::vector<double> wd(w.begin(), w.end());
    cell.row.questions = static_cast<int>(selected_groups(data_, wd).size());
    const InterceptFit ic = calibrate_intercept(w, *calib);
    cell.row.w0 = ic.w0;
    cell.card = build_table(w, ic.w0, &data_);
    cell.card.separated = ic.separated;
    cell.card.clamped = ic.clamped;
    cell.card.method = method_name(m);
    cell.card.M = M;
    cell.card.theta = theta;
    cell.card.seed = seed_;
    cell.row.test_auc = auc(score_sample(wd, sp.test), cfg_.tie_mode);
    cell.row.train_auc = auc(score_sample(wd, train), cfg_.tie_mode);
    cell.row.test_bauc = bauc(wd, sp.test);
  }

  const CachedFit& baseline_fit(const BinaryDataset& train, Method m, int theta,
                                const MethodSettings& s) {
    const bool path_method = m == Method::kL1 || m == Method::kElasticNet;
    const auto key = std::make_pair(static_cast<int>(m), theta);
    if (auto it = fits_.find(key); it != fits_.end()) return it->second;

    CachedFit cf;
    if (path_method) {
      const double alpha = m == Method::kL1 ? 1.0 : s.alpha_mix;
      auto pit = paths_.find(static_cast<int>(m));
      if (pit == paths_.end()) {
        PathOptions po;
        po.points = s.path_points;
        po.stop_above = *std::max_element(cfg_.theta_values.begin(), cfg_.theta_values.end());
        const auto start = Clock::now();
        std::vector<PathPoint> path = regularization_path(train, alpha, po);
        pit = paths_.emplace(static_cast<int>(m), std::make_pair(std::move(path), seconds_since(start)))
                  .first;
      }
      const auto& [path, secs] = pit->second;
      const int k = select_path_point(path, theta);
      if (k < 0) {
        cf.fit = path.front().fit;
        std::fill(cf.fit.w.begin(), cf.fit.w.end(), 0.0);
        cf.fit.empty_selection = true;
      } else {
        cf.fit = path[k].fit;
      }
      cf.seconds = secs;
    } else {
      StepwiseOptions so;
      so.granularity = s.granularity;
      const auto start = Clock::now();
      const std::uint64_t seed = Rng::derive(seed_, kStepwiseStream);
      cf.fit = m == Method::kForward ? forward_select(train, theta, seed, so)
                                     : backward_eliminate(train, theta, seed, so);
      cf.seconds = seconds_since(start);
    }
    return fits_.emplace(key, std::move(cf)).first->second;
  }

  const ExperimentConfig& cfg_;
  const BinaryDataset& data_;
  int r_;
  std::uint64_t seed_;
  std::map<int, std::pair<std::vector<PathPoint>, double>> paths_;
  std::map<std::pair<int, int>, CachedFit> fits_;
};

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  const BinaryDataset data = load_dataset(cfg.data, &warnings);
  RunReport report = run_experiment(cfg, data);
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg_in, const BinaryDataset& data) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.seeds.empty()) {
    for (int r = 0; r < cfg.replications; ++r) cfg.seeds.push_back(static_cast<std::uint64_t>(r));
  }
  cfg.validate();
  const int R = cfg.replications;
  std::vector<std::vector<CellResult>> per_rep(R);

  if (cfg.jobs <= 1 || R == 1) {
    for (int r = 0; r < R; ++r) per_rep[r] = Replication(cfg, data, r).run();
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(cfg.jobs, R);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int r = next++; r < R; r = next++) per_rep[r] = Replication(cfg, data, r).run();
      });
    }
    for (auto& th : pool) th.join();
  }

  RunReport report;
  report.methods = cfg.methods;
  report.grid = cfg.grid();
  report.environment = environment_stamp();
  const std::size_t cells = report.grid.size();
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    for (std::size_t c = 0; c < cells; ++c) {
      for (int r = 0; r < R; ++r) {
        CellResult& cell = per_rep[r][mi * cells + c];
        report.details.push_back(cell.row);
        report.cards.push_back(std::move(cell.card));
      }
    }
  }
  report.cells = aggregate(report.methods, report.grid, report.details);
  return report;
}

std::vector<CellSummary> aggregate(const std::vector<Method>& methods,
                                   const std::vector<std::pair<int, int>>& grid,
                                   const std::vector<DetailRow>& details) {
  std::vector<CellSummary> out;
  auto mean_se = [](const std::vector<double>& v, double& mean, double& se) {
    mean = se = 0.0;
    if (v.empty()) return;
    double s = 0;
    for (double x : v) s += x;
    mean = s / static_cast<double>(v.size());
    if (v.size() < 2) return;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  };
  for (Method m : methods) {
    for (auto [M, theta] : grid) {
      CellSummary cs;
      cs.method = m;
      cs.M = M;
      cs.theta = theta;
      std::vector<double> aucs, secs;
      for (const DetailRow& d : details) {
        if (d.method != m || d.M != M || d.theta != theta) continue;
        if (d.ok) {
          aucs.push_back(d.test_auc);
          secs.push_back(d.seconds);
        } else {
          ++cs.failed;
        }
      }
      cs.ok = static_cast<int>(aucs.size());
      mean_se(aucs, cs.auc_mean, cs.auc_se);
      mean_se(secs, cs.seconds_mean, cs.seconds_se);
      out.push_back(cs);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

constexpr const char* kCsvHeader =
    "method,M,theta,replication,seed,status,solver_status,test_auc,train_auc,test_bauc,"
    "questions,w0,error";

std::string cell_label(int M, int theta) {
  return "M=" + std::to_string(M) + ", θ=" + std::to_string(theta);
}

}  // namespace

std::string report_csv(const RunReport& report) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const DetailRow& d : report.details) {
    os << method_name(d.method) << ',' << d.M << ',' << d.theta << ',' << d.replication << ','
       << d.seed << ',' << (d.ok ? "ok" : "failed") << ',' << csv_field(d.solver_status) << ','
       << exact(d.test_auc) << ',' << exact(d.train_auc) << ',' << exact(d.test_bauc) << ','
       << d.questions << ',' << exact(d.w0) << ',' << csv_field(d.error) << '\n';
  }
  return os.str();
}

std::string timings_csv(const RunReport& report) {
  std::ostringstream os;
  os << "method,M,theta,replication,seconds\n";
  for (const DetailRow& d : report.details) {
    os << method_name(d.method) << ',' << d.M << ',' << d.theta << ',' << d.replication << ','
       << fixed(d.seconds, 6) << '\n';
  }
  return os.str();
}

std::vector<DetailRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kInput, "empty report CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) fail(ErrorKind::kInput, "report CSV header does not match");
  std::vector<DetailRow> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) {
      fail(ErrorKind::kInput, "report CSV line " + std::to_string(n) + ": expected 13 fields");
    }
    try {
      DetailRow d;
      d.method = parse_method(f[0]);
      d.M = std::stoi(f[1]);
      d.theta = std::stoi(f[2]);
      d.replication = std::stoi(f[3]);
      d.seed = std::stoull(f[4]);
      d.ok = f[5] == "ok";
      d.solver_status = f[6];
      d.test_auc = std::stod(f[7]);
      d.train_auc = std::stod(f[8]);
      d.test_bauc = std::stod(f[9]);
      d.questions = std::stoi(f[10]);
      d.w0 = std::stod(f[11]);
      d.error = f[12];
      rows.push_back(std::move(d));
    } catch (const std::logic_error&) {
      fail(ErrorKind::kInput, "report CSV line " + std::to_string(n) + ": bad number");
    }
  }
  return rows;
}

std::string report_markdown(const RunReport& report, bool bold_best) {
  std::ostringstream os;
  const std::size_t cells = report.grid.size();
  int reps = 0;
  for (const DetailRow& d : report.details) reps = std::max(reps, d.replication + 1);

  auto table = [&](const char* title, bool auc_table) {
    os << "### " << title << "\n\n| Method |";
    for (auto [M, t] : report.grid) os << ' ' << cell_label(M, t) << " |";
    os << " Average |\n|---|";
    for (std::size_t c = 0; c <= cells; ++c) os << "---:|";
    os << '\n';
    std::vector<double> best(cells, -1.0);
    if (auc_table) {
      for (const CellSummary& s : report.cells) {
        for (std::size_t c = 0; c < cells; ++c) {
          if (s.ok > 0 && report.grid[c] == std::make_pair(s.M, s.theta)) {
            best[c] = std::max(best[c], s.auc_mean);
          }
        }
      }
    }
    for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
      os << "| " << method_title(report.methods[mi]) << " |";
      double sum = 0;
      int count = 0;
      for (std::size_t c = 0; c < cells; ++c) {
        const CellSummary& s = report.cells[mi * cells + c];
        if (s.ok == 0) {
          os << " failed |";
          continue;
        }
        const double mean = auc_table ? s.auc_mean : s.seconds_mean;
        const double se = auc_table ? s.auc_se : s.seconds_se;
        const int digits = auc_table ? 3 : 2;
        std::string text = fixed(mean, digits) + " (" + fixed(se, digits) + ")";
        if (auc_table && bold_best && fixed(mean, 3) == fixed(best[c], 3)) text = "**" + text + "**";
        if (s.failed > 0) text += " [" + std::to_string(s.failed) + " failed]";
        os << ' ' << text << " |";
        sum += mean;
        ++count;
      }
      os << ' ' << (count ? fixed(sum / count, auc_table ? 3 : 2) : std::string("-")) << " |\n";
    }
    os << '\n';
  };

  os << "## Benchmark report\n\n";
  os << "Mean (standard error) over " << reps << " replication" << (reps == 1 ? "" : "s")
     << ".\n\n";
  table("Test AUC", true);
  table("Training time (s)", false);

  bool any_failed = false;
  for (const DetailRow& d : report.details) {
    if (d.ok) continue;
    if (!any_failed) os << "### Failed runs\n\n";
    any_failed = true;
    os << "- " << method_name(d.method) << ' ' << cell_label(d.M, d.theta) << " replication "
       << d.replication << ": " << d.error << '\n';
  }
  if (any_failed) os << '\n';
  if (!report.warnings.empty()) {
    os << "### Warnings\n\n";
    for (const auto& w : report.warnings) os << "- " << w << '\n';
    os << '\n';
  }
  os << "Environment: " << report.environment << '\n';
  return os.str();
}

void emit_report(const RunReport& report, const std::string& output_dir, bool write_scorecards,
                 bool bold_best) {
  if (output_dir.empty()) fail(ErrorKind::kConfig, "no output directory given");
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) fail(ErrorKind::kInput, "cannot create " + output_dir + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(output_dir) / name, std::ios::binary);
    if (!out) fail(ErrorKind::kInput, "cannot write " + name + " in " + output_dir);
    out << text;
  };
  write("report.csv", report_csv(report));
  write("timings.csv", timings_csv(report));
  write("report.md", report_markdown(report, bold_best));
  if (!write_scorecards) return;
  for (std::size_t k = 0; k < report.details.size(); ++k) {
    const DetailRow& d = report.details[k];
    if (!d.ok) continue;
    write("scorecard_" + std::string(method_name(d.method)) + "_" + std::to_string(d.M) + "_" +
              std::to_string(d.theta) + "_" + std::to_string(d.replication) + ".json",
          render(report.cards[k], RenderFormat::kJson));
  }
}

std::string environment_stamp() {
  std::ostringstream os;
#if defined(__clang__)
  os << "clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  os << "gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#else
  os << "unknown compiler";
#endif
#ifdef NDEBUG
  os << ", optimized build";
#else
  os << ", debug build";
#endif
  const unsigned threads = std::thread::hardware_concurrency();
  os << ", " << threads << (threads == 1 ? " hardware thread" : " hardware threads");
  return os.str();
}

}  // namespace scoring
