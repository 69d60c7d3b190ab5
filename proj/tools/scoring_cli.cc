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

// Command-line front end: binarize, train, evaluate, benchmark, render.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scoring/baselines.h"
#include "scoring/error.h"
#include "scoring/harness.h"
#include "scoring/metrics.h"
#include "scoring/random.h"
#include "scoring/scorecard.h"
#include "scoring/trainer.h"

namespace {

using namespace scoring;

struct Globals {
  std::uint64_t seed = 0;
  double time_limit = 300.0;
  std::string tie_mode = "half";
};

struct DataFlags {
  std::string path;
  std::string label;
  std::string positive;
  std::vector<std::string> exclude;
  std::vector<std::string> overrides;
  std::string delimiter = ",";

  void attach(CLI::App* app) {
    app->add_option("--data", path, "CSV file or cached dataset JSON")->required();
    app->add_option("--label", label, "label column (CSV input)");
    app->add_option("--positive", positive, "label value of the positive class (CSV input)");
    app->add_option("--exclude", exclude, "columns to ignore")->delimiter(',');
    app->add_option("--override", overrides, "per-column rule, column=thresholds:a,b | "
                                             "categorical:k | binary:<level> | drop");
    app->add_option("--delimiter", delimiter, "CSV field separator (or 'tab')");
  }

  DataSource source() const {
    DataSource s;
    s.path = path;
    s.csv.label_column = label;
    s.csv.positive_label = positive;
    s.csv.excluded_columns = exclude;
    if (delimiter == "tab") s.csv.delimiter = '\t';
    else if (delimiter.size() == 1) s.csv.delimiter = delimiter[0];
    else fail(ErrorKind::kConfig, "--delimiter must be a single character or 'tab'");
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) fail(ErrorKind::kConfig, "--override expects column=rule");
      s.overrides.emplace_back(o.substr(0, eq), o.substr(eq + 1));
    }
    return s;
  }

  BinaryDataset load() const {
    std::vector<std::string> warnings;
    BinaryDataset d = load_dataset(source(), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return d;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kInput, "cannot write " + path);
  out << text;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInput, "cannot open " + path);
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, path + ": " + e.what());
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput:
      return 2;
    case ErrorKind::kConfig:
      return 3;
    case ErrorKind::kSolver:
      return 4;
    case ErrorKind::kInternal:
      return 5;
  }
  return 5;
}

struct TrainFlags {
  std::string method = "bauc-integer";
  int M = 1;
  int theta = 4;
  double lambda1 = 0.005;
  std::size_t sample_size = 300;
  double alpha_mix = 0.5;
  double holdout = 0.0;
  std::int64_t node_limit = -1;
  std::string json_out;
  std::string markdown_out;
};

// Fits one method on `train` and returns its scorecard.
Scorecard train_card(const BinaryDataset& train, const TrainFlags& f, const Globals& g) {
  const Method m = parse_method(f.method);
  std::vector<int> w;
  const BinaryDataset* calib = &train;
  BinaryDataset rows;
  if (m == Method::kBaucInteger || m == Method::kBaucRounding) {
    TrainConfig tc;
    tc.M = f.M;
    tc.theta = f.theta;
    tc.lambda1 = f.lambda1;
    if (f.sample_size > 0) tc.sample_size = f.sample_size;
    else tc.sample_size.reset();
    tc.seed = g.seed;
    tc.mip.time_limit_seconds = g.time_limit;
    if (f.node_limit >= 0) tc.mip.node_limit = f.node_limit;
    const CoefVector c = m == Method::kBaucInteger ? train_bauc_integer(train, tc)
                                                   : train_bauc_rounding(train, tc);
    std::cerr << "solver: " << c.solver.status << " objective=" << c.solver.objective
              << " bound=" << c.solver.bound << " nodes=" << c.solver.nodes
              << " seconds=" << c.solver.seconds << '\n';
    w = c.integer_w();
    rows = training_rows(train, tc);
    calib = &rows;
  } else {
    DenseFit fit;
    if (m == Method::kL1) fit = regularization_path_select(train, f.theta, 1.0);
    else if (m == Method::kElasticNet) fit = regularization_path_select(train, f.theta, f.alpha_mix);
    else if (m == Method::kForward) fit = forward_select(train, f.theta, g.seed);
    else fit = backward_eliminate(train, f.theta, g.seed);
    if (fit.empty_selection) std::cerr << "warning: no question was selected\n";
    w = integerize(fit.w, f.M);
  }
  const InterceptFit ic = calibrate_intercept(w, *calib);
  Scorecard card = build_table(w, ic.w0, &train);
  card.separated = ic.separated;
  card.clamped = ic.clamped;
  card.method = method_name(m);
  card.M = f.M;
  card.theta = f.theta;
  card.seed = g.seed;
  return card;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and benchmark integer scoring systems"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  Globals g;
  app.add_option("--seed", g.seed, "random seed for splits and samples");
  app.add_option("--time-limit", g.time_limit, "MIP time limit in seconds");
  app.add_option("--tie-mode", g.tie_mode, "AUC tie handling: half or strict")
      ->check(CLI::IsMember({"half", "strict"}));

  // binarize
  auto* bin = app.add_subcommand("binarize", "CSV -> cached binary dataset JSON");
  DataFlags bin_data;
  bin_data.attach(bin);
  std::string bin_out;
  bin->add_option("--out", bin_out, "output JSON path ('-' for stdout)")->required();

  // train
  auto* train = app.add_subcommand("train", "fit one method and emit its scorecard");
  DataFlags train_data;
  train_data.attach(train);
  TrainFlags tf;
  train->add_option("--method", tf.method, "bauc-integer | bauc-rounding | l1 | elastic-net | "
                                           "forward | backward");
  train->add_option("--M", tf.M, "coefficient bound");
  train->add_option("--theta", tf.theta, "question budget");
  train->add_option("--lambda1", tf.lambda1, "L1 weight in the bAUC model");
  train->add_option("--sample-size", tf.sample_size, "rows sampled for bAUC methods (0 = all)");
  train->add_option("--alpha-mix", tf.alpha_mix, "elastic-net mixing parameter");
  train->add_option("--holdout", tf.holdout, "fraction held out for a test AUC (0 = none)");
  train->add_option("--node-limit", tf.node_limit, "branch-and-bound node limit");
  train->add_option("--json", tf.json_out, "scorecard JSON output path");
  train->add_option("--markdown", tf.markdown_out, "markdown output path (default stdout)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "AUC and bAUC of a scorecard on a dataset");
  DataFlags eval_data;
  eval_data.attach(eval);
  std::string eval_card;
  eval->add_option("--card", eval_card, "scorecard JSON")->required();

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "run an experiment config");
  std::string bench_config, bench_out;
  int bench_jobs = 0;
  bench->add_option("--config", bench_config, "experiment config file")->required();
  bench->add_option("--out", bench_out, "output directory (overrides the config)");
  bench->add_option("--jobs", bench_jobs, "worker threads (overrides the config)");

  // render
  auto* rend = app.add_subcommand("render", "scorecard JSON -> markdown or JSON");
  std::string rend_card, rend_format = "markdown", rend_out;
  rend->add_option("--card", rend_card, "scorecard JSON")->required();
  rend->add_option("--format", rend_format, "markdown or json")
      ->check(CLI::IsMember({"markdown", "json"}));
  rend->add_option("--out", rend_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, std::cerr, std::cerr);
  }

  try {
    const TieMode tie = parse_tie_mode(g.tie_mode);
    if (*bin) {
      write_text(bin_out, dataset_to_json(bin_data.load()).dump() + "\n");
    } else if (*train) {
      const BinaryDataset data = train_data.load();
      Scorecard card;
      if (tf.holdout > 0) {
        const SplitPair sp = split(data, 1.0 - tf.holdout, g.seed);
        card = train_card(sp.train, tf, g);
        const std::vector<double> wd(card.w.begin(), card.w.end());
        std::cerr << "holdout: n=" << sp.test.n()
                  << " auc=" << auc(score_sample(wd, sp.test), tie)
                  << " bauc=" << bauc(wd, sp.test) << '\n';
      } else {
        card = train_card(data, tf, g);
      }
      if (!tf.json_out.empty()) write_text(tf.json_out, render(card, RenderFormat::kJson));
      write_text(tf.markdown_out, render(card, RenderFormat::kMarkdown));
    } else if (*eval) {
      const Scorecard card = scorecard_from_json(read_json(eval_card));
      const BinaryDataset data = eval_data.load();
      if (card.w.size() != data.p()) {
        fail(ErrorKind::kInput, "scorecard has " + std::to_string(card.w.size()) +
                                    " points but the dataset has p = " + std::to_string(data.p()));
      }
      const std::vector<double> wd(card.w.begin(), card.w.end());
      nlohmann::json out;
      out["n"] = data.n();
      out["tie_mode"] = tie_mode_name(tie);
      out["auc"] = auc(score_sample(wd, data), tie);
      out["bauc"] = bauc(wd, data);
      out["nll"] = negative_log_likelihood(card.w0, wd, data);
      std::cout << out.dump(2) << '\n';
    } else if (*bench) {
      ExperimentConfig cfg = load_experiment_config(bench_config);
      cfg.tie_mode = tie;
      if (!bench_out.empty()) cfg.output_dir = bench_out;
      if (bench_jobs > 0) cfg.jobs = bench_jobs;
      if (cfg.output_dir.empty()) fail(ErrorKind::kConfig, "benchmark needs an output directory");
      const RunReport report = run_experiment(cfg);
      emit_report(report, cfg.output_dir, cfg.write_scorecards, cfg.bold_best);
      int failed = 0;
      for (const auto& d : report.details) failed += d.ok ? 0 : 1;
      std::cerr << "wrote " << report.details.size() << " runs (" << failed << " failed) to "
                << cfg.output_dir << '\n';
    } else if (*rend) {
      const Scorecard card = scorecard_from_json(read_json(rend_card));
      write_text(rend_out, render(card, rend_format == "json" ? RenderFormat::kJson
                                                              : RenderFormat::kMarkdown));
    }
  } catch (const Error& e) {
    std::cerr << error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
