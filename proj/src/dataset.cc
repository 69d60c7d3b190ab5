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

#include "scoring/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "scoring/error.h"
#include "scoring/random.h"

namespace scoring {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits one CSV record. Supports double-quoted fields with "" escapes.
// Returns false if the record ends inside an open quote.
bool split_record(const std::string& line, char delimiter,
                  std::vector<std::string>& fields) {
  fields.clear();
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  fields.push_back(trim(cell));
  return !quoted;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool is_truthy_level(const std::string& level) {
  std::string lower;
  for (char c : level) lower.push_back(static_cast<char>(std::tolower(c)));
  return lower == "t" || lower == "true" || lower == "yes" || lower == "y" ||
         lower == "1";
}

std::string level_of(const RawColumn& column, std::size_t row) {
  return column.is_missing(row) ? std::string(kMissingLevel) : column.text[row];
}

// Levels sorted by descending frequency, ties in lexical order.
std::vector<std::pair<std::string, std::size_t>> level_counts(
    const RawColumn& column) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < column.text.size(); ++i) {
    ++counts[level_of(column, i)];
  }
  std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(),
                                                          counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return sorted;
}

ColumnRule numeric_rule(const RawColumn& column,
                        std::vector<std::string>& warnings) {
  ColumnRule rule;
  rule.column = column.name;
  std::vector<double> values;
  for (const auto& v : column.numeric) {
    if (v) values.push_back(*v);
    else rule.missing_dummy = true;
  }
  std::sort(values.begin(), values.end());
  std::vector<double> distinct = values;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  const std::size_t d = distinct.size();
  if (d <= 1) {
    rule.kind = RuleKind::kDrop;
    rule.missing_dummy = false;
    warnings.push_back("column '" + column.name +
                       "' has fewer than two distinct values; dropped");
    return rule;
  }
  if (d == 2) {
    if (distinct[0] == 0.0 && distinct[1] == 1.0) {
      rule.kind = RuleKind::kIdentity;
      rule.levels = {"1"};
      return rule;
    }
    rule.kind = RuleKind::kBoundaries;
    rule.thresholds = {0.5 * (distinct[0] + distinct[1])};
    warnings.push_back("numeric column '" + column.name +
                       "' has fewer than three distinct values; using one "
                       "dummy per value boundary");
    return rule;
  }

  // Boundary i sits between distinct[i] and distinct[i + 1]. A tercile cut
  // goes right above the k-th order statistic, so ties stay in the lower bin.
  const std::size_t n = values.size();
  auto boundary_after = [&](std::size_t k) {
    const double vk = values[std::max<std::size_t>(k, 1) - 1];
    std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), vk) -
        distinct.begin());
    return std::min(idx, d - 2);
  };
  std::size_t b1 = boundary_after(n / 3);
  std::size_t b2 = boundary_after(2 * n / 3);
  if (b2 <= b1) b2 = b1 + 1;
  if (b2 > d - 2) {
    b2 = d - 2;
    b1 = b2 - 1;
  }
  rule.kind = RuleKind::kTercile;
  rule.thresholds = {0.5 * (distinct[b1] + distinct[b1 + 1]),
                     0.5 * (distinct[b2] + distinct[b2 + 1])};
  return rule;
}

ColumnRule categorical_rule(const RawColumn& column,
                            std::vector<std::string>& warnings) {
  ColumnRule rule;
  rule.column = column.name;
  const auto counts = level_counts(column);
  if (counts.size() <= 1) {
    rule.kind = RuleKind::kDrop;
    warnings.push_back("column '" + column.name +
                       "' has a single level; dropped");
    return rule;
  }
  if (counts.size() == 2) {
    rule.kind = RuleKind::kIdentity;
    const auto& a = counts[0].first;
    const auto& b = counts[1].first;
    if (is_truthy_level(a) && !is_truthy_level(b)) rule.levels = {a};
    else rule.levels = {b};  // truthy level, otherwise the rarer one
    return rule;
  }
  rule.kind = RuleKind::kTopLevels;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, counts.size()); ++i) {
    rule.levels.push_back(counts[i].first);
  }
  rule.keep_other = counts.size() > 3;
  return rule;
}

void check_rule(const ColumnRule& rule) {
  if (rule.kind == RuleKind::kTercile) {
    if (rule.thresholds.size() != 2 || !(rule.thresholds[0] < rule.thresholds[1])) {
      fail(ErrorKind::kConfig,
           "tercile rule for '" + rule.column + "' needs thresholds t1 < t2");
    }
  }
  if (rule.kind == RuleKind::kTopLevels &&
      (rule.levels.empty() || rule.levels.size() > 3)) {
    fail(ErrorKind::kConfig,
         "categorical rule for '" + rule.column + "' needs 1 to 3 levels");
  }
  if (rule.kind == RuleKind::kIdentity && rule.levels.size() != 1) {
    fail(ErrorKind::kConfig,
         "binary rule for '" + rule.column + "' needs exactly one level");
  }
}

}  // namespace

bool is_missing_token(const std::string& cell) {
  return cell.empty() || cell == "?" || cell == "NA" || cell == "NaN";
}

const RawColumn* RawTable::find(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const ColumnRule* BinarizationSpec::find(const std::string& column) const {
  for (const auto& r : rules) {
    if (r.column == column) return &r;
  }
  return nullptr;
}

RawTable parse_csv(std::istream& in, const CsvOptions& options,
                   const std::string& source_name) {
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) {
    fail(ErrorKind::kInput, source_name + ": empty file");
  }
  if (line_no == 1 && line.size() >= 3 &&
      line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (!split_record(line, options.delimiter, header)) {
    fail(ErrorKind::kInput,
         source_name + ":" + std::to_string(line_no) + ": unterminated quote");
  }

  int label_index = -1;
  std::vector<int> keep;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == options.label_column) {
      label_index = static_cast<int>(c);
      continue;
    }
    const bool excluded =
        std::find(options.excluded_columns.begin(), options.excluded_columns.end(),
                  header[c]) != options.excluded_columns.end();
    if (!excluded) keep.push_back(static_cast<int>(c));
  }
  if (label_index < 0) {
    fail(ErrorKind::kInput, source_name + ": label column '" +
                                options.label_column + "' not found in header");
  }

  RawTable table;
  table.columns.resize(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    table.columns[k].name = header[keep[k]];
  }

  std::set<std::string> label_values;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!split_record(line, options.delimiter, fields)) {
      fail(ErrorKind::kInput, source_name + ":" + std::to_string(line_no) +
                                  ": unterminated quote");
    }
    if (fields.size() != header.size()) {
      fail(ErrorKind::kInput,
           source_name + ":" + std::to_string(line_no) + ": expected " +
               std::to_string(header.size()) + " fields, found " +
               std::to_string(fields.size()));
    }
    const std::string& label = fields[label_index];
    if (is_missing_token(label)) {
      fail(ErrorKind::kInput, source_name + ":" + std::to_string(line_no) +
                                  ": missing value in label column '" +
                                  options.label_column + "'");
    }
    label_values.insert(label);
    if (label_values.size() > 2) {
      fail(ErrorKind::kInput,
           source_name + ":" + std::to_string(line_no) +
               ": label column has more than two distinct values");
    }
    table.labels.push_back(label == options.positive_label ? +1 : -1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const std::string& cell = fields[keep[k]];
      table.columns[k].text.push_back(is_missing_token(cell) ? std::string()
                                                             : cell);
    }
  }
  table.n_rows = table.labels.size();
  if (table.n_rows == 0) {
    fail(ErrorKind::kInput, source_name + ": no data rows");
  }

  for (auto& column : table.columns) {
    bool numeric = false;
    std::vector<std::optional<double>> parsed(table.n_rows);
    for (std::size_t i = 0; i < table.n_rows; ++i) {
      if (column.is_missing(i)) continue;
      parsed[i] = parse_number(column.text[i]);
      if (!parsed[i]) {
        numeric = false;
        break;
      }
      numeric = true;
    }
    if (numeric) {
      column.kind = ColumnKind::kNumeric;
      column.numeric = std::move(parsed);
    } else {
      column.kind = ColumnKind::kCategorical;
    }
  }
  return table;
}

RawTable load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInput, path + ": cannot open file");
  return parse_csv(in, options, path);
}

BinarizationSpec infer_spec(const RawTable& table) {
  if (table.n_rows == 0) fail(ErrorKind::kInput, "cannot infer rules from an empty table");
  BinarizationSpec spec;
  for (const auto& column : table.columns) {
    spec.rules.push_back(column.kind == ColumnKind::kNumeric
                             ? numeric_rule(column, spec.warnings)
                             : categorical_rule(column, spec.warnings));
  }
  return spec;
}

void apply_override(BinarizationSpec& spec, const RawTable& table,
                    const std::string& column, const std::string& rule_text) {
  const RawColumn* raw = table.find(column);
  if (raw == nullptr) {
    fail(ErrorKind::kConfig, "override for unknown column '" + column + "'");
  }
  ColumnRule rule;
  rule.column = column;
  const auto colon = rule_text.find(':');
  const std::string head = rule_text.substr(0, colon);
  const std::string tail =
      colon == std::string::npos ? std::string() : rule_text.substr(colon + 1);
  if (head == "drop") {
    rule.kind = RuleKind::kDrop;
  } else if (head == "thresholds") {
    if (raw->kind != ColumnKind::kNumeric) {
      fail(ErrorKind::kConfig, "thresholds override on non-numeric column '" +
                                   column + "'");
    }
    std::stringstream ss(tail);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto v = parse_number(trim(item));
      if (!v) fail(ErrorKind::kConfig, "bad threshold '" + item + "'");
      rule.thresholds.push_back(*v);
    }
    rule.kind = RuleKind::kTercile;
    for (std::size_t i = 0; i < table.n_rows; ++i) {
      if (!raw->numeric[i]) rule.missing_dummy = true;
    }
  } else if (head == "categorical") {
    const int k = std::atoi(tail.c_str());
    if (k < 1 || k > 3) fail(ErrorKind::kConfig, "categorical:k needs k in 1..3");
    const auto counts = level_counts(*raw);
    rule.kind = RuleKind::kTopLevels;
    for (int i = 0; i < k && i < static_cast<int>(counts.size()); ++i) {
      rule.levels.push_back(counts[i].first);
    }
    rule.keep_other = counts.size() > rule.levels.size();
  } else if (head == "binary") {
    rule.kind = RuleKind::kIdentity;
    rule.levels = {tail};
  } else {
    fail(ErrorKind::kConfig, "unknown override rule '" + rule_text + "'");
  }
  check_rule(rule);
  for (auto& r : spec.rules) {
    if (r.column == column) {
      r = rule;
      return;
    }
  }
  spec.rules.push_back(rule);
}

// ---------------------------------------------------------------------------

BinaryDataset::BinaryDataset(std::vector<std::uint8_t> x, std::size_t p,
                             std::vector<int> y,
                             std::vector<std::vector<int>> groups,
                             std::vector<FeatureLabel> features,
                             std::vector<std::string> questions)
    : x_(std::move(x)),
      p_(p),
      y_(std::move(y)),
      groups_(std::move(groups)),
      features_(std::move(features)),
      questions_(std::move(questions)) {
  if (x_.size() != y_.size() * p_) {
    fail(ErrorKind::kInput, "feature matrix size does not match n * p");
  }
  for (auto v : x_) {
    if (v > 1) fail(ErrorKind::kInput, "feature matrix entries must be 0 or 1");
  }
  for (int label : y_) {
    if (label != 1 && label != -1) fail(ErrorKind::kInput, "labels must be +1 or -1");
  }
  group_of_.assign(p_, -1);
  for (std::size_t s = 0; s < groups_.size(); ++s) {
    for (int j : groups_[s]) {
      if (j < 0 || static_cast<std::size_t>(j) >= p_ || group_of_[j] != -1) {
        fail(ErrorKind::kInput, "groups must be disjoint subsets of the features");
      }
      group_of_[j] = static_cast<int>(s);
    }
  }
  for (int g : group_of_) {
    if (g < 0) fail(ErrorKind::kInput, "groups must cover every feature");
  }
  if (features_.empty()) {
    for (std::size_t j = 0; j < p_; ++j) {
      features_.push_back({"Q" + std::to_string(group_of_[j] + 1),
                           "x" + std::to_string(j + 1)});
    }
  }
  if (features_.size() != p_) {
    fail(ErrorKind::kInput, "one feature label is required per column");
  }
  if (questions_.empty()) {
    for (const auto& g : groups_) {
      questions_.push_back(g.empty() ? std::string() : features_[g[0]].question);
    }
  }
  if (questions_.size() != groups_.size()) {
    fail(ErrorKind::kInput, "one question label is required per group");
  }
}

std::size_t BinaryDataset::n_pos() const {
  return static_cast<std::size_t>(std::count(y_.begin(), y_.end(), 1));
}

BinaryDataset BinaryDataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::uint8_t> x;
  x.reserve(rows.size() * p_);
  std::vector<int> y;
  y.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n()) fail(ErrorKind::kInternal, "row index out of range");
    auto src = row(r);
    x.insert(x.end(), src.begin(), src.end());
    y.push_back(y_[r]);
  }
  return BinaryDataset(std::move(x), p_, std::move(y), groups_, features_,
                       questions_);
}

BinaryDataset binarize(const RawTable& table, const BinarizationSpec& spec) {
  struct Emitter {
    const RawColumn* column;
    const ColumnRule* rule;
    int first_feature;
    int width;
  };
  std::vector<Emitter> emitters;
  std::vector<FeatureLabel> features;
  std::vector<std::vector<int>> groups;
  std::vector<std::string> questions;

  for (const auto& column : table.columns) {
    const ColumnRule* rule = spec.find(column.name);
    if (rule == nullptr) {
      fail(ErrorKind::kConfig, "binarization rules do not cover column '" +
                                   column.name + "'");
    }
    check_rule(*rule);
    if (rule->kind == RuleKind::kDrop) continue;
    const bool numeric_rule_kind =
        rule->kind == RuleKind::kTercile || rule->kind == RuleKind::kBoundaries;
    if (numeric_rule_kind && column.kind != ColumnKind::kNumeric) {
      fail(ErrorKind::kConfig, "numeric rule applied to categorical column '" +
                                   column.name + "'");
    }
    std::vector<std::string> responses;
    switch (rule->kind) {
      case RuleKind::kTercile: {
        const std::string a = format_number(rule->thresholds[0]);
        const std::string b = format_number(rule->thresholds[1]);
        responses = {"<= " + a, a + " < x <= " + b, "> " + b};
        break;
      }
      case RuleKind::kBoundaries:
        for (double t : rule->thresholds) responses.push_back("> " + format_number(t));
        break;
      case RuleKind::kTopLevels:
        responses = rule->levels;
        if (rule->keep_other) responses.push_back("Other");
        break;
      case RuleKind::kIdentity:
        responses = rule->levels;
        break;
      case RuleKind::kDrop:
        break;
    }
    if (numeric_rule_kind && rule->missing_dummy) responses.push_back(kMissingLevel);

    Emitter e{&column, rule, static_cast<int>(features.size()),
              static_cast<int>(responses.size())};
    std::vector<int> group;
    for (const auto& r : responses) {
      group.push_back(static_cast<int>(features.size()));
      features.push_back({column.name, r});
    }
    groups.push_back(std::move(group));
    questions.push_back(column.name);
    emitters.push_back(e);
  }

  const std::size_t p = features.size();
  std::vector<std::uint8_t> x(table.n_rows * p, 0);
  for (const auto& e : emitters) {
    const RawColumn& col = *e.column;
    const ColumnRule& rule = *e.rule;
    for (std::size_t i = 0; i < table.n_rows; ++i) {
      std::uint8_t* out = x.data() + i * p + e.first_feature;
      switch (rule.kind) {
        case RuleKind::kTercile:
        case RuleKind::kBoundaries: {
          const auto& v = col.numeric[i];
          if (!v) {
            if (!rule.missing_dummy) {
              fail(ErrorKind::kInput, "row " + std::to_string(i + 1) +
                                          ": missing value in '" + col.name +
                                          "' without a missing dummy");
            }
            out[e.width - 1] = 1;
          } else if (rule.kind == RuleKind::kTercile) {
            const int bin = *v <= rule.thresholds[0]   ? 0
                            : *v <= rule.thresholds[1] ? 1
                                                       : 2;
            out[bin] = 1;
          } else {
            for (std::size_t b = 0; b < rule.thresholds.size(); ++b) {
              out[b] = *v > rule.thresholds[b] ? 1 : 0;
            }
          }
          break;
        }
        case RuleKind::kTopLevels: {
          const std::string level = level_of(col, i);
          auto it = std::find(rule.levels.begin(), rule.levels.end(), level);
          if (it != rule.levels.end()) {
            out[it - rule.levels.begin()] = 1;
          } else if (rule.keep_other) {
            out[rule.levels.size()] = 1;
          } else {
            fail(ErrorKind::kInput, "row " + std::to_string(i + 1) + ": value '" +
                                        level + "' of '" + col.name +
                                        "' is outside the rule's levels");
          }
          break;
        }
        case RuleKind::kIdentity: {
          bool hit;
          if (col.kind == ColumnKind::kNumeric) {
            const auto level = parse_number(rule.levels[0]);
            hit = col.numeric[i] && level && *col.numeric[i] == *level;
          } else {
            hit = level_of(col, i) == rule.levels[0];
          }
          out[0] = hit ? 1 : 0;
          break;
        }
        case RuleKind::kDrop:
          break;
      }
    }
  }
  return BinaryDataset(std::move(x), p, table.labels, std::move(groups),
                       std::move(features), std::move(questions));
}

nlohmann::json dataset_to_json(const BinaryDataset& data) {
  nlohmann::json doc;
  doc["format"] = "scoring.binary_dataset.v1";
  doc["n"] = data.n();
  doc["p"] = data.p();
  auto& features = doc["features"] = nlohmann::json::array();
  for (const auto& f : data.features()) {
    features.push_back({{"question", f.question}, {"response", f.response}});
  }
  doc["questions"] = data.questions();
  doc["groups"] = data.groups();
  doc["labels"] = data.labels();
  auto& rows = doc["X"] = nlohmann::json::array();
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::string bits;
    for (auto v : data.row(i)) bits.push_back(v ? '1' : '0');
    rows.push_back(std::move(bits));
  }
  return doc;
}

BinaryDataset dataset_from_json(const nlohmann::json& doc) {
  try {
    const std::size_t p = doc.at("p").get<std::size_t>();
    std::vector<FeatureLabel> features;
    for (const auto& f : doc.at("features")) {
      features.push_back({f.at("question").get<std::string>(),
                          f.at("response").get<std::string>()});
    }
    auto groups = doc.at("groups").get<std::vector<std::vector<int>>>();
    auto labels = doc.at("labels").get<std::vector<int>>();
    std::vector<std::string> questions;
    if (doc.contains("questions")) {
      questions = doc.at("questions").get<std::vector<std::string>>();
    }
    std::vector<std::uint8_t> x;
    for (const auto& row : doc.at("X")) {
      const auto bits = row.get<std::string>();
      if (bits.size() != p) fail(ErrorKind::kInput, "bit-row length differs from p");
      for (char c : bits) {
        if (c != '0' && c != '1') fail(ErrorKind::kInput, "bit-rows may only hold 0/1");
        x.push_back(c == '1' ? 1 : 0);
      }
    }
    return BinaryDataset(std::move(x), p, std::move(labels), std::move(groups),
                         std::move(features), std::move(questions));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("malformed dataset document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

std::size_t train_size(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    fail(ErrorKind::kConfig, "split fraction must lie strictly between 0 and 1");
  }
  if (n < 2) fail(ErrorKind::kInput, "need at least two rows to split");
  const auto n_train =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    fail(ErrorKind::kConfig, "split leaves one side without rows");
  }
  return n_train;
}

SplitPair make_split(const BinaryDataset& data, std::vector<std::size_t> train,
                     std::vector<std::size_t> test, double fraction,
                     std::uint64_t seed) {
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  SplitPair out;
  out.train = data.select_rows(train);
  out.test = data.select_rows(test);
  out.seed = seed;
  out.fraction = fraction;
  out.train_rows = std::move(train);
  out.test_rows = std::move(test);
  return out;
}

}  // namespace

SplitPair split(const BinaryDataset& data, double fraction, std::uint64_t seed) {
  const std::size_t n_train = train_size(data.n(), fraction);
  Rng rng(seed);
  const auto order = rng.permutation(data.n());
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test(order.begin() + n_train, order.end());
  return make_split(data, std::move(train), std::move(test), fraction, seed);
}

SplitPair stratified_split(const BinaryDataset& data, double fraction,
                           std::uint64_t seed) {
  const std::size_t n_train = train_size(data.n(), fraction);
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.n(); ++i) {
    (data.label(i) > 0 ? pos : neg).push_back(i);
  }
  Rng rng(seed);
  auto shuffle = [&](std::vector<std::size_t>& v) {
    const auto order = rng.permutation(v.size());
    std::vector<std::size_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[order[i]];
    v = std::move(out);
  };
  shuffle(pos);
  shuffle(neg);
  auto pos_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(pos.size())));
  // Keep each class on both sides when it has at least two members.
  if (pos.size() >= 2) pos_train = std::clamp<std::size_t>(pos_train, 1, pos.size() - 1);
  pos_train = std::min(pos_train, n_train);
  std::size_t neg_train = n_train - pos_train;
  if (neg_train > neg.size()) {
    neg_train = neg.size();
    pos_train = n_train - neg_train;
  }
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < pos.size(); ++i) (i < pos_train ? train : test).push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i) (i < neg_train ? train : test).push_back(neg[i]);
  return make_split(data, std::move(train), std::move(test), fraction, seed);
}

BinaryDataset subsample(const BinaryDataset& data, std::size_t m,
                        std::uint64_t seed, const SubsampleOptions& options) {
  const std::size_t n = data.n();
  if (m > n) fail(ErrorKind::kConfig, "sample size exceeds the number of rows");
  const std::size_t n_pos = data.n_pos();
  if (n_pos == 0 || n_pos == n) {
    fail(ErrorKind::kInput, "cannot sample both classes from single-class data");
  }
  if (m == n) return data;
  if (m < 2) fail(ErrorKind::kConfig, "a sample needs at least two rows to hold both classes");

  Rng rng(seed);
  if (options.stratified) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (data.label(i) > 0 ? pos : neg).push_back(i);
    auto m_pos = static_cast<std::size_t>(std::llround(
        static_cast<double>(m) * static_cast<double>(pos.size()) / static_cast<double>(n)));
    m_pos = std::clamp<std::size_t>(m_pos, 1, m - 1);
    m_pos = std::min(m_pos, pos.size());
    std::size_t m_neg = std::min(m - m_pos, neg.size());
    m_pos = m - m_neg;
    std::vector<std::size_t> rows;
    const auto po = rng.permutation(pos.size());
    const auto no = rng.permutation(neg.size());
    for (std::size_t i = 0; i < m_pos; ++i) rows.push_back(pos[po[i]]);
    for (std::size_t i = 0; i < m_neg; ++i) rows.push_back(neg[no[i]]);
    std::sort(rows.begin(), rows.end());
    return data.select_rows(rows);
  }

  for (int attempt = 0; attempt < options.max_redraws; ++attempt) {
    const auto order = rng.permutation(n);
    std::vector<std::size_t> rows(order.begin(), order.begin() + m);
    std::size_t pos = 0;
    for (auto r : rows) pos += data.label(r) > 0 ? 1 : 0;
    if (pos == 0 || pos == m) continue;
    std::sort(rows.begin(), rows.end());
    return data.select_rows(rows);
  }
  fail(ErrorKind::kInput, "could not draw a sample containing both classes in " +
                              std::to_string(options.max_redraws) + " attempts");
}

double PairDiffSet::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

PairDiffSet pair_differences(const BinaryDataset& data) {
  const std::size_t p = data.p();
  // Unique row patterns per class, in first-appearance order.
  struct Patterns {
    std::vector<std::string> rows;
    std::vector<double> counts;
    std::unordered_map<std::string, std::size_t> index;
  } pos, neg;
  for (std::size_t i = 0; i < data.n(); ++i) {
    auto r = data.row(i);
    std::string key(r.begin(), r.end());
    Patterns& side = data.label(i) > 0 ? pos : neg;
    auto [it, inserted] = side.index.emplace(key, side.rows.size());
    if (inserted) {
      side.rows.push_back(std::move(key));
      side.counts.push_back(1.0);
    } else {
      side.counts[it->second] += 1.0;
    }
  }
  if (pos.rows.empty() || neg.rows.empty()) {
    fail(ErrorKind::kInput, "pair differences need both classes");
  }

  PairDiffSet out;
  out.p = p;
  out.n_pos = data.n_pos();
  out.n_neg = data.n_neg();
  std::unordered_map<std::string, std::size_t> seen;
  std::string key(p, '\0');
  for (std::size_t a = 0; a < pos.rows.size(); ++a) {
    for (std::size_t b = 0; b < neg.rows.size(); ++b) {
      for (std::size_t j = 0; j < p; ++j) {
        key[j] = static_cast<char>(neg.rows[b][j] - pos.rows[a][j]);
      }
      const double w = pos.counts[a] * neg.counts[b];
      auto [it, inserted] = seen.emplace(key, out.weights.size());
      if (inserted) {
        for (char c : key) out.diffs.push_back(static_cast<std::int8_t>(c));
        out.weights.push_back(w);
      } else {
        out.weights[it->second] += w;
      }
    }
  }
  return out;
}

}  // namespace scoring
