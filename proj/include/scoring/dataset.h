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

#ifndef SCORING_DATASET_H_
#define SCORING_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace scoring {

// ---------------------------------------------------------------------------
// Raw tabular input
// ---------------------------------------------------------------------------

enum class ColumnKind { kNumeric, kCategorical };

struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  // Original cell text, one per row. Missing cells are stored as "".
  std::vector<std::string> text;
  // Parsed values for numeric columns; nullopt marks a missing cell.
  std::vector<std::optional<double>> numeric;

  bool is_missing(std::size_t row) const { return text[row].empty(); }
};

struct RawTable {
  std::vector<RawColumn> columns;
  std::vector<int> labels;  // +1 / -1
  std::size_t n_rows = 0;

  const RawColumn* find(const std::string& name) const;
};

struct CsvOptions {
  std::string label_column;
  std::string positive_label;
  std::vector<std::string> excluded_columns;
  char delimiter = ',';
};

// Cells equal to "", "?", "NA" or "NaN" (after trimming) count as missing.
bool is_missing_token(const std::string& cell);

RawTable load_csv(const std::string& path, const CsvOptions& options);
RawTable parse_csv(std::istream& in, const CsvOptions& options,
                   const std::string& source_name = "<stream>");

// ---------------------------------------------------------------------------
// Binarization rules
// ---------------------------------------------------------------------------

enum class RuleKind {
  kTercile,     // x <= t1, t1 < x <= t2, x > t2
  kBoundaries,  // one dummy x > b per boundary (few distinct values)
  kTopLevels,   // one dummy per listed level, plus optional "other"
  kIdentity,    // single dummy: value == level
  kDrop,        // constant or excluded column, no dummies
};

struct ColumnRule {
  std::string column;
  RuleKind kind = RuleKind::kDrop;
  std::vector<double> thresholds;   // kTercile (2 values), kBoundaries
  std::vector<std::string> levels;  // kTopLevels, kIdentity (1 value)
  bool keep_other = false;          // kTopLevels
  bool missing_dummy = false;       // numeric rules: extra "missing" dummy
};

struct BinarizationSpec {
  std::vector<ColumnRule> rules;
  std::vector<std::string> warnings;

  const ColumnRule* find(const std::string& column) const;
};

// Label used for missing categorical values.
inline constexpr const char* kMissingLevel = "Missing";

BinarizationSpec infer_spec(const RawTable& table);

// Replaces the inferred rule for a column. Accepted forms:
//   "thresholds:30,50"  "categorical:2"  "binary:<level>"  "drop"
void apply_override(BinarizationSpec& spec, const RawTable& table,
                    const std::string& column, const std::string& rule);

// ---------------------------------------------------------------------------
// Binary dataset
// ---------------------------------------------------------------------------

struct FeatureLabel {
  std::string question;
  std::string response;

  bool operator==(const FeatureLabel&) const = default;
};

class BinaryDataset {
 public:
  BinaryDataset() = default;

  // Validates every invariant: 0/1 entries, +-1 labels, groups partition
  // the feature indices.
  BinaryDataset(std::vector<std::uint8_t> x, std::size_t p,
                std::vector<int> y, std::vector<std::vector<int>> groups,
                std::vector<FeatureLabel> features,
                std::vector<std::string> questions = {});

  std::size_t n() const { return y_.size(); }
  std::size_t p() const { return p_; }
  std::size_t q() const { return groups_.size(); }

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {x_.data() + i * p_, p_};
  }
  std::uint8_t at(std::size_t i, std::size_t j) const { return x_[i * p_ + j]; }
  int label(std::size_t i) const { return y_[i]; }
  const std::vector<int>& labels() const { return y_; }
  const std::vector<std::uint8_t>& matrix() const { return x_; }

  const std::vector<std::vector<int>>& groups() const { return groups_; }
  int group_of(std::size_t j) const { return group_of_[j]; }
  const std::vector<FeatureLabel>& features() const { return features_; }
  const std::vector<std::string>& questions() const { return questions_; }

  std::size_t n_pos() const;
  std::size_t n_neg() const { return n() - n_pos(); }

  BinaryDataset select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const BinaryDataset&) const = default;

 private:
  std::vector<std::uint8_t> x_;
  std::size_t p_ = 0;
  std::vector<int> y_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  std::vector<FeatureLabel> features_;
  std::vector<std::string> questions_;
};

BinaryDataset binarize(const RawTable& table, const BinarizationSpec& spec);

nlohmann::json dataset_to_json(const BinaryDataset& data);
BinaryDataset dataset_from_json(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Splits and samples
// ---------------------------------------------------------------------------

struct SplitPair {
  BinaryDataset train;
  BinaryDataset test;
  std::uint64_t seed = 0;
  double fraction = 0.0;
  std::vector<std::size_t> train_rows;  // source row indices
  std::vector<std::size_t> test_rows;
};

// Uniform permutation, then the first round(fraction * n) rows train.
SplitPair split(const BinaryDataset& data, double fraction, std::uint64_t seed);

// Same sizes as split() but each class is permuted and divided separately.
SplitPair stratified_split(const BinaryDataset& data, double fraction,
                           std::uint64_t seed);

struct SubsampleOptions {
  bool stratified = false;
  int max_redraws = 1000;
};

// Uniform sample of m rows without replacement; redrawn while a class is
// missing. m == n returns the rows in their original order.
BinaryDataset subsample(const BinaryDataset& data, std::size_t m,
                        std::uint64_t seed,
                        const SubsampleOptions& options = {});

// ---------------------------------------------------------------------------
// Pairwise ranking differences
// ---------------------------------------------------------------------------

// Deduplicated x_neg - x_pos vectors over all positive/negative pairs.
struct PairDiffSet {
  std::size_t p = 0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::vector<std::int8_t> diffs;  // size() * p, row-major
  std::vector<double> weights;     // multiplicity of each vector

  std::size_t size() const { return weights.size(); }
  std::span<const std::int8_t> diff(std::size_t k) const {
    return {diffs.data() + k * p, p};
  }
  double total_weight() const;
};

PairDiffSet pair_differences(const BinaryDataset& data);

}  // namespace scoring

#endif  // SCORING_DATASET_H_
