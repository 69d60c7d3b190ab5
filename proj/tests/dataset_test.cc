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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "scoring/dataset.h"
#include "scoring/error.h"
#include "scoring/random.h"
#include "synthetic.h"

namespace scoring {
namespace {

RawTable parse(const std::string& csv, const std::string& label, const std::string& pos,
               std::vector<std::string> exclude = {}) {
  std::istringstream in(csv);
  CsvOptions o;
  o.label_column = label;
  o.positive_label = pos;
  o.excluded_columns = std::move(exclude);
  return parse_csv(in, o, "t.csv");
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInternal;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(LoadCsv, MapsLabels) {
  const RawTable t = parse("a,y\n1,yes\n2,yes\n3,no\n4,yes\n", "y", "yes");
  EXPECT_EQ(t.labels, (std::vector<int>{1, 1, -1, 1}));
  EXPECT_EQ(t.n_rows, 4u);
}

TEST(LoadCsv, InfersColumnKinds) {
  const RawTable t = parse("age,color,y\n31,red,1\n45,blue,0\n,red,1\n", "y", "1");
  ASSERT_EQ(t.columns.size(), 2u);
  EXPECT_EQ(t.columns[0].kind, ColumnKind::kNumeric);
  EXPECT_FALSE(t.columns[0].numeric[2].has_value());
  EXPECT_EQ(t.columns[1].kind, ColumnKind::kCategorical);
}

TEST(LoadCsv, ExcludesColumns) {
  const RawTable t = parse("age,duration,y\n1,100,a\n2,200,b\n", "y", "a", {"duration"});
  ASSERT_EQ(t.columns.size(), 1u);
  EXPECT_EQ(t.find("duration"), nullptr);
}

TEST(LoadCsv, QuotedFieldsAndMissingTokens) {
  const RawTable t = parse("name,x,y\n\"a,b\",?,1\n\"c\"\"d\",NA,0\ne,3,1\n", "y", "1");
  EXPECT_EQ(t.columns[0].text[0], "a,b");
  EXPECT_EQ(t.columns[0].text[1], "c\"d");
  EXPECT_TRUE(t.columns[1].is_missing(0));
  EXPECT_TRUE(t.columns[1].is_missing(1));
  EXPECT_EQ(t.columns[1].kind, ColumnKind::kNumeric);
}

TEST(LoadCsv, ErrorsCarryLocation) {
  EXPECT_EQ(kind_of([] { parse("", "y", "1"); }), ErrorKind::kInput);
  EXPECT_NE(message_of([] { parse("a,b\n1,2\n", "y", "1"); }).find("label column 'y'"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse("a,y\n1,1\n1,2,3\n", "y", "1"); }).find("t.csv:3"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse("a,y\n1,a\n2,b\n3,c\n", "y", "a"); }).find("t.csv:4"),
            std::string::npos);
  EXPECT_EQ(kind_of([] { load_csv("/nonexistent/file.csv", {}); }), ErrorKind::kInput);
}

TEST(InferSpec, UniformNumericTerciles) {
  const RawTable t = parse("v,y\n1,1\n2,0\n3,1\n4,0\n5,1\n6,0\n7,1\n8,0\n9,1\n", "y", "1");
  const BinarizationSpec s = infer_spec(t);
  ASSERT_EQ(s.rules[0].kind, RuleKind::kTercile);
  const BinaryDataset d = binarize(t, s);
  std::vector<int> counts(3, 0);
  for (std::size_t i = 0; i < d.n(); ++i)
    for (int k = 0; k < 3; ++k) counts[k] += d.at(i, k);
  EXPECT_EQ(counts, (std::vector<int>{3, 3, 3}));
  EXPECT_DOUBLE_EQ(s.rules[0].thresholds[0], 3.5);
  EXPECT_DOUBLE_EQ(s.rules[0].thresholds[1], 6.5);
}

TEST(InferSpec, CategoricalTopThreePlusOther) {
  std::string csv = "c,y\n";
  const std::map<std::string, int> freq = {{"A", 50}, {"B", 30}, {"C", 15}, {"D", 3}, {"E", 2}};
  for (const auto& [level, k] : freq)
    for (int i = 0; i < k; ++i) csv += level + "," + (i % 2 ? "1" : "0") + "\n";
  const RawTable t = parse(csv, "y", "1");
  const BinarizationSpec s = infer_spec(t);
  EXPECT_EQ(s.rules[0].kind, RuleKind::kTopLevels);
  EXPECT_EQ(s.rules[0].levels, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_TRUE(s.rules[0].keep_other);
  const BinaryDataset d = binarize(t, s);
  ASSERT_EQ(d.p(), 4u);
  EXPECT_EQ(d.features()[3].response, "Other");
}

TEST(InferSpec, BinaryColumnIsIdentity) {
  const RawTable t = parse("b,y\n0,1\n1,0\n1,1\n", "y", "1");
  const BinarizationSpec s = infer_spec(t);
  EXPECT_EQ(s.rules[0].kind, RuleKind::kIdentity);
  const BinaryDataset d = binarize(t, s);
  EXPECT_EQ(d.p(), 1u);
  EXPECT_EQ(d.matrix(), (std::vector<std::uint8_t>{0, 1, 1}));
}

TEST(InferSpec, FewDistinctNumericsWarn) {
  const RawTable t = parse("v,c,y\n2,k,1\n5,k,0\n5,k,1\n", "y", "1");
  const BinarizationSpec s = infer_spec(t);
  EXPECT_EQ(s.rules[0].kind, RuleKind::kBoundaries);
  EXPECT_EQ(s.rules[1].kind, RuleKind::kDrop);
  EXPECT_EQ(s.warnings.size(), 2u);
  EXPECT_EQ(binarize(t, s).q(), 1u);
}

TEST(InferSpec, MissingCategoricalIsALevel) {
  const RawTable t = parse("c,y\na,1\n?,0\n?,1\nb,0\nc,1\nd,0\n?,1\n", "y", "1");
  const BinarizationSpec s = infer_spec(t);
  EXPECT_EQ(s.rules[0].levels[0], kMissingLevel);
}

TEST(Binarize, ThresholdIntervals) {
  const RawTable t = parse("age,y\n25,1\n40,0\n60,1\n30,0\n50,1\n", "y", "1");
  BinarizationSpec s = infer_spec(t);
  apply_override(s, t, "age", "thresholds:30,50");
  const BinaryDataset d = binarize(t, s);
  ASSERT_EQ(d.p(), 3u);
  const std::vector<std::vector<int>> want = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  for (std::size_t i = 0; i < d.n(); ++i)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(d.at(i, k), want[i][k]) << i << "," << k;
  EXPECT_EQ(d.features()[0].question, "age");
  EXPECT_EQ(d.features()[0].response, "<= 30");
}

TEST(Binarize, GroupsFollowColumns) {
  std::string csv = "gender,age,y\n";
  const char* g[] = {"Woman", "Man", "Non-binary"};
  for (int i = 0; i < 12; ++i) csv += std::string(g[i % 3]) + "," + std::to_string(20 + 5 * i) + "," + (i % 2 ? "1" : "0") + "\n";
  const RawTable t = parse(csv, "y", "1");
  const BinaryDataset d = binarize(t, infer_spec(t));
  ASSERT_EQ(d.q(), 2u);
  EXPECT_EQ(d.groups()[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(d.groups()[1], (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(d.questions(), (std::vector<std::string>{"gender", "age"}));
}

TEST(Binarize, OutOfDomainWithoutOther) {
  const RawTable t = parse("c,y\na,1\nb,0\nc,1\nd,0\n", "y", "1");
  BinarizationSpec s = infer_spec(t);
  s.rules[0].keep_other = false;
  EXPECT_EQ(kind_of([&] { binarize(t, s); }), ErrorKind::kInput);
}

TEST(Binarize, OverrideForms) {
  const RawTable t = parse("c,v,y\na,1,1\nb,2,0\nc,3,1\na,4,0\n", "y", "1");
  BinarizationSpec s = infer_spec(t);
  apply_override(s, t, "c", "categorical:1");
  apply_override(s, t, "v", "drop");
  BinaryDataset d = binarize(t, s);
  EXPECT_EQ(d.p(), 2u);  // a, Other
  apply_override(s, t, "c", "binary:b");
  d = binarize(t, s);
  EXPECT_EQ(d.matrix(), (std::vector<std::uint8_t>{0, 1, 0, 0}));
  EXPECT_EQ(kind_of([&] { apply_override(s, t, "nope", "drop"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([&] { apply_override(s, t, "v", "thresholds:5,2"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([&] { apply_override(s, t, "c", "thresholds:1,2"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([&] { apply_override(s, t, "c", "categorical:4"); }), ErrorKind::kConfig);
}

TEST(BinarizeProperty, TercileGroupsSumToOne) {
  for (int t = 0; t < 20; ++t) {
    const BinaryDataset d = synthetic::from_csv_text(synthetic::surgery_like_csv(80, t), "Risk1Yr", "T");
    for (std::size_t s = 0; s < d.q(); ++s) {
      if (d.groups()[s].size() != 3) continue;
      if (d.features()[d.groups()[s][0]].response.rfind("<= ", 0) != 0) continue;
      for (std::size_t i = 0; i < d.n(); ++i) {
        int sum = 0;
        for (int j : d.groups()[s]) sum += d.at(i, j);
        ASSERT_EQ(sum, 1);
      }
    }
  }
}

TEST(BinaryDatasetTest, RejectsBrokenInvariants) {
  EXPECT_THROW(BinaryDataset({2}, 1, {1}, {{0}}, {}), Error);
  EXPECT_THROW(BinaryDataset({1}, 1, {0}, {{0}}, {}), Error);
  EXPECT_THROW(BinaryDataset({1, 0}, 2, {1}, {{0}}, {}), Error);
  EXPECT_THROW(BinaryDataset({1, 0}, 2, {1}, {{0, 1}, {1}}, {}), Error);
}

TEST(BinaryDatasetTest, JsonRoundTrip) {
  const BinaryDataset d = synthetic::from_csv_text(synthetic::mushroom_like_csv(60, 3), "class", "p");
  const nlohmann::json doc = dataset_to_json(d);
  EXPECT_EQ(doc["format"], "scoring.binary_dataset.v1");
  EXPECT_EQ(dataset_from_json(doc), d);
  nlohmann::json bad = doc;
  bad["X"][0] = "2";
  EXPECT_THROW(dataset_from_json(bad), Error);
}

TEST(Split, SizesAndDeterminism) {
  const BinaryDataset d = synthetic::random_binary(10, 2, 1);
  const SplitPair a = split(d, 0.8, 5);
  EXPECT_EQ(a.train.n(), 8u);
  EXPECT_EQ(a.test.n(), 2u);
  const SplitPair b = split(d, 0.8, 5);
  EXPECT_EQ(a.train_rows, b.train_rows);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(kind_of([&] { split(d, 1.0, 1); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([&] { split(d, 0.01, 1); }), ErrorKind::kConfig);
}

TEST(Split, DistinctSeedsGiveDistinctPartitions) {
  const BinaryDataset d = synthetic::random_binary(50, 3, 1);
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t s = 0; s < 5; ++s) seen.insert(split(d, 0.8, s).train_rows);
  EXPECT_EQ(seen.size(), 5u);
}

TEST(SplitProperty, PartitionIsExhaustive) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const BinaryDataset d = synthetic::random_binary(5 + rng.below(60), 3, t);
    const double f = 0.2 + 0.6 * rng.uniform();
    for (const SplitPair& sp : {split(d, f, t), stratified_split(d, f, t)}) {
      std::vector<std::size_t> all = sp.train_rows;
      all.insert(all.end(), sp.test_rows.begin(), sp.test_rows.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
      ASSERT_EQ(all.size(), d.n());
      ASSERT_EQ(sp.train.n(), static_cast<std::size_t>(std::llround(f * d.n())));
      for (std::size_t k = 0; k < sp.train_rows.size(); ++k) {
        ASSERT_EQ(sp.train.label(k), d.label(sp.train_rows[k]));
      }
    }
  }
}

TEST(Subsample, FullSampleKeepsOrder) {
  const BinaryDataset d = synthetic::random_binary(20, 3, 8);
  EXPECT_EQ(subsample(d, d.n(), 1), d);
}

TEST(Subsample, OnlyFeasibleOutcomeWithOnePositive) {
  std::vector<std::uint8_t> x = {1, 0, 0, 0, 0};
  const BinaryDataset d(x, 1, {1, -1, -1, -1, -1}, {{0}}, {});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const BinaryDataset sub = subsample(d, 2, s);
    EXPECT_EQ(sub.n_pos(), 1u);
    EXPECT_EQ(sub.n_neg(), 1u);
  }
}

TEST(Subsample, DeterministicAndValidated) {
  const BinaryDataset d = synthetic::random_binary(100, 3, 8);
  const BinaryDataset a = subsample(d, 30, 9);
  EXPECT_EQ(a, subsample(d, 30, 9));
  EXPECT_EQ(a.n(), 30u);
  EXPECT_GT(a.n_pos(), 0u);
  EXPECT_GT(a.n_neg(), 0u);
  SubsampleOptions strat;
  strat.stratified = true;
  EXPECT_EQ(subsample(d, 30, 9, strat).n(), 30u);
  EXPECT_EQ(kind_of([&] { subsample(d, 101, 1); }), ErrorKind::kConfig);
  const BinaryDataset one({1, 0}, 1, {1, 1}, {{0}}, {});
  EXPECT_EQ(kind_of([&] { subsample(one, 2, 1); }), ErrorKind::kInput);
}

TEST(PairDifferences, SinglePair) {
  const BinaryDataset d({1, 0, 0, 0}, 2, {1, -1}, {{0}, {1}}, {});
  const PairDiffSet p = pair_differences(d);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.diff(0)[0], -1);
  EXPECT_EQ(p.diff(0)[1], 0);
  EXPECT_EQ(p.weights[0], 1.0);
}

TEST(PairDifferences, DuplicatesMerge) {
  const BinaryDataset d({1, 1, 0, 0, 0}, 1, {1, 1, -1, -1, -1}, {{0}}, {});
  const PairDiffSet p = pair_differences(d);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.weights[0], 6.0);
}

TEST(PairDifferencesProperty, WeightTotalAndEntries) {
  for (int t = 0; t < 100; ++t) {
    const BinaryDataset d = synthetic::random_binary(10 + t, 4, 500 + t);
    const PairDiffSet p = pair_differences(d);
    EXPECT_DOUBLE_EQ(p.total_weight(), static_cast<double>(d.n_pos() * d.n_neg()));
    for (auto v : p.diffs) ASSERT_TRUE(v >= -1 && v <= 1);
  }
  const BinaryDataset big = synthetic::random_binary(300, 3, 1);
  std::vector<int> y(300, -1);
  std::fill(y.begin(), y.begin() + 34, 1);
  const BinaryDataset relabeled(big.matrix(), big.p(), y, big.groups(), big.features());
  EXPECT_DOUBLE_EQ(pair_differences(relabeled).total_weight(), 9044.0);
  EXPECT_EQ(kind_of([&] { pair_differences(BinaryDataset({1}, 1, {1}, {{0}}, {})); }),
            ErrorKind::kInput);
}

}  // namespace
}  // namespace scoring
