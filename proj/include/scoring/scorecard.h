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

#ifndef SCORING_SCORECARD_H_
#define SCORING_SCORECARD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "scoring/dataset.h"

namespace scoring {

// Intercepts are clamped to this magnitude (probabilities stay within
// about [2e-9, 1 - 2e-9]).
inline constexpr double kInterceptClamp = 20.0;

struct InterceptFit {
  double w0 = 0.0;
  // Some threshold on the score separates the classes completely.
  bool separated = false;
  // The likelihood maximum lay beyond kInterceptClamp.
  bool clamped = false;
  double gradient = 0.0;  // d/dw0 log-likelihood at w0
  int iterations = 0;
};

// 1-D maximum likelihood for w0 with w fixed: safeguarded Newton on
// n+ - sum sigmoid(s_i + w0), bisection whenever Newton leaves the bracket.
InterceptFit calibrate_intercept(std::span<const int> w, const BinaryDataset& data);

int score(std::span<const int> w, std::span<const std::uint8_t> x);

struct ScorecardEntry {
  int feature = 0;
  std::string question;
  std::string response;
  int points = 0;

  bool operator==(const ScorecardEntry&) const = default;
};

struct ScoreRow {
  int score = 0;
  double probability = 0.0;

  bool operator==(const ScoreRow&) const = default;
};

struct Scorecard {
  std::vector<int> w;
  std::vector<ScorecardEntry> entries;  // nonzero points, grouped by question
  double w0 = 0.0;
  bool separated = false;
  bool clamped = false;
  int s_min = 0;
  int s_max = 0;
  std::vector<ScoreRow> table;
  std::string method;
  int M = 0;
  int theta = 0;
  std::uint64_t seed = 0;

  bool operator==(const Scorecard&) const = default;
};

// Rows for every integer score in [sum min(0, w_j), sum max(0, w_j)] with
// probability sigmoid(s + w0). Entries are labelled from `labels` when given
// and ordered by question group.
Scorecard build_table(std::span<const int> w, double w0,
                      const BinaryDataset* labels = nullptr);

// Percent with one decimal, half away from zero: 0.0567 -> "5.7%".
std::string format_percent(double probability);

enum class RenderFormat { kMarkdown, kJson };

std::string render(const Scorecard& card, RenderFormat format);
nlohmann::json scorecard_to_json(const Scorecard& card);
Scorecard scorecard_from_json(const nlohmann::json& doc);

}  // namespace scoring

#endif  // SCORING_SCORECARD_H_
