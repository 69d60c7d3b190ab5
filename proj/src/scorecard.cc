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

#include "scoring/scorecard.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "scoring/error.h"
#include "scoring/metrics.h"

namespace scoring {

namespace {

std::vector<double> scores_of(std::span<const int> w, const BinaryDataset& data) {
  if (w.size() != data.p()) fail(ErrorKind::kInput, "coefficient length does not match p");
  std::vector<double> s(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) s[i] = score(w, data.row(i));
  return s;
}

// d/dw0 of the log-likelihood: n+ - sum sigmoid(s_i + w0).
long double gradient(const std::vector<double>& s, double n_pos, double w0) {
  long double g = n_pos;
  for (double v : s) g -= sigmoid(v + w0);
  return g;
}

long double curvature(const std::vector<double>& s, double w0) {
  long double h = 0;
  for (double v : s) {
    const double p = sigmoid(v + w0);
    h += p * (1 - p);
  }
  return h;
}

}  // namespace

int score(std::span<const int> w, std::span<const std::uint8_t> x) {
  if (w.size() != x.size()) fail(ErrorKind::kInput, "score: dimension mismatch");
  int s = 0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s;
}

InterceptFit calibrate_intercept(std::span<const int> w, const BinaryDataset& data) {
  if (data.n_pos() == 0 || data.n_neg() == 0) {
    fail(ErrorKind::kInput, "intercept calibration needs both classes");
  }
  const std::vector<double> s = scores_of(w, data);
  const double n_pos = static_cast<double>(data.n_pos());

  InterceptFit out;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double max_pos = -kInf, min_pos = kInf, max_neg = -kInf, min_neg = kInf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (data.label(i) > 0) {
      max_pos = std::max(max_pos, s[i]);
      min_pos = std::min(min_pos, s[i]);
    } else {
      max_neg = std::max(max_neg, s[i]);
      min_neg = std::min(min_neg, s[i]);
    }
  }
  out.separated = min_pos > max_neg || max_pos < min_neg;

  // The gradient falls from n+ to -n- as w0 grows, so a root always exists;
  // it lies within the score range shifted by the base-rate logit.
  const double s_lo = *std::min_element(s.begin(), s.end());
  const double s_hi = *std::max_element(s.begin(), s.end());
  const double base = std::log(n_pos / static_cast<double>(data.n_neg()));
  double lo = -s_hi + std::min(0.0, base) - 1.0;
  double hi = -s_lo + std::max(0.0, base) + 1.0;
  while (gradient(s, n_pos, lo) < 0) lo = 2 * lo - 1;
  while (gradient(s, n_pos, hi) > 0) hi = 2 * hi + 1;

  double x = std::clamp(base - 0.5 * (s_lo + s_hi), lo, hi);
  long double g = gradient(s, n_pos, x);
  int it = 0;
  for (; it < 200 && std::abs(g) > 1e-10; ++it) {
    if (g > 0) lo = x;
    else hi = x;
    const long double h = curvature(s, x);
    double next = h > 0 ? static_cast<double>(x + g / h) : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      x = next;
      g = gradient(s, n_pos, x);
      break;
    }
    x = next;
    g = gradient(s, n_pos, x);
  }
  out.iterations = it;
  if (std::abs(x) > kInterceptClamp) {
    x = std::copysign(kInterceptClamp, x);
    out.clamped = true;
    g = gradient(s, n_pos, x);
  }
  out.w0 = x;
  out.gradient = static_cast<double>(g);
  return out;
}

Scorecard build_table(std::span<const int> w, double w0, const BinaryDataset* labels) {
  if (labels && labels->p() != w.size()) {
    fail(ErrorKind::kInput, "scorecard labels do not match the coefficient length");
  }
  Scorecard card;
  card.w.assign(w.begin(), w.end());
  card.w0 = w0;
  for (int v : w) {
    card.s_min += std::min(0, v);
    card.s_max += std::max(0, v);
  }
  for (int s = card.s_min; s <= card.s_max; ++s) card.table.push_back({s, sigmoid(s + w0)});

  auto add = [&](int j) {
    if (w[j] == 0) return;
    ScorecardEntry e;
    e.feature = j;
    e.points = w[j];
    if (labels) {
      e.question = labels->features()[j].question;
      e.response = labels->features()[j].response;
    } else {
      e.question = "x" + std::to_string(j);
      e.response = "yes";
    }
    card.entries.push_back(std::move(e));
  };
  if (labels) {
    for (const auto& group : labels->groups()) {
      for (int j : group) add(j);
    }
  } else {
    for (std::size_t j = 0; j < w.size(); ++j) add(static_cast<int>(j));
  }
  return card;
}

std::string format_percent(double probability) {
  // Round the decimal value, not the binary one: 5.65 must read as 5.7.
  const double tenths = probability * 1000.0;
  double r = std::round(tenths);
  if (std::abs(tenths - r) > 0.5 - 1e-9 && std::abs(tenths - r) < 0.5 + 1e-9) {
    r = tenths > 0 ? std::ceil(tenths) : std::floor(tenths);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", r / 10.0);
  return buf;
}

namespace {

std::string escape_cell(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

std::string markdown(const Scorecard& card) {
  std::ostringstream os;
  os << "## Scorecard";
  if (!card.method.empty()) {
    os << " (" << card.method << ", M=" << card.M << ", theta=" << card.theta << ")";
  }
  os << "\n\n| Question | Response | Points |\n|---|---|---:|\n";
  std::string last;
  for (const auto& e : card.entries) {
    const bool repeat = !last.empty() && e.question == last;
    os << "| " << (repeat ? "" : escape_cell(e.question)) << " | " << escape_cell(e.response)
       << " | " << (e.points > 0 ? "+" : "") << e.points << " |\n";
    last = e.question;
  }
  char w0[64];
  std::snprintf(w0, sizeof w0, "%.4f", card.w0);
  os << "\nIntercept w0 = " << w0;
  if (card.clamped) os << " (clamped)";
  if (card.separated) os << " (classes separated by score)";
  os << "\n\n| Score |";
  for (const auto& r : card.table) os << ' ' << r.score << " |";
  os << "\n|---|";
  for (std::size_t k = 0; k < card.table.size(); ++k) os << "---:|";
  os << "\n| Risk |";
  for (const auto& r : card.table) os << ' ' << format_percent(r.probability) << " |";
  os << '\n';
  return os.str();
}

}  // namespace

nlohmann::json scorecard_to_json(const Scorecard& card) {
  nlohmann::json doc;
  doc["format"] = "scoring.scorecard.v1";
  doc["method"] = card.method;
  doc["M"] = card.M;
  doc["theta"] = card.theta;
  doc["seed"] = card.seed;
  doc["w"] = card.w;
  doc["w0"] = card.w0;
  doc["separated"] = card.separated;
  doc["clamped"] = card.clamped;
  doc["score_range"] = {card.s_min, card.s_max};
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : card.entries) {
    entries.push_back({{"feature", e.feature},
                       {"question", e.question},
                       {"response", e.response},
                       {"points", e.points}});
  }
  doc["entries"] = entries;
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : card.table) table.push_back({{"score", r.score}, {"probability", r.probability}});
  doc["table"] = table;
  return doc;
}

Scorecard scorecard_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", std::string()) != "scoring.scorecard.v1") {
      fail(ErrorKind::kInput, "not a scorecard document (format scoring.scorecard.v1)");
    }
    Scorecard card;
    card.method = doc.at("method").get<std::string>();
    card.M = doc.at("M").get<int>();
    card.theta = doc.at("theta").get<int>();
    card.seed = doc.at("seed").get<std::uint64_t>();
    card.w = doc.at("w").get<std::vector<int>>();
    card.w0 = doc.at("w0").get<double>();
    card.separated = doc.at("separated").get<bool>();
    card.clamped = doc.at("clamped").get<bool>();
    card.s_min = doc.at("score_range").at(0).get<int>();
    card.s_max = doc.at("score_range").at(1).get<int>();
    for (const auto& e : doc.at("entries")) {
      card.entries.push_back({e.at("feature").get<int>(), e.at("question").get<std::string>(),
                              e.at("response").get<std::string>(), e.at("points").get<int>()});
    }
    for (const auto& r : doc.at("table")) {
      card.table.push_back({r.at("score").get<int>(), r.at("probability").get<double>()});
    }
    return card;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("malformed scorecard JSON: ") + e.what());
  }
}

std::string render(const Scorecard& card, RenderFormat format) {
  if (format == RenderFormat::kJson) return scorecard_to_json(card).dump(2) + "\n";
  return markdown(card);
}

}  // namespace scoring
