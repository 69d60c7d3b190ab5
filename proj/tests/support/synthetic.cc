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

#include "synthetic.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "scoring/random.h"

namespace scoring::synthetic {

namespace {

std::size_t draw(Rng& rng, const std::vector<double>& probs) {
  double u = rng.uniform();
  for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
    if (u < probs[k]) return k;
    u -= probs[k];
  }
  return probs.size() - 1;
}

std::vector<double> normalized(std::vector<double> v) {
  double s = 0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
  return v;
}

}  // namespace

std::string mushroom_like_csv(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  // Level counts of the 22 UCI mushroom attributes.
  const int levels[22] = {6, 4, 10, 2, 9, 2, 2, 2, 12, 2, 5, 4, 4, 9, 9, 1, 4, 3, 5, 9, 6, 7};
  std::vector<std::vector<double>> pos(22), neg(22);
  for (int c = 0; c < 22; ++c) {
    for (int k = 0; k < levels[c]; ++k) {
      pos[c].push_back(0.2 + rng.uniform());
      neg[c].push_back(0.2 + rng.uniform());
    }
    pos[c] = normalized(pos[c]);
    neg[c] = normalized(neg[c]);
  }
  // Column 4 plays the role of odor: positives almost never share a level
  // with negatives.
  pos[4] = normalized({0.0, 0.0, 0.02, 0.55, 0.2, 0.1, 0.1, 0.03, 0.0});
  neg[4] = normalized({0.45, 0.45, 0.08, 0.0, 0.0, 0.0, 0.0, 0.02, 0.0});
  pos[19] = normalized({0.05, 0.5, 0.05, 0.1, 0.1, 0.05, 0.05, 0.05, 0.05});
  neg[19] = normalized({0.3, 0.05, 0.3, 0.05, 0.1, 0.05, 0.05, 0.05, 0.05});

  std::ostringstream os;
  os << "class";
  for (int c = 0; c < 22; ++c) os << ",q" << c;
  os << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = rng.uniform() < 0.48;
    os << (positive ? 'p' : 'e');
    for (int c = 0; c < 22; ++c) {
      const std::size_t k = draw(rng, positive ? pos[c] : neg[c]);
      if (c == 10 && rng.uniform() < 0.3) {
        os << ",?";  // a column with missing cells, like stalk-root
      } else {
        os << ",L" << static_cast<char>('a' + k);
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string surgery_like_csv(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::ostringstream os;
  os << "DGN,PRE4,PRE5,PRE6,PRE7,PRE8,PRE9,PRE10,PRE11,PRE14,PRE17,PRE19,PRE25,PRE30,PRE32,AGE,"
        "Risk1Yr\n";
  const std::vector<double> dgn = normalized({2, 350, 22, 47, 15, 4, 1});
  const std::vector<double> pre6 = normalized({313, 121, 36});
  const std::vector<double> pre14 = normalized({20, 257, 185, 8});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = draw(rng, dgn);
    const double fvc = 1.4 + 4.0 * rng.uniform();
    const double fev1 = fvc * (0.55 + 0.4 * rng.uniform());
    const std::size_t p6 = draw(rng, pre6);
    bool t[5];
    const double rates[5] = {0.07, 0.14, 0.07, 0.69, 0.17};
    for (int k = 0; k < 5; ++k) t[k] = rng.uniform() < rates[k];
    const std::size_t p14 = draw(rng, pre14);
    const bool p17 = rng.uniform() < 0.07;
    const bool p19 = rng.uniform() < 0.01;
    const int age = 40 + static_cast<int>(rng.below(40));
    double logit = -2.3 + 0.7 * (p14 >= 2) + 0.6 * p17 + 0.5 * t[4] + 0.4 * t[2] +
                   0.5 * (d == 3 || d == 4) + 0.3 * (p6 == 1) - 0.2 * (fev1 > 3.0) +
                   0.2 * (age > 65);
    logit += 0.9 * (rng.uniform() - 0.5);
    const bool positive = rng.uniform() < 1.0 / (1.0 + std::exp(-logit));
    os << "DGN" << (d + 1) << ',' << fvc << ',' << fev1 << ",PRZ" << p6;
    for (int k = 0; k < 5; ++k) os << ',' << (t[k] ? 'T' : 'F');
    os << ",OC1" << (p14 + 1) << ',' << (p17 ? 'T' : 'F') << ',' << (p19 ? 'T' : 'F');
    os << ',' << (rng.uniform() < 0.02 ? 'T' : 'F') << ',' << (rng.uniform() < 0.83 ? 'T' : 'F')
       << ',' << (rng.uniform() < 0.004 ? 'T' : 'F') << ',' << age << ','
       << (positive ? 'T' : 'F') << '\n';
  }
  return os.str();
}

BinaryDataset random_binary(std::size_t n, std::size_t q, std::uint64_t seed, double signal) {
  Rng rng(seed);
  std::vector<std::vector<int>> groups;
  std::vector<FeatureLabel> features;
  std::size_t p = 0;
  for (std::size_t s = 0; s < q; ++s) {
    const std::size_t size = 1 + rng.below(3);
    std::vector<int> g;
    for (std::size_t k = 0; k < size; ++k) {
      g.push_back(static_cast<int>(p++));
      features.push_back({"Q" + std::to_string(s), "R" + std::to_string(k)});
    }
    groups.push_back(g);
  }
  std::vector<double> beta(p);
  double center = 0;
  for (double& b : beta) {
    b = signal * (2 * rng.uniform() - 1) * 2;
    center += 0.5 * b;
  }
  std::vector<std::uint8_t> x(n * p);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0;
    for (std::size_t j = 0; j < p; ++j) {
      x[i * p + j] = rng.uniform() < 0.5 ? 1 : 0;
      eta += beta[j] * x[i * p + j];
    }
    y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-(eta - center))) ? 1 : -1;
  }
  // Both classes are needed by most callers.
  y[0] = 1;
  if (n > 1) y[1] = -1;
  return BinaryDataset(std::move(x), p, std::move(y), std::move(groups), std::move(features));
}

BinaryDataset separable_one_feature(std::size_t n_pos, std::size_t n_neg) {
  std::vector<std::uint8_t> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < n_pos; ++i) {
    x.push_back(1);
    y.push_back(1);
  }
  for (std::size_t i = 0; i < n_neg; ++i) {
    x.push_back(0);
    y.push_back(-1);
  }
  return BinaryDataset(std::move(x), 1, std::move(y), {{0}}, {{"Q", "yes"}});
}

BinaryDataset from_csv_text(const std::string& csv, const std::string& label,
                            const std::string& positive) {
  std::istringstream in(csv);
  CsvOptions o;
  o.label_column = label;
  o.positive_label = positive;
  const RawTable t = parse_csv(in, o);
  return binarize(t, infer_spec(t));
}

}  // namespace scoring::synthetic
