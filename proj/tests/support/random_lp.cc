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

#include "random_lp.h"

#include <cmath>
#include <vector>

namespace scoring::lp {

RandomCase random_case(Rng& rng, int n, int m, bool degenerate) {
  RandomCase rc;
  rc.dense.n = n;
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    const double lo = -std::floor(rng.uniform() * 4);
    const double hi = lo + 1 + std::floor(rng.uniform() * 5);
    const double c = std::round((rng.uniform() * 2 - 1) * 10) / 2;
    rc.model.add_variable(lo, hi, c);
    rc.dense.lo.push_back(lo);
    rc.dense.hi.push_back(hi);
    rc.dense.c.push_back(c);
    x0[j] = lo + (hi - lo) * rng.uniform();
  }
  for (int i = 0; i < m; ++i) {
    std::vector<int> cols;
    std::vector<double> vals, dense_row(n, 0.0);
    double act = 0;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < 0.3) continue;
      const double a = std::round((rng.uniform() * 2 - 1) * 6);
      if (a == 0) continue;
      cols.push_back(j);
      vals.push_back(a);
      dense_row[j] = a;
      act += a * x0[j];
    }
    const double u = rng.uniform();
    int sense;
    RowSense rs;
    double rhs;
    if (u < 0.45) {
      sense = -1;
      rs = RowSense::kLessEqual;
      rhs = degenerate ? std::ceil(act) : std::ceil(act + rng.uniform() * 3);
    } else if (u < 0.9) {
      sense = 1;
      rs = RowSense::kGreaterEqual;
      rhs = degenerate ? std::floor(act) : std::floor(act - rng.uniform() * 3);
    } else {
      sense = 0;
      rs = RowSense::kEqual;
      rhs = act;
    }
    rc.model.add_row(cols, vals, rs, rhs);
    rc.dense.a.push_back(dense_row);
    rc.dense.sense.push_back(sense);
    rc.dense.b.push_back(rhs);
  }
  return rc;
}

}  // namespace scoring::lp
