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

#ifndef SCORING_LP_TOLERANCES_H_
#define SCORING_LP_TOLERANCES_H_

#include <cstdint>

namespace scoring::lp {

// Primal feasibility tolerance on bounds and rows.
inline constexpr double kFeasibilityTol = 1e-7;
// Dual (reduced cost) tolerance for optimality.
inline constexpr double kOptimalityTol = 1e-9;
// Smallest acceptable pivot magnitude.
inline constexpr double kPivotTol = 1e-9;
// Step length below which a pivot counts as degenerate.
inline constexpr double kDegenerateStep = 1e-12;
// Consecutive degenerate pivots before switching to Bland's rule.
inline constexpr int kDegenerateStallLimit = 50;
// Pivots between recomputing primal values and reduced costs from scratch.
inline constexpr int kRecomputeInterval = 64;
// Relative diagonal size below which a basis kernel is treated as singular.
inline constexpr double kSingularRatio = 1e-11;
// Row bounds are widened by up to this relative amount while the primal
// simplex runs, then restored and cleaned up with the dual simplex.
inline constexpr double kPerturbScale = 1e-6;
// Largest bound violation the primal simplex absorbs by shifting the bound.
inline constexpr double kMaxBoundShift = 1e-5;
inline constexpr std::int64_t kDefaultIterationLimit = 5'000'000;

}  // namespace scoring::lp

#endif  // SCORING_LP_TOLERANCES_H_
