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

#ifndef SCORING_METHOD_H_
#define SCORING_METHOD_H_

#include <array>
#include <string>

namespace scoring {

enum class Method {
  kBaucInteger,
  kBaucRounding,
  kL1,
  kElasticNet,
  kForward,
  kBackward,
};

inline constexpr std::array<Method, 6> kAllMethods = {
    Method::kBaucInteger, Method::kBaucRounding, Method::kL1,
    Method::kElasticNet,  Method::kForward,      Method::kBackward};

// "bauc-integer", "bauc-rounding", "l1", "elastic-net", "forward", "backward".
const char* method_name(Method method);
// Display name used in report tables, e.g. "bAUC-Integer".
const char* method_title(Method method);
Method parse_method(const std::string& text);

}  // namespace scoring

#endif  // SCORING_METHOD_H_
