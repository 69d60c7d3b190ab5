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

#include "scoring/method.h"

#include "scoring/error.h"

namespace scoring {

const char* method_name(Method method) {
  switch (method) {
    case Method::kBaucInteger:
      return "bauc-integer";
    case Method::kBaucRounding:
      return "bauc-rounding";
    case Method::kL1:
      return "l1";
    case Method::kElasticNet:
      return "elastic-net";
    case Method::kForward:
      return "forward";
    case Method::kBackward:
      return "backward";
  }
  return "unknown";
}

const char* method_title(Method method) {
  switch (method) {
    case Method::kBaucInteger:
      return "bAUC-Integer";
    case Method::kBaucRounding:
      return "bAUC-Rounding";
    case Method::kL1:
      return "L1-Regularization";
    case Method::kElasticNet:
      return "Elastic-Net";
    case Method::kForward:
      return "Forward-Selection";
    case Method::kBackward:
      return "Backward-Elimination";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  for (Method m : kAllMethods) {
    if (text == method_name(m)) return m;
  }
  fail(ErrorKind::kConfig, "unknown method '" + text +
                               "' (expected bauc-integer, bauc-rounding, l1, elastic-net, "
                               "forward or backward)");
}

}  // namespace scoring
