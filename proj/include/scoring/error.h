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

#ifndef SCORING_ERROR_H_
#define SCORING_ERROR_H_

#include <stdexcept>
#include <string>

namespace scoring {

enum class ErrorKind {
  kInput,      // malformed or unusable data
  kConfig,     // invalid parameters or configuration
  kSolver,     // solver could not produce a usable answer
  kInternal,   // broken invariant
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace scoring

#endif  // SCORING_ERROR_H_
