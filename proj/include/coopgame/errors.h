// Copyright 2026 The coopgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COOPGAME_ERRORS_H_
#define COOPGAME_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace coopgame {

// Broad failure classes. The CLI maps these onto exit codes.
enum class ErrorCategory {
  kFeasibility,   // CPU frequency or capacity limit exceeded
  kGeometry,      // degenerate device placement
  kConstraint,    // a strategy profile violates a game constraint
  kSingularity,   // coefficients undefined for the given parameters
  kValidation,    // scenario parameters out of range
  kParse,         // malformed scenario text
  kUnsupported,   // operation defined only for a narrower case
  kSolver,        // equilibrium computation aborted
  kIo,
  kInternal,
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace coopgame

#endif  // COOPGAME_ERRORS_H_
