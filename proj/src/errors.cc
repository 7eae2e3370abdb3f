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

#include "coopgame/errors.h"

namespace coopgame {

std::string_view CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kFeasibility: return "feasibility";
    case ErrorCategory::kGeometry: return "geometry";
    case ErrorCategory::kConstraint: return "constraint";
    case ErrorCategory::kSingularity: return "singularity";
    case ErrorCategory::kValidation: return "validation";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kUnsupported: return "unsupported";
    case ErrorCategory::kSolver: return "solver";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace coopgame
