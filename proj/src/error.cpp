// Copyright 2026 The ltamp Authors
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

#include "ltamp/error.hpp"

namespace ltamp {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kDivision: return "division";
    case ErrorCode::kSingularReference: return "singular-reference";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kInfeasibleStep: return "infeasible-step";
    case ErrorCode::kDegeneratePlan: return "degenerate-plan";
    case ErrorCode::kIndex: return "index";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kAssumptionViolation: return "assumption-violation";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kProtocol: return "protocol";
  }
  return "unknown";
}

}  // namespace ltamp
