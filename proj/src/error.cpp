/**
 * Copyright 2026, The diffscope Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#include "diffscope/error.hpp"

namespace diffscope {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NonPositiveDiffusion: return "NonPositiveDiffusion";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::MaxSubdivisionsExceeded: return "MaxSubdivisionsExceeded";
    case ErrorCode::DegenerateTruncation: return "DegenerateTruncation";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ExpressionParseError: return "ExpressionParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace diffscope
