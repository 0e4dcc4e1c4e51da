// Copyright 2026 The Halluspan Authors.
//
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

#include "halluspan/error.hpp"

namespace halluspan {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kMalformedTag: return "MalformedTag";
    case ErrorCode::kLowConfidence: return "LowConfidence";
    case ErrorCode::kDocMismatch: return "DocMismatch";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kCoverageMismatch: return "CoverageMismatch";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kSectionMissing: return "SectionMissing";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kTemplateMissing: return "TemplateMissing";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kFixtureMiss: return "FixtureMiss";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTemplateMissing:
    case ErrorCode::kTransport:
    case ErrorCode::kRateLimited:
    case ErrorCode::kFixtureMiss:
    case ErrorCode::kIoError:
      return 2;
    default:
      return 1;
  }
}

}  // namespace halluspan
