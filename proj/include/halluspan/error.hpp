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

#ifndef HALLUSPAN_ERROR_HPP_
#define HALLUSPAN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace halluspan {

// Machine-readable failure categories. The CLI maps each one to an exit code
// and prints the name on standard error.
enum class ErrorCode {
  kUnknownLabel,
  kSchemaError,
  kMalformedTag,
  kLowConfidence,
  kDocMismatch,
  kInsufficientData,
  kCoverageMismatch,
  kEmptyGrid,
  kSectionMissing,
  kConfigError,
  kTemplateMissing,
  kTransport,
  kRateLimited,
  kFixtureMiss,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// 1 for validation-type failures, 2 for IO and transport failures.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }

  // Extra payload for audit, e.g. the raw text that failed to parse.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace halluspan

#endif  // HALLUSPAN_ERROR_HPP_
