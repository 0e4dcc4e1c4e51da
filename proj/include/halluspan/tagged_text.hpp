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

#ifndef HALLUSPAN_TAGGED_TEXT_HPP_
#define HALLUSPAN_TAGGED_TEXT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halluspan/annotation.hpp"

// Inline error-tag markup as produced by LLM annotators:
//
//   <error>text</error>
//   <error class="unsupported_number">text</error>
//
// Only the `error` tag is markup; anything else is literal text. Tags do not
// nest and the attribute form is matched byte for byte.
namespace halluspan {

enum class LabelMode { kClassAware, kClassAgnostic };

std::string_view mode_name(LabelMode mode);
std::optional<LabelMode> parse_mode(std::string_view name);

struct TaggedSegment {
  std::string text;
  bool tagged = false;
  std::optional<HallucinationClass> cls;
};

struct ParsedTagged {
  std::string plain;
  std::vector<SpanAnnotation> spans;  // offsets into `plain`
  std::vector<TaggedSegment> segments;
  std::vector<std::string> warnings;
  std::size_t markup_length = 0;  // characters removed as markup
};

// Throws Error(kMalformedTag) on unclosed, nested, stray closing or
// malformed-attribute tags; the raw input is kept in Error::detail().
//
// Class-aware parsing maps a missing or unknown class to unsupported_other
// with a warning. Tags that enclose only whitespace are dropped with a
// warning.
ParsedTagged parse_tagged(std::string_view text, LabelMode mode);

// Inverse of parse_tagged for spans that are valid against `plain`.
std::string render_tagged(std::string_view plain, std::span<const SpanAnnotation> spans);

}  // namespace halluspan

#endif  // HALLUSPAN_TAGGED_TEXT_HPP_
