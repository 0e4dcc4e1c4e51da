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

#ifndef HALLUSPAN_TAXONOMY_HPP_
#define HALLUSPAN_TAXONOMY_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace halluspan {

// The eleven hallucination labels. Declaration order is the label priority
// annotators use when several types apply, and the column order of reports.
enum class HallucinationClass : std::uint8_t {
  kUnsupportedCondition,
  kUnsupportedProcedure,
  kUnsupportedMedication,
  kUnsupportedTime,
  kUnsupportedLocation,
  kUnsupportedNumber,
  kUnsupportedName,
  kUnsupportedWord,
  kUnsupportedOther,
  kContradictedFact,
  kIncorrectFact,
};

inline constexpr std::size_t kNumClasses = 11;

inline constexpr std::array<HallucinationClass, kNumClasses> kAllClasses = {
    HallucinationClass::kUnsupportedCondition, HallucinationClass::kUnsupportedProcedure,
    HallucinationClass::kUnsupportedMedication, HallucinationClass::kUnsupportedTime,
    HallucinationClass::kUnsupportedLocation,  HallucinationClass::kUnsupportedNumber,
    HallucinationClass::kUnsupportedName,      HallucinationClass::kUnsupportedWord,
    HallucinationClass::kUnsupportedOther,     HallucinationClass::kContradictedFact,
    HallucinationClass::kIncorrectFact,
};

enum class ClassFamily { kUnsupported, kContradicted, kIncorrect };

constexpr std::size_t class_index(HallucinationClass c) {
  return static_cast<std::size_t>(c);
}

ClassFamily family_of(HallucinationClass c);

// "unsupported_condition", ...
std::string_view canonical_name(HallucinationClass c);

// Abbreviated column headers used by the count and recall tables.
std::string_view count_column_label(HallucinationClass c);
std::string_view recall_column_label(HallucinationClass c);

// Exact match after lowercasing, trimming and mapping runs of spaces to '_'.
// Throws Error(kUnknownLabel) otherwise.
HallucinationClass parse_label(std::string_view name);
std::optional<HallucinationClass> try_parse_label(std::string_view name);

}  // namespace halluspan

#endif  // HALLUSPAN_TAXONOMY_HPP_
