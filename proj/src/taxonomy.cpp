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

#include "halluspan/taxonomy.hpp"

#include <string>

#include "halluspan/error.hpp"

namespace halluspan {
namespace {

struct ClassInfo {
  std::string_view name;
  std::string_view count_label;
  std::string_view recall_label;
};

constexpr std::array<ClassInfo, kNumClasses> kInfo = {{
    {"unsupported_condition", "cond.", "cond."},
    {"unsupported_procedure", "proc.", "proc."},
    {"unsupported_medication", "medic.", "medic."},
    {"unsupported_time", "time", "time"},
    {"unsupported_location", "loc.", "location"},
    {"unsupported_number", "numb.", "number"},
    {"unsupported_name", "name", "name"},
    {"unsupported_word", "word", "words"},
    {"unsupported_other", "other", "other"},
    {"contradicted_fact", "contrad.", "contrad."},
    {"incorrect_fact", "incorr.", "incorr."},
}};

std::string normalize(std::string_view name) {
  std::string out;
  bool pending_sep = false;
  for (char ch : name) {
    if (ch == ' ' || ch == '\t' || ch == '_') {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out.push_back('_');
    pending_sep = false;
    out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch + 32) : ch);
  }
  return out;
}

}  // namespace

ClassFamily family_of(HallucinationClass c) {
  switch (c) {
    case HallucinationClass::kContradictedFact: return ClassFamily::kContradicted;
    case HallucinationClass::kIncorrectFact: return ClassFamily::kIncorrect;
    default: return ClassFamily::kUnsupported;
  }
}

std::string_view canonical_name(HallucinationClass c) {
  return kInfo[class_index(c)].name;
}

std::string_view count_column_label(HallucinationClass c) {
  return kInfo[class_index(c)].count_label;
}

std::string_view recall_column_label(HallucinationClass c) {
  return kInfo[class_index(c)].recall_label;
}

std::optional<HallucinationClass> try_parse_label(std::string_view name) {
  const std::string key = normalize(name);
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    if (kInfo[i].name == key) return kAllClasses[i];
  }
  return std::nullopt;
}

HallucinationClass parse_label(std::string_view name) {
  if (auto c = try_parse_label(name)) return *c;
  throw Error(ErrorCode::kUnknownLabel,
              "unknown hallucination label '" + std::string(name) + "'");
}

}  // namespace halluspan
