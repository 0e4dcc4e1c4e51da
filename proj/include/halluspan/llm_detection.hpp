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

#ifndef HALLUSPAN_LLM_DETECTION_HPP_
#define HALLUSPAN_LLM_DETECTION_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halluspan/alignment.hpp"
#include "halluspan/chat_client.hpp"
#include "halluspan/error.hpp"
#include "halluspan/prompts.hpp"
#include "json.hpp"

namespace halluspan {

// The labeled summary cut out of a detector response.
struct LabeledRegion {
  std::string labeled;
  std::string errors_list;      // chain-of-thought list preceding the labeled summary
  bool header_missing = false;  // no "AVS WITH ERRORS LABELED:" header; whole response used
};

LabeledRegion extract_labeled_region(std::string_view response);

struct LlmDiagnostics {
  bool ok = true;
  std::optional<ErrorCode> error;
  std::string message;
  std::string fixture_key;
  bool header_missing = false;
  std::string errors_list;
  std::optional<double> confidence;
  bool sentence_mode = false;
  std::vector<DroppedSpan> dropped;
  std::vector<std::string> warnings;
};

struct LlmDetection {
  AnnotationSet spans;
  LlmDiagnostics diagnostics;
};

nlohmann::ordered_json to_json(const LlmDiagnostics& diag);

// Turns a raw response into spans over doc.summary. MalformedTag and
// LowConfidence are recorded in the diagnostics with an empty span set.
LlmDetection interpret_response(const DocumentPair& doc, std::string_view response, LabelMode mode,
                                const std::string& annotator, const AlignOptions& align_options = {});

struct LlmDetectorSettings {
  DetectionPromptSpec prompt;
  std::string annotator = "llm";
  AlignOptions align;
};

// Builds the prompt, queries the client and interprets the answer. Transport,
// rate-limit and fixture failures are also recorded per document.
LlmDetection detect_with_llm(const DocumentPair& doc, const LlmDetectorSettings& settings,
                             const PromptTemplates& templates, ChatClient& client);

// One result per document, in input order, computed with up to `jobs`
// concurrent requests.
std::vector<LlmDetection> detect_batch(std::span<const DocumentPair> docs,
                                       const LlmDetectorSettings& settings,
                                       const PromptTemplates& templates, ChatClient& client,
                                       std::size_t jobs = 4);

}  // namespace halluspan

#endif  // HALLUSPAN_LLM_DETECTION_HPP_
