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

#ifndef HALLUSPAN_PROMPTS_HPP_
#define HALLUSPAN_PROMPTS_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "halluspan/annotation.hpp"
#include "halluspan/tagged_text.hpp"
#include "json.hpp"

namespace halluspan {

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using Messages = std::vector<ChatMessage>;

nlohmann::ordered_json to_json(const Messages& messages);

struct PromptTemplates {
  std::string system;
  std::string detection_guidelines;
  std::string summarization_instruction;

  // Compiled-in copies of templates/*.txt.
  static PromptTemplates embedded();
  // Reads system_prompt.txt, detection_guidelines.txt and
  // summarization_instruction.txt from `dir`; a missing file raises
  // TemplateMissing.
  static PromptTemplates load(const std::filesystem::path& dir);

  // Strips trailing whitespace from every template.
  void trim();
};

// A labeled example shown to the detector. `errors` is the free-text error
// list used by the chain-of-thought variant; when empty it is derived from the
// spans.
struct DetectionExemplar {
  DocumentPair doc;
  std::vector<SpanAnnotation> spans;
  std::string errors;
};

struct DetectionPromptSpec {
  LabelMode mode = LabelMode::kClassAware;
  bool cot = false;
  std::vector<DetectionExemplar> shots;
};

// {id, context, summary, spans: [{start, end, class|null}], errors?: str}
std::vector<DetectionExemplar> load_detection_exemplars(const std::filesystem::path& path);

// One line per span: `- "<span text>" (<class>)`, class omitted when absent.
std::string describe_errors(const DocumentPair& doc, std::span<const SpanAnnotation> spans);

Messages build_detection_prompt(const DetectionPromptSpec& spec, const DocumentPair& doc,
                                const PromptTemplates& templates);

struct SummaryExemplar {
  std::string document;
  std::string summary;
};

inline constexpr std::size_t kMaxSummaryShots = 5;

// Throws ConfigError for more than kMaxSummaryShots exemplars.
Messages build_summarization_prompt(std::span<const SummaryExemplar> shots, const DocumentPair& doc,
                                    const PromptTemplates& templates);

}  // namespace halluspan

#endif  // HALLUSPAN_PROMPTS_HPP_
