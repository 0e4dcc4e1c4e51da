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

#include "halluspan/prompts.hpp"

#include <fmt/format.h>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/standoff.hpp"
#include "halluspan/utf8.hpp"

namespace halluspan {
namespace {

void rstrip(std::string& s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.pop_back();
  }
}

std::string read_template(const std::filesystem::path& dir, const char* name) {
  const auto path = dir / name;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kTemplateMissing, "prompt template not found: " + path.string());
  }
  return read_file(path);
}

const char* kAgnosticInstruction =
    "Label every error span with a plain <error></error> tag and do not add a class attribute.";

}  // namespace

nlohmann::ordered_json to_json(const Messages& messages) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& m : messages) arr.push_back({{"role", m.role}, {"content", m.content}});
  return arr;
}

void PromptTemplates::trim() {
  rstrip(system);
  rstrip(detection_guidelines);
  rstrip(summarization_instruction);
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t;
  t.system = read_template(dir, "system_prompt.txt");
  t.detection_guidelines = read_template(dir, "detection_guidelines.txt");
  t.summarization_instruction = read_template(dir, "summarization_instruction.txt");
  t.trim();
  return t;
}

std::vector<DetectionExemplar> load_detection_exemplars(const std::filesystem::path& path) {
  std::vector<DetectionExemplar> out;
  for_each_jsonl(path, [&](const nlohmann::json& rec, std::size_t line) {
    DetectionExemplar ex;
    ex.doc.id = require_string(rec, "id", line);
    ex.doc.context = require_string(rec, "context", line);
    ex.doc.summary = require_string(rec, "summary", line);
    nlohmann::json as_set = {{"doc_id", ex.doc.id}, {"annotator", "exemplar"},
                             {"spans", rec.value("spans", nlohmann::json::array())}};
    AnnotationSet set = annotation_set_from_json(as_set, line);
    const auto violations = validate(set, ex.doc);
    if (!violations.empty()) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": " + violations.front().message);
    }
    ex.spans = std::move(set.spans);
    if (rec.contains("errors")) ex.errors = require_string(rec, "errors", line);
    out.push_back(std::move(ex));
  });
  return out;
}

std::string describe_errors(const DocumentPair& doc, std::span<const SpanAnnotation> spans) {
  std::string out;
  for (const auto& s : spans) {
    if (!out.empty()) out += '\n';
    out += fmt::format("- \"{}\"", utf8::slice(doc.summary, s.start, s.end));
    if (s.cls) out += fmt::format(" ({})", canonical_name(*s.cls));
  }
  return out.empty() ? "- none" : out;
}

Messages build_detection_prompt(const DetectionPromptSpec& spec, const DocumentPair& doc,
                                const PromptTemplates& templates) {
  if (templates.detection_guidelines.empty()) {
    throw Error(ErrorCode::kTemplateMissing, "detection guidelines template is empty");
  }
  const bool agnostic = spec.mode == LabelMode::kClassAgnostic;
  std::string user = templates.detection_guidelines;
  if (agnostic) {
    user += "\n\n";
    user += kAgnosticInstruction;
  }
  user += "\n\n## Examples\n\n";
  std::size_t index = 0;
  for (const auto& shot : spec.shots) {
    std::vector<SpanAnnotation> spans = shot.spans;
    if (agnostic) {
      for (auto& s : spans) s.cls.reset();
    }
    user += fmt::format("### Example {}\n\nBHC:\n{}\n\nAVS:\n{}\n\n", ++index, shot.doc.context,
                        shot.doc.summary);
    if (spec.cot) {
      user += fmt::format("ERRORS:\n{}\n\n",
                          shot.errors.empty() ? describe_errors(shot.doc, spans) : shot.errors);
    }
    user += fmt::format("AVS WITH ERRORS LABELED:\n{}\n\n", render_tagged(shot.doc.summary, spans));
  }
  user += fmt::format("### Example {}\n\nBHC:\n{}\n\nAVS:\n{}\n\nERROR:", index + 1, doc.context,
                      doc.summary);
  return {{"system", templates.system}, {"user", std::move(user)}};
}

Messages build_summarization_prompt(std::span<const SummaryExemplar> shots, const DocumentPair& doc,
                                    const PromptTemplates& templates) {
  if (shots.size() > kMaxSummaryShots) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("at most {} summarization examples are supported, got {}",
                            kMaxSummaryShots, shots.size()));
  }
  if (templates.summarization_instruction.empty()) {
    throw Error(ErrorCode::kTemplateMissing, "summarization instruction template is empty");
  }
  std::string user = templates.summarization_instruction;
  user += '\n';
  if (!shots.empty()) {
    user += "Here are some examples:\n";
    for (const auto& s : shots) {
      user += fmt::format("DOCUMENT:\n{}\nSUMMARY:\n{}\n", s.document, s.summary);
    }
  }
  user += fmt::format("\nDOCUMENT: {}", doc.context);
  return {{"system", templates.system}, {"user", std::move(user)}};
}

}  // namespace halluspan
