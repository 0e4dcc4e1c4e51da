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

#include "halluspan/llm_detection.hpp"

#include "halluspan/parallel.hpp"
#include "halluspan/standoff.hpp"
#include "halluspan/tagged_text.hpp"

namespace halluspan {
namespace {

constexpr std::string_view kLabeledHeader = "AVS WITH ERRORS LABELED:";

std::string trim_copy(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Drops a leading "ERRORS:" or "ERROR:" marker.
std::string strip_errors_marker(std::string s) {
  for (std::string_view marker : {"ERRORS:", "ERROR:"}) {
    if (s.rfind(marker, 0) == 0) return trim_copy(std::string_view(s).substr(marker.size()));
  }
  return s;
}

}  // namespace

LabeledRegion extract_labeled_region(std::string_view response) {
  LabeledRegion out;
  const auto pos = response.rfind(kLabeledHeader);
  std::string_view body = response;
  if (pos == std::string_view::npos) {
    out.header_missing = true;
  } else {
    out.errors_list = strip_errors_marker(trim_copy(response.substr(0, pos)));
    body = response.substr(pos + kLabeledHeader.size());
  }
  // A model that keeps going with a further example block is cut off there.
  const auto next = body.find("\n### Example");
  if (next != std::string_view::npos) body = body.substr(0, next);
  out.labeled = trim_copy(body);
  return out;
}

nlohmann::ordered_json to_json(const LlmDiagnostics& diag) {
  nlohmann::ordered_json j;
  j["ok"] = diag.ok;
  j["error"] = diag.error ? nlohmann::ordered_json(std::string(error_code_name(*diag.error)))
                          : nlohmann::ordered_json(nullptr);
  j["message"] = diag.message;
  j["fixture_key"] = diag.fixture_key;
  j["header_missing"] = diag.header_missing;
  j["errors_list"] = diag.errors_list;
  j["confidence"] = diag.confidence ? nlohmann::ordered_json(*diag.confidence)
                                    : nlohmann::ordered_json(nullptr);
  j["sentence_mode"] = diag.sentence_mode;
  auto dropped = nlohmann::ordered_json::array();
  for (const auto& d : diag.dropped) {
    dropped.push_back({{"start", d.span.start}, {"end", d.span.end}, {"reason", d.reason}});
  }
  j["dropped"] = dropped;
  j["warnings"] = diag.warnings;
  return j;
}

LlmDetection interpret_response(const DocumentPair& doc, std::string_view response, LabelMode mode,
                                const std::string& annotator, const AlignOptions& align_options) {
  LlmDetection out;
  out.spans.doc_id = doc.id;
  out.spans.annotator = annotator;
  auto& diag = out.diagnostics;
  const LabeledRegion region = extract_labeled_region(response);
  diag.header_missing = region.header_missing;
  diag.errors_list = region.errors_list;
  if (region.header_missing) diag.warnings.push_back("labeled summary header missing; parsed whole response");
  try {
    ParsedTagged parsed = parse_tagged(region.labeled, mode);
    for (auto& w : parsed.warnings) diag.warnings.push_back(std::move(w));
    const OffsetMap map = align(parsed.plain, doc.summary, align_options);
    diag.confidence = map.confidence;
    diag.sentence_mode = map.sentence_mode;
    Projection proj = project_spans(parsed.spans, map);
    diag.dropped = std::move(proj.dropped);
    AnnotationSet candidate{doc.id, annotator, {}};
    for (const auto& s : proj.spans) {
      candidate.spans.push_back(s);
      if (!validate(candidate, doc).empty()) {
        candidate.spans.pop_back();
        diag.dropped.push_back({s, "projected span violates the span rules"});
      }
    }
    out.spans = std::move(candidate);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMalformedTag && e.code() != ErrorCode::kLowConfidence) throw;
    diag.ok = false;
    diag.error = e.code();
    diag.message = e.what();
    out.spans.spans.clear();
  }
  return out;
}

LlmDetection detect_with_llm(const DocumentPair& doc, const LlmDetectorSettings& settings,
                             const PromptTemplates& templates, ChatClient& client) {
  const Messages messages = build_detection_prompt(settings.prompt, doc, templates);
  const std::string key = fixture_key(messages);
  LlmDetection out;
  try {
    const LlmResponse response = client.complete(messages);
    out = interpret_response(doc, response.text, settings.prompt.mode, settings.annotator,
                             settings.align);
  } catch (const Error& e) {
    const ErrorCode c = e.code();
    if (c != ErrorCode::kTransport && c != ErrorCode::kRateLimited && c != ErrorCode::kFixtureMiss) {
      throw;
    }
    out.spans = {doc.id, settings.annotator, {}};
    out.diagnostics.ok = false;
    out.diagnostics.error = c;
    out.diagnostics.message = e.what();
  }
  out.diagnostics.fixture_key = key;
  return out;
}

std::vector<LlmDetection> detect_batch(std::span<const DocumentPair> docs,
                                       const LlmDetectorSettings& settings,
                                       const PromptTemplates& templates, ChatClient& client,
                                       std::size_t jobs) {
  return parallel_map(docs.size(), jobs, [&](std::size_t i) {
    return detect_with_llm(docs[i], settings, templates, client);
  });
}

}  // namespace halluspan
