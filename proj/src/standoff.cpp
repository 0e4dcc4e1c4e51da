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

#include "halluspan/standoff.hpp"

#include <fstream>
#include <unordered_set>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"

namespace halluspan {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, "record " + std::to_string(line) + ": " + what);
}

std::pair<std::size_t, std::size_t> read_range(const json& js, std::size_t line,
                                               std::size_t index) {
  if (!js.is_object()) schema_error(line, "span " + std::to_string(index) + " is not an object");
  const long long start = require_int(js, "start", line);
  const long long end = require_int(js, "end", line);
  if (start < 0) schema_error(line, "span " + std::to_string(index) + " has negative start");
  if (end <= start) {
    schema_error(line, "span " + std::to_string(index) + " has end <= start (" +
                           std::to_string(start) + ", " + std::to_string(end) + ")");
  }
  return {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
}

template <typename Range>
void check_sorted_disjoint(const std::vector<Range>& spans, std::size_t line) {
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first < spans[i - 1].second) {
      schema_error(line, "span " + std::to_string(i) +
                             " overlaps or precedes span " + std::to_string(i - 1));
    }
  }
}

}  // namespace

AnnotationSet annotation_set_from_json(const json& rec, std::size_t line) {
  AnnotationSet set;
  set.doc_id = require_string(rec, "doc_id", line);
  set.annotator = require_string(rec, "annotator", line);
  if (set.doc_id.empty()) schema_error(line, "empty doc_id");
  auto it = rec.find("spans");
  if (it == rec.end() || !it->is_array()) schema_error(line, "field 'spans' must be an array");
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& js = (*it)[i];
    auto range = read_range(js, line, i);
    SpanAnnotation span{range.first, range.second, std::nullopt};
    auto cls = js.find("class");
    if (cls != js.end() && !cls->is_null()) {
      if (!cls->is_string()) schema_error(line, "span " + std::to_string(i) + " class must be a string or null");
      auto parsed = try_parse_label(cls->get<std::string>());
      if (!parsed) {
        throw Error(ErrorCode::kUnknownLabel, "record " + std::to_string(line) + ": span " + std::to_string(i) +
                                                  " has unknown class '" + cls->get<std::string>() + "'");
      }
      span.cls = parsed;
    }
    ranges.push_back(range);
    set.spans.push_back(span);
  }
  check_sorted_disjoint(ranges, line);
  return set;
}

ordered_json to_json(const AnnotationSet& set) {
  ordered_json spans = ordered_json::array();
  for (const auto& s : set.spans) {
    ordered_json js;
    js["start"] = s.start;
    js["end"] = s.end;
    js["class"] = s.cls ? ordered_json(std::string(canonical_name(*s.cls))) : ordered_json(nullptr);
    spans.push_back(std::move(js));
  }
  ordered_json rec;
  rec["doc_id"] = set.doc_id;
  rec["annotator"] = set.annotator;
  rec["spans"] = std::move(spans);
  return rec;
}

std::vector<AnnotationSet> read_standoff(std::istream& in) {
  std::vector<AnnotationSet> out;
  for_each_jsonl(in, [&](const json& rec, std::size_t line) {
    out.push_back(annotation_set_from_json(rec, line));
  });
  return out;
}

std::vector<AnnotationSet> load_standoff(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_standoff(in);
}

void write_standoff(std::ostream& out, std::span<const AnnotationSet> sets) {
  for (const auto& s : sets) {
    out << to_json(s).dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

void save_standoff(const std::filesystem::path& path, std::span<const AnnotationSet> sets) {
  auto out = open_output(path);
  write_standoff(out, sets);
}

std::vector<DocumentPair> read_corpus(std::istream& in) {
  std::vector<DocumentPair> out;
  std::unordered_set<std::string> seen;
  for_each_jsonl(in, [&](const json& rec, std::size_t line) {
    DocumentPair doc{require_string(rec, "id", line), require_string(rec, "context", line),
                     require_string(rec, "summary", line)};
    if (doc.id.empty()) schema_error(line, "empty id");
    if (!seen.insert(doc.id).second) schema_error(line, "duplicate id '" + doc.id + "'");
    out.push_back(std::move(doc));
  });
  return out;
}

std::vector<DocumentPair> load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const DocumentPair> docs) {
  for (const auto& d : docs) {
    ordered_json rec;
    rec["id"] = d.id;
    rec["context"] = d.context;
    rec["summary"] = d.summary;
    out << rec.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, std::span<const DocumentPair> docs) {
  auto out = open_output(path);
  write_corpus(out, docs);
}

std::vector<AuxLabelSet> load_aux_labels(const std::filesystem::path& path) {
  std::vector<AuxLabelSet> out;
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    AuxLabelSet set;
    set.doc_id = require_string(rec, "doc_id", line);
    set.annotator = require_string(rec, "annotator", line);
    const std::string kind = require_string(rec, "label_kind", line);
    auto parsed = parse_aux_kind(kind);
    if (!parsed) schema_error(line, "unknown label_kind '" + kind + "'");
    set.kind = *parsed;
    auto it = rec.find("spans");
    if (it == rec.end() || !it->is_array()) schema_error(line, "field 'spans' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) set.spans.push_back(read_range((*it)[i], line, i));
    check_sorted_disjoint(set.spans, line);
    out.push_back(std::move(set));
  });
  return out;
}

}  // namespace halluspan
