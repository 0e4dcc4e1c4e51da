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

#ifndef HALLUSPAN_STANDOFF_HPP_
#define HALLUSPAN_STANDOFF_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "halluspan/annotation.hpp"
#include "json.hpp"

// Line-delimited JSON storage for corpora and standoff annotations.
//
//   corpus:    {"id": str, "context": str, "summary": str}
//   standoff:  {"doc_id": str, "annotator": str,
//               "spans": [{"start": int, "end": int, "class": str|null}]}
//   aux:       {"doc_id": str, "annotator": str, "label_kind": str,
//               "spans": [{"start": int, "end": int}]}
namespace halluspan {

// Offsets are checked for start < end, ordering and overlap here; bounds are
// checked by validate() once the document text is known.
std::vector<AnnotationSet> read_standoff(std::istream& in);
std::vector<AnnotationSet> load_standoff(const std::filesystem::path& path);

void write_standoff(std::ostream& out, std::span<const AnnotationSet> sets);
void save_standoff(const std::filesystem::path& path, std::span<const AnnotationSet> sets);

nlohmann::ordered_json to_json(const AnnotationSet& set);
AnnotationSet annotation_set_from_json(const nlohmann::json& rec, std::size_t line);

// Rejects empty or duplicate ids.
std::vector<DocumentPair> read_corpus(std::istream& in);
std::vector<DocumentPair> load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, std::span<const DocumentPair> docs);
void save_corpus(const std::filesystem::path& path, std::span<const DocumentPair> docs);

std::vector<AuxLabelSet> load_aux_labels(const std::filesystem::path& path);

}  // namespace halluspan

#endif  // HALLUSPAN_STANDOFF_HPP_
