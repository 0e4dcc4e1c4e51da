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

#ifndef HALLUSPAN_ENTITY_DETECTOR_HPP_
#define HALLUSPAN_ENTITY_DETECTOR_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "halluspan/annotation.hpp"
#include "halluspan/lexicon.hpp"

namespace halluspan {

struct DetectorConfig {
  double tau = 0.85;
  bool use_embeddings = false;
  std::string annotator = "entity_baseline";

  // Throws ConfigError unless 0 <= tau <= 1.
  void check() const;
};

// Concept mentions of both sides of one document.
struct DocumentMentions {
  std::string doc_id;
  std::vector<Mention> context;
  std::vector<Mention> summary;
};

struct EntityDetection {
  AnnotationSet spans;               // class-less
  std::set<std::string> missing_embeddings;  // concepts compared by id only
};

// Flags summary mentions whose concept has no counterpart in the context.
// A counterpart is the same concept id or, with embeddings enabled, any
// context concept with cosine similarity >= tau.
EntityDetection detect_mentions(const DocumentMentions& mentions, const EmbeddingStore* embeddings,
                                const DetectorConfig& cfg);

DocumentMentions recognize_document(const DocumentPair& doc, const Lexicon& lexicon);

EntityDetection detect(const DocumentPair& doc, const Lexicon& lexicon,
                       const EmbeddingStore* embeddings, const DetectorConfig& cfg);

// Mention file records: {doc_id, side: "context"|"summary", start, end,
// concept_id, semantic_type}. Mentions outside `type_filter` are dropped when
// the filter is non-empty; overlapping mentions on one side are rejected.
std::map<std::string, DocumentMentions> load_mentions(const std::filesystem::path& path,
                                                      const std::set<std::string>& type_filter = {});
std::map<std::string, DocumentMentions> read_mentions(std::istream& in,
                                                      const std::set<std::string>& type_filter = {});

struct TauTuning {
  double tau = 0.0;
  std::vector<double> grid;
  std::vector<double> f1;  // class-agnostic partial-match F1 per grid value
  bool all_zero = false;
};

// Picks the grid value with the best class-agnostic F1 on the dev set; ties go
// to the smallest value. Throws EmptyGrid on an empty grid.
TauTuning tune_tau(std::span<const AnnotationSet> dev_gold, std::span<const DocumentMentions> dev_docs,
                   const EmbeddingStore& embeddings, std::span<const double> grid);

}  // namespace halluspan

#endif  // HALLUSPAN_ENTITY_DETECTOR_HPP_
