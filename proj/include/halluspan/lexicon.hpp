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

#ifndef HALLUSPAN_LEXICON_HPP_
#define HALLUSPAN_LEXICON_HPP_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace halluspan {

struct Concept {
  std::string concept_id;
  std::string semantic_type;
};

// A recognized concept mention; offsets are characters.
struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string concept_id;
  std::string semantic_type;

  friend bool operator==(const Mention&, const Mention&) = default;
};

// Surface-form dictionary. Keys are the lowercased word tokens of a surface
// form joined by single spaces, so lookup ignores case and whitespace
// variation. Punctuation separates words.
class Lexicon {
 public:
  // Later entries for the same normalized surface replace earlier ones.
  void add(std::string_view surface, Concept c);

  // Empty filter means all semantic types are allowed.
  void set_type_filter(std::set<std::string> types) { type_filter_ = std::move(types); }
  const std::set<std::string>& type_filter() const { return type_filter_; }

  const Concept* find(const std::string& normalized) const;
  std::size_t max_words() const { return max_words_; }
  std::size_t size() const { return entries_.size(); }

  // Tab-separated `surface<TAB>concept_id<TAB>semantic_type`; blank lines and
  // lines starting with '#' are skipped.
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(std::istream& in);

  static std::string normalize(std::string_view surface);

 private:
  std::unordered_map<std::string, Concept> entries_;
  std::set<std::string> type_filter_;
  std::size_t max_words_ = 0;
};

// Leftmost-longest, non-overlapping dictionary matches on word boundaries,
// restricted to the lexicon's type filter.
std::vector<Mention> recognize(std::string_view text, const Lexicon& lexicon);

// Dense concept vectors of one fixed dimension.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension = 0) : dimension_(dimension) {}

  // Throws SchemaError on a dimension mismatch or a zero vector.
  void add(std::string concept_id, std::vector<double> vec);

  const std::vector<double>* find(const std::string& concept_id) const;
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

  // First line: the dimension d. Then one `concept_id v1 ... vd` per line.
  static EmbeddingStore load(const std::filesystem::path& path);
  static EmbeddingStore parse(std::istream& in);

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace halluspan

#endif  // HALLUSPAN_LEXICON_HPP_
