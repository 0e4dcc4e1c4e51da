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

#include "halluspan/lexicon.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/utf8.hpp"

namespace halluspan {
namespace {

struct Word {
  std::size_t start;
  std::size_t end;
  std::u32string lowered;
};

std::vector<Word> words_of(std::u32string_view text) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!utf8::is_alnum(text[i])) {
      ++i;
      continue;
    }
    Word w{i, i, {}};
    while (i < text.size() && utf8::is_alnum(text[i])) {
      w.lowered.push_back(utf8::to_lower(text[i]));
      ++i;
    }
    w.end = i;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string Lexicon::normalize(std::string_view surface) {
  std::u32string joined;
  for (const auto& w : words_of(utf8::decode(surface))) {
    if (!joined.empty()) joined.push_back(U' ');
    joined += w.lowered;
  }
  return utf8::encode(joined);
}

void Lexicon::add(std::string_view surface, Concept c) {
  const std::string key = normalize(surface);
  if (key.empty()) {
    throw Error(ErrorCode::kSchemaError, "lexicon surface form has no word characters");
  }
  std::size_t words = 1;
  for (char ch : key) words += ch == ' ';
  max_words_ = std::max(max_words_, words);
  entries_[key] = std::move(c);
}

const Concept* Lexicon::find(const std::string& normalized) const {
  auto it = entries_.find(normalized);
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[1].empty()) {
      throw Error(ErrorCode::kSchemaError,
                  "lexicon line " + std::to_string(lineno) +
                      ": expected surface<TAB>concept_id<TAB>semantic_type");
    }
    lex.add(fields[0], {fields[1], fields[2]});
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in);
}

std::vector<Mention> recognize(std::string_view text, const Lexicon& lexicon) {
  const std::vector<Word> words = words_of(utf8::decode(text));
  std::vector<Mention> out;
  const auto& filter = lexicon.type_filter();
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t matched = 0;
    const Concept* hit = nullptr;
    std::u32string key;
    const std::size_t limit = std::min(lexicon.max_words(), words.size() - i);
    for (std::size_t len = 1; len <= limit; ++len) {
      if (len > 1) key.push_back(U' ');
      key += words[i + len - 1].lowered;
      const Concept* c = lexicon.find(utf8::encode(key));
      if (c != nullptr && (filter.empty() || filter.count(c->semantic_type) > 0)) {
        matched = len;
        hit = c;
      }
    }
    if (hit == nullptr) {
      ++i;
      continue;
    }
    out.push_back({words[i].start, words[i + matched - 1].end, hit->concept_id, hit->semantic_type});
    i += matched;
  }
  return out;
}

void EmbeddingStore::add(std::string concept_id, std::vector<double> vec) {
  if (dimension_ == 0) dimension_ = vec.size();
  if (vec.size() != dimension_) {
    throw Error(ErrorCode::kSchemaError, "embedding for '" + concept_id + "' has dimension " +
                                             std::to_string(vec.size()) + ", expected " +
                                             std::to_string(dimension_));
  }
  double norm = 0.0;
  for (double x : vec) norm += x * x;
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kSchemaError, "embedding for '" + concept_id + "' has zero norm");
  }
  vectors_[std::move(concept_id)] = std::move(vec);
}

const std::vector<double>* EmbeddingStore::find(const std::string& concept_id) const {
  auto it = vectors_.find(concept_id);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingStore EmbeddingStore::parse(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    if (ss >> dim && dim > 0) break;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw Error(ErrorCode::kSchemaError, "embedding file: first line must hold the dimension");
    }
  }
  if (dim == 0) throw Error(ErrorCode::kSchemaError, "embedding file: missing dimension header");
  EmbeddingStore store(dim);
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string id;
    if (!(ss >> id)) continue;
    std::vector<double> vec;
    double x = 0.0;
    while (ss >> x) vec.push_back(x);
    if (!ss.eof()) {
      throw Error(ErrorCode::kSchemaError,
                  "embedding line " + std::to_string(lineno) + ": non-numeric component");
    }
    try {
      store.add(id, std::move(vec));
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError,
                  "embedding line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return store;
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace halluspan
