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

#ifndef HALLUSPAN_TEXT_METRICS_HPP_
#define HALLUSPAN_TEXT_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace halluspan {

// Lowercased whitespace tokens with leading and trailing punctuation removed;
// tokens that are pure punctuation disappear.
std::vector<std::string> metric_tokens(std::string_view text);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Prf rouge_n(std::string_view candidate, std::string_view reference, std::size_t n);
Prf rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
            std::size_t n);

Prf rouge_l(std::string_view candidate, std::string_view reference);
Prf rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

struct SariComponents {
  double keep = 0.0;    // F1
  double del = 0.0;     // precision
  double add = 0.0;     // F1
  double score = 0.0;   // mean of the three, times 100
};

// n-gram orders 1..4 are averaged per component. With no references the
// result is all zeros.
SariComponents sari_components(std::string_view source, std::string_view candidate,
                               std::span<const std::string> references);
double sari(std::string_view source, std::string_view candidate,
            std::span<const std::string> references);

// Sentence rule: a sentence ends at a run of '.', '!' or '?' followed by
// whitespace or the end of the text, unless the run is a single '.' after a
// known title or Latin abbreviation (Dr, Mr, Mrs, Ms, St, vs, e.g, i.e, etc).
// Line breaks also end a sentence. A segment counts only if it holds a letter,
// digit or the deidentification token.
struct CorpusStats {
  std::size_t words = 0;       // whitespace-separated tokens
  std::size_t sentences = 0;
  std::size_t characters = 0;  // code points
  std::size_t deid_count = 0;  // non-overlapping "___"

  CorpusStats& operator+=(const CorpusStats& o);
};

CorpusStats corpus_stats(std::string_view text);

}  // namespace halluspan

#endif  // HALLUSPAN_TEXT_METRICS_HPP_
