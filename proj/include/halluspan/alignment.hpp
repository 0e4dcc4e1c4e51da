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

#ifndef HALLUSPAN_ALIGNMENT_HPP_
#define HALLUSPAN_ALIGNMENT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halluspan/annotation.hpp"

namespace halluspan {

// Character-level correspondence from a rewritten copy of a text (the
// variant) back to the original.
//
// Two boundary maps are kept because a span start and a span end should snap
// to different sides of deleted original text: start_at[i] is the original
// position where variant character i is consumed, end_at[i] the original
// position just after variant character i - 1 is consumed. Both have
// variant_length + 1 entries and are non-decreasing.
struct OffsetMap {
  std::vector<std::size_t> start_at;
  std::vector<std::size_t> end_at;
  std::size_t variant_length = 0;
  std::size_t original_length = 0;
  std::size_t matched = 0;    // characters aligned to an identical character
  std::size_t edit_cost = 0;  // unit-cost edit distance of the alignment
  double confidence = 1.0;    // matched / max(variant_length, original_length)
  bool sentence_mode = false;
};

struct AlignOptions {
  double min_confidence = 0.5;
  // Above this many characters on either side, sentences are paired first and
  // aligned one pair at a time.
  std::size_t sentence_mode_threshold = 20000;
};

// Minimum-edit-distance alignment with unit costs. Among optimal alignments
// the one with the most matches wins; remaining ties prefer, in order,
// match, substitution, skipping an original character, skipping a variant
// character, at the earliest position. Throws Error(kLowConfidence) when the
// confidence is below options.min_confidence.
OffsetMap align(std::string_view variant, std::string_view original,
                const AlignOptions& options = {});
OffsetMap align_chars(std::u32string_view variant, std::u32string_view original,
                      const AlignOptions& options = {});

struct DroppedSpan {
  SpanAnnotation span;  // in variant coordinates
  std::string reason;
};

struct Projection {
  std::vector<SpanAnnotation> spans;  // in original coordinates
  std::vector<DroppedSpan> dropped;
};

// Maps each span through the alignment. Spans that collapse to zero width
// (text the rewrite invented) are dropped and reported.
Projection project_spans(std::span<const SpanAnnotation> spans, const OffsetMap& map);

}  // namespace halluspan

#endif  // HALLUSPAN_ALIGNMENT_HPP_
