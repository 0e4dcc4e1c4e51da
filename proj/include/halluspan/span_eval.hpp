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

#ifndef HALLUSPAN_SPAN_EVAL_HPP_
#define HALLUSPAN_SPAN_EVAL_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "halluspan/annotation.hpp"
#include "halluspan/tagged_text.hpp"

namespace halluspan {

// SemEval-2013 style tallies.
//   correct:   identical boundaries (and class, when class-aware)
//   partial:   overlapping, inexact boundaries (same class when class-aware)
//   incorrect: overlapping with a different class (class-aware only)
//   missed:    gold span left unmatched
//   spurious:  predicted span left unmatched
struct EvalCounts {
  std::size_t correct = 0;
  std::size_t partial = 0;
  std::size_t incorrect = 0;
  std::size_t missed = 0;
  std::size_t spurious = 0;

  std::size_t gold_total() const { return correct + partial + incorrect + missed; }
  std::size_t pred_total() const { return correct + partial + incorrect + spurious; }

  EvalCounts& operator+=(const EvalCounts& o);
  friend EvalCounts operator+(EvalCounts a, const EvalCounts& b) { return a += b; }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool zero_support = false;  // a denominator was zero; the ratio is reported as 0
};

// Precision and recall give partial matches half credit.
Scores score(const EvalCounts& c);

// One matched (gold, predicted) pair, by index into the sorted span lists.
struct SpanPair {
  std::size_t gold;
  std::size_t pred;
};

struct DocumentMatch {
  EvalCounts counts;
  std::vector<SpanPair> pairs;
  // Per gold class, tallies attributed to that class (spurious attributed to
  // the predicted class). Unclassed spans are only in `counts`.
  std::array<EvalCounts, kNumClasses> per_class{};
};

// One-to-one matching that maximizes (correct, partial, incorrect) in that
// order. Both sets are expected to be validated (sorted, non-overlapping);
// the matching is still one-to-one otherwise. Throws Error(kDocMismatch) when
// the doc ids differ.
DocumentMatch match_spans(const AnnotationSet& gold, const AnnotationSet& pred, LabelMode mode);
EvalCounts match_document(const AnnotationSet& gold, const AnnotationSet& pred, LabelMode mode);

struct ClassRecall {
  double recall = 0.0;
  std::size_t support = 0;
  bool zero_support = false;
};

struct EvalReport {
  LabelMode mode = LabelMode::kClassAgnostic;
  EvalCounts counts;
  Scores scores;
  std::array<EvalCounts, kNumClasses> per_class_counts{};
  std::array<ClassRecall, kNumClasses> per_class_recall{};
  std::size_t documents = 0;
  bool no_gold_spans = false;
};

// Micro-averaged over documents. Gold documents without a prediction set count
// as all missed; prediction sets for unknown documents are ignored.
EvalReport evaluate_corpus(std::span<const AnnotationSet> gold, std::span<const AnnotationSet> pred,
                           LabelMode mode);

// Recall per gold class using class-agnostic matching of the full prediction
// set against the gold spans of that class.
std::array<ClassRecall, kNumClasses> per_class_recall(std::span<const AnnotationSet> gold,
                                                      std::span<const AnnotationSet> pred);

}  // namespace halluspan

#endif  // HALLUSPAN_SPAN_EVAL_HPP_
