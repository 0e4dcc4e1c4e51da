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

#ifndef HALLUSPAN_ANNOTATION_HPP_
#define HALLUSPAN_ANNOTATION_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halluspan/taxonomy.hpp"

namespace halluspan {

// A context (brief hospital course) and the summary written from it. Both
// texts are stored exactly as read.
struct DocumentPair {
  std::string id;
  std::string context;
  std::string summary;
};

// Character offsets [start, end) into the summary. `cls` is empty for
// class-agnostic annotations.
struct SpanAnnotation {
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<HallucinationClass> cls;

  std::size_t length() const { return end - start; }
  bool overlaps(const SpanAnnotation& o) const { return start < o.end && o.start < end; }

  friend bool operator==(const SpanAnnotation&, const SpanAnnotation&) = default;
};

// Orders by (start, end) and then by class, with unclassed spans first.
bool span_less(const SpanAnnotation& a, const SpanAnnotation& b);

struct AnnotationSet {
  std::string doc_id;
  std::string annotator;
  std::vector<SpanAnnotation> spans;

  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

// Returns the set with its spans sorted by (start, end).
AnnotationSet sorted(AnnotationSet set);

// Drops classes from every span.
AnnotationSet without_classes(AnnotationSet set);

enum class ViolationRule { kDocMismatch, kBounds, kEmptyText, kOrder, kOverlap };

std::string_view violation_rule_name(ViolationRule rule);

struct Violation {
  std::optional<std::size_t> span_index;
  ViolationRule rule;
  std::string message;
};

// Checks bounds, non-blank covered text, ordering and the no-overlap rule
// against doc.summary. Never throws; an empty result means the set is valid.
std::vector<Violation> validate(const AnnotationSet& set, const DocumentPair& doc);

// Per-class totals for the count table.
struct ClassCounts {
  std::array<std::size_t, kNumClasses> per_class{};
  std::size_t unclassed = 0;
  std::size_t total = 0;
};

ClassCounts count_by_class(std::span<const AnnotationSet> sets);

// Spans per summary with mean and sample standard deviation (n - 1).
struct SummaryCounts {
  std::vector<std::size_t> counts;
  double mean = 0.0;
  double sd = 0.0;
};

SummaryCounts count_by_summary(std::span<const AnnotationSet> sets);

enum class CountGrouping { kByClass, kBySummary };

struct CountTable {
  CountGrouping grouping = CountGrouping::kByClass;
  ClassCounts classes;
  SummaryCounts summaries;
};

CountTable count_annotations(std::span<const AnnotationSet> sets, CountGrouping grouping);

// Key-fact and jargon labels collected during qualitative rating.
enum class AuxLabelKind { kKeyFactContext, kKeyFactSummary, kMedicalJargon };

std::string_view aux_kind_name(AuxLabelKind kind);
std::optional<AuxLabelKind> parse_aux_kind(std::string_view name);

struct AuxLabelSet {
  std::string doc_id;
  std::string annotator;
  AuxLabelKind kind = AuxLabelKind::kKeyFactContext;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
};

// Context key facts are checked against doc.context, the others against
// doc.summary. Spans of one kind may not overlap.
std::vector<Violation> validate(const AuxLabelSet& set, const DocumentPair& doc);

struct AuxCounts {
  std::size_t key_facts_context = 0;
  std::size_t key_facts_summary = 0;
  std::size_t medical_jargon = 0;

  // Key facts of the context that have no counterpart in the summary.
  std::size_t missing_key_facts() const {
    return key_facts_context > key_facts_summary ? key_facts_context - key_facts_summary : 0;
  }
};

// Sums the label sets of one (document, annotator).
AuxCounts count_aux(std::span<const AuxLabelSet> sets);

}  // namespace halluspan

#endif  // HALLUSPAN_ANNOTATION_HPP_
