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

#include "halluspan/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "halluspan/utf8.hpp"

namespace halluspan {

bool span_less(const SpanAnnotation& a, const SpanAnnotation& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end < b.end;
  const int ca = a.cls ? static_cast<int>(*a.cls) : -1;
  const int cb = b.cls ? static_cast<int>(*b.cls) : -1;
  return ca < cb;
}

AnnotationSet sorted(AnnotationSet set) {
  std::stable_sort(set.spans.begin(), set.spans.end(), span_less);
  return set;
}

AnnotationSet without_classes(AnnotationSet set) {
  for (auto& s : set.spans) s.cls.reset();
  return set;
}

std::string_view violation_rule_name(ViolationRule rule) {
  switch (rule) {
    case ViolationRule::kDocMismatch: return "doc_mismatch";
    case ViolationRule::kBounds: return "bounds";
    case ViolationRule::kEmptyText: return "empty_text";
    case ViolationRule::kOrder: return "order";
    case ViolationRule::kOverlap: return "overlap";
  }
  return "unknown";
}

namespace {

using Range = std::pair<std::size_t, std::size_t>;

void check_ranges(std::span<const Range> ranges, std::u32string_view text,
                  std::vector<Violation>& out) {
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto [start, end] = ranges[i];
    if (start >= end || end > n) {
      out.push_back({i, ViolationRule::kBounds,
                     "span [" + std::to_string(start) + ", " + std::to_string(end) +
                         ") outside text of length " + std::to_string(n)});
      continue;
    }
    if (utf8::trim(text.substr(start, end - start)).empty()) {
      out.push_back({i, ViolationRule::kEmptyText, "span covers only whitespace"});
    }
    if (i == 0) continue;
    const auto [pstart, pend] = ranges[i - 1];
    if (start < pstart || (start == pstart && end < pend)) {
      out.push_back({i, ViolationRule::kOrder, "spans not sorted by (start, end)"});
    }
    if (start < pend && pstart < end) {
      out.push_back({i, ViolationRule::kOverlap,
                     "span overlaps span " + std::to_string(i - 1)});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const AnnotationSet& set, const DocumentPair& doc) {
  std::vector<Violation> out;
  if (set.doc_id != doc.id) {
    out.push_back({std::nullopt, ViolationRule::kDocMismatch,
                   "annotation set for '" + set.doc_id + "' checked against '" + doc.id + "'"});
  }
  std::vector<Range> ranges;
  ranges.reserve(set.spans.size());
  for (const auto& s : set.spans) ranges.emplace_back(s.start, s.end);
  check_ranges(ranges, utf8::decode(doc.summary), out);
  return out;
}

ClassCounts count_by_class(std::span<const AnnotationSet> sets) {
  ClassCounts c;
  for (const auto& set : sets) {
    for (const auto& s : set.spans) {
      if (s.cls) {
        ++c.per_class[class_index(*s.cls)];
      } else {
        ++c.unclassed;
      }
      ++c.total;
    }
  }
  return c;
}

SummaryCounts count_by_summary(std::span<const AnnotationSet> sets) {
  SummaryCounts r;
  r.counts.reserve(sets.size());
  for (const auto& set : sets) r.counts.push_back(set.spans.size());
  const auto n = static_cast<double>(r.counts.size());
  if (r.counts.empty()) return r;
  r.mean = std::accumulate(r.counts.begin(), r.counts.end(), 0.0) / n;
  if (r.counts.size() > 1) {
    double ss = 0.0;
    for (auto c : r.counts) ss += (static_cast<double>(c) - r.mean) * (static_cast<double>(c) - r.mean);
    r.sd = std::sqrt(ss / (n - 1.0));
  }
  return r;
}

CountTable count_annotations(std::span<const AnnotationSet> sets, CountGrouping grouping) {
  CountTable t;
  t.grouping = grouping;
  t.classes = count_by_class(sets);
  t.summaries = count_by_summary(sets);
  return t;
}

std::string_view aux_kind_name(AuxLabelKind kind) {
  switch (kind) {
    case AuxLabelKind::kKeyFactContext: return "key_fact_context";
    case AuxLabelKind::kKeyFactSummary: return "key_fact_summary";
    case AuxLabelKind::kMedicalJargon: return "medical_jargon";
  }
  return "unknown";
}

std::optional<AuxLabelKind> parse_aux_kind(std::string_view name) {
  for (auto k : {AuxLabelKind::kKeyFactContext, AuxLabelKind::kKeyFactSummary,
                 AuxLabelKind::kMedicalJargon}) {
    if (aux_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<Violation> validate(const AuxLabelSet& set, const DocumentPair& doc) {
  std::vector<Violation> out;
  if (set.doc_id != doc.id) {
    out.push_back({std::nullopt, ViolationRule::kDocMismatch,
                   "label set for '" + set.doc_id + "' checked against '" + doc.id + "'"});
  }
  const std::string& text =
      set.kind == AuxLabelKind::kKeyFactContext ? doc.context : doc.summary;
  check_ranges(set.spans, utf8::decode(text), out);
  return out;
}

AuxCounts count_aux(std::span<const AuxLabelSet> sets) {
  AuxCounts c;
  for (const auto& s : sets) {
    switch (s.kind) {
      case AuxLabelKind::kKeyFactContext: c.key_facts_context += s.spans.size(); break;
      case AuxLabelKind::kKeyFactSummary: c.key_facts_summary += s.spans.size(); break;
      case AuxLabelKind::kMedicalJargon: c.medical_jargon += s.spans.size(); break;
    }
  }
  return c;
}

}  // namespace halluspan
