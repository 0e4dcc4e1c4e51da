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

#ifndef HALLUSPAN_AGREEMENT_HPP_
#define HALLUSPAN_AGREEMENT_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halluspan/annotation.hpp"
#include "halluspan/tagged_text.hpp"
#include "json.hpp"

namespace halluspan {

struct AlphaResult {
  double alpha = 1.0;
  std::size_t n_units = 0;     // units with at least two values
  std::size_t n_pairable = 0;  // values in those units
  bool degenerate = false;     // expected disagreement was zero
};

// One unit's values, one slot per annotator; empty slots are missing values.
using RatingUnit = std::vector<std::optional<double>>;

// Krippendorff's alpha with the interval metric (v - v')^2. Units with fewer
// than two values are not pairable and do not enter the computation. Throws
// Error(kInsufficientData) with fewer than two pairable units. When every
// pairable value is identical the result is 1.0 with `degenerate` set.
AlphaResult krippendorff_interval(std::span<const RatingUnit> units);

// Alpha over the number of spans each annotator marked per document. Every
// annotator must have a set for every listed document.
AlphaResult count_agreement(std::span<const std::vector<AnnotationSet>> annotators,
                            std::span<const std::string> doc_ids);

// F1 of annotator B's spans scored against annotator A's with partial
// matching. Both must cover the same documents.
double span_overlap_f1(std::span<const AnnotationSet> a, std::span<const AnnotationSet> b,
                       LabelMode mode);

enum class RatingDimension { kRelevance, kConsistency, kSimplification, kFluency, kCoherence };

inline constexpr std::array<RatingDimension, 5> kAllDimensions = {
    RatingDimension::kRelevance, RatingDimension::kConsistency, RatingDimension::kSimplification,
    RatingDimension::kFluency, RatingDimension::kCoherence};

std::string_view dimension_name(RatingDimension d);
std::string_view dimension_column_label(RatingDimension d);
std::optional<RatingDimension> parse_dimension(std::string_view name);

struct RatingRecord {
  std::string doc_id;
  std::string annotator;
  RatingDimension dimension = RatingDimension::kRelevance;
  int value = 0;  // Likert 1..5
};

// {doc_id, annotator, dimension, value}; rejects out-of-range values and
// repeated (doc, annotator, dimension) triples.
std::vector<RatingRecord> load_ratings(const std::filesystem::path& path);
std::vector<RatingRecord> parse_ratings(std::istream& in);

struct DimensionAlpha {
  std::optional<AlphaResult> result;
  std::string note;  // why the result is absent
};

struct LikertAgreement {
  std::array<DimensionAlpha, 5> per_dimension;
  DimensionAlpha total;  // all (doc, dimension) units pooled
};

LikertAgreement likert_alpha(std::span<const RatingRecord> ratings);

struct AgreementReport {
  std::string name;
  std::optional<AlphaResult> count_alpha;
  std::optional<double> overlap_f1_agnostic;
  std::optional<double> overlap_f1_aware;
  std::optional<LikertAgreement> likert;
};

nlohmann::ordered_json to_json(const AlphaResult& alpha);
nlohmann::ordered_json to_json(const AgreementReport& report);

// Agreement (Kripp.-alpha) plus class-agnostic and class-aware overlap F1,
// one row per report.
std::string render_span_agreement_table(std::span<const AgreementReport> reports);

// Alpha per rating dimension and pooled.
std::string render_likert_table(const LikertAgreement& likert);

}  // namespace halluspan

#endif  // HALLUSPAN_AGREEMENT_HPP_
