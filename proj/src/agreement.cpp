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

#include "halluspan/agreement.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/span_eval.hpp"
#include "halluspan/table.hpp"

namespace halluspan {

AlphaResult krippendorff_interval(std::span<const RatingUnit> units) {
  // Distinct values and the coincidence matrix over them.
  std::vector<double> values;
  std::vector<std::vector<double>> pairable;
  for (const auto& unit : units) {
    std::vector<double> present;
    for (const auto& v : unit) {
      if (v) present.push_back(*v);
    }
    if (present.size() < 2) continue;
    values.insert(values.end(), present.begin(), present.end());
    pairable.push_back(std::move(present));
  }
  if (pairable.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "krippendorff alpha needs at least two units with two or more values");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t k = values.size();
  auto index_of = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
  };

  std::vector<double> coincidence(k * k, 0.0);
  AlphaResult r;
  r.n_units = pairable.size();
  for (const auto& unit : pairable) {
    const double weight = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t i = 0; i < unit.size(); ++i) {
      for (std::size_t j = 0; j < unit.size(); ++j) {
        if (i == j) continue;
        coincidence[index_of(unit[i]) * k + index_of(unit[j])] += weight;
      }
    }
    r.n_pairable += unit.size();
  }
  std::vector<double> marginal(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marginal[c] += coincidence[c * k + d];
  }
  const auto n = static_cast<double>(r.n_pairable);

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      const double delta = (values[c] - values[d]) * (values[c] - values[d]);
      observed += coincidence[c * k + d] * delta;
      expected += marginal[c] * marginal[d] * delta;
    }
  }
  observed /= n;
  expected /= n * (n - 1.0);
  if (expected == 0.0) {
    r.alpha = 1.0;
    r.degenerate = true;
    return r;
  }
  r.alpha = 1.0 - observed / expected;
  return r;
}

namespace {

std::unordered_map<std::string, const AnnotationSet*> by_doc(std::span<const AnnotationSet> sets) {
  std::unordered_map<std::string, const AnnotationSet*> out;
  for (const auto& s : sets) out.emplace(s.doc_id, &s);
  return out;
}

}  // namespace

AlphaResult count_agreement(std::span<const std::vector<AnnotationSet>> annotators,
                            std::span<const std::string> doc_ids) {
  std::vector<std::unordered_map<std::string, const AnnotationSet*>> index;
  for (const auto& sets : annotators) index.push_back(by_doc(sets));
  std::vector<RatingUnit> units;
  for (const auto& doc : doc_ids) {
    RatingUnit unit;
    for (std::size_t a = 0; a < index.size(); ++a) {
      auto it = index[a].find(doc);
      if (it == index[a].end()) {
        throw Error(ErrorCode::kCoverageMismatch,
                    "annotator " + std::to_string(a + 1) + " has no annotation set for '" + doc + "'");
      }
      unit.push_back(static_cast<double>(it->second->spans.size()));
    }
    units.push_back(std::move(unit));
  }
  return krippendorff_interval(units);
}

double span_overlap_f1(std::span<const AnnotationSet> a, std::span<const AnnotationSet> b,
                       LabelMode mode) {
  std::set<std::string> docs_a, docs_b;
  for (const auto& s : a) docs_a.insert(s.doc_id);
  for (const auto& s : b) docs_b.insert(s.doc_id);
  if (docs_a != docs_b) {
    throw Error(ErrorCode::kCoverageMismatch, "annotators cover different documents");
  }
  return evaluate_corpus(a, b, mode).scores.f1;
}

std::string_view dimension_name(RatingDimension d) {
  switch (d) {
    case RatingDimension::kRelevance: return "relevance";
    case RatingDimension::kConsistency: return "consistency";
    case RatingDimension::kSimplification: return "simplification";
    case RatingDimension::kFluency: return "fluency";
    case RatingDimension::kCoherence: return "coherence";
  }
  return "unknown";
}

std::string_view dimension_column_label(RatingDimension d) {
  switch (d) {
    case RatingDimension::kRelevance: return "Rel.";
    case RatingDimension::kConsistency: return "Con.";
    case RatingDimension::kSimplification: return "Sim.";
    case RatingDimension::kFluency: return "Flu.";
    case RatingDimension::kCoherence: return "Coh.";
  }
  return "?";
}

std::optional<RatingDimension> parse_dimension(std::string_view name) {
  for (auto d : kAllDimensions) {
    if (dimension_name(d) == name) return d;
  }
  return std::nullopt;
}

std::vector<RatingRecord> parse_ratings(std::istream& in) {
  std::vector<RatingRecord> out;
  std::set<std::tuple<std::string, std::string, int>> seen;
  for_each_jsonl(in, [&](const nlohmann::json& rec, std::size_t line) {
    RatingRecord r;
    r.doc_id = require_string(rec, "doc_id", line);
    r.annotator = require_string(rec, "annotator", line);
    const std::string dim = require_string(rec, "dimension", line);
    auto d = parse_dimension(dim);
    if (!d) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": unknown dimension '" + dim + "'");
    }
    r.dimension = *d;
    const long long v = require_int(rec, "value", line);
    if (v < 1 || v > 5) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": rating must be within 1..5");
    }
    r.value = static_cast<int>(v);
    if (!seen.emplace(r.doc_id, r.annotator, static_cast<int>(r.dimension)).second) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": repeated rating for (" + r.doc_id + ", " +
                      r.annotator + ", " + dim + ")");
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<RatingRecord> load_ratings(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_ratings(in);
}

namespace {

// Units keyed by (doc, dimension); one slot per annotator.
using UnitKey = std::pair<std::string, int>;

DimensionAlpha alpha_over(std::span<const RatingRecord> ratings,
                          std::optional<RatingDimension> only) {
  std::vector<std::string> annotators;
  for (const auto& r : ratings) {
    if (only && r.dimension != *only) continue;
    if (std::find(annotators.begin(), annotators.end(), r.annotator) == annotators.end()) {
      annotators.push_back(r.annotator);
    }
  }
  DimensionAlpha out;
  if (annotators.size() < 2) {
    out.note = "fewer than two annotators";
    return out;
  }
  std::map<UnitKey, RatingUnit> units;
  for (const auto& r : ratings) {
    if (only && r.dimension != *only) continue;
    auto& unit = units[{r.doc_id, static_cast<int>(r.dimension)}];
    unit.resize(annotators.size());
    const auto a = std::find(annotators.begin(), annotators.end(), r.annotator) - annotators.begin();
    unit[static_cast<std::size_t>(a)] = static_cast<double>(r.value);
  }
  std::vector<RatingUnit> list;
  for (auto& [key, unit] : units) list.push_back(std::move(unit));
  try {
    out.result = krippendorff_interval(list);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientData) throw;
    out.note = e.what();
  }
  return out;
}

}  // namespace

LikertAgreement likert_alpha(std::span<const RatingRecord> ratings) {
  LikertAgreement out;
  for (std::size_t d = 0; d < kAllDimensions.size(); ++d) {
    out.per_dimension[d] = alpha_over(ratings, kAllDimensions[d]);
  }
  out.total = alpha_over(ratings, std::nullopt);
  return out;
}

nlohmann::ordered_json to_json(const AlphaResult& a) {
  nlohmann::ordered_json js;
  js["alpha"] = a.alpha;
  js["method"] = "interval";
  js["n_units"] = a.n_units;
  js["n_pairable"] = a.n_pairable;
  js["degenerate"] = a.degenerate;
  return js;
}

namespace {

nlohmann::ordered_json to_json(const DimensionAlpha& d) {
  if (d.result) return to_json(*d.result);
  nlohmann::ordered_json js;
  js["alpha"] = nullptr;
  js["note"] = d.note;
  return js;
}

}  // namespace

nlohmann::ordered_json to_json(const AgreementReport& r) {
  nlohmann::ordered_json js;
  js["name"] = r.name;
  js["count_alpha"] = r.count_alpha ? to_json(*r.count_alpha) : nlohmann::ordered_json(nullptr);
  js["overlap_f1_agnostic"] = r.overlap_f1_agnostic ? nlohmann::ordered_json(*r.overlap_f1_agnostic)
                                                    : nlohmann::ordered_json(nullptr);
  js["overlap_f1_aware"] = r.overlap_f1_aware ? nlohmann::ordered_json(*r.overlap_f1_aware)
                                              : nlohmann::ordered_json(nullptr);
  if (r.likert) {
    nlohmann::ordered_json lk;
    for (std::size_t d = 0; d < kAllDimensions.size(); ++d) {
      lk[std::string(dimension_name(kAllDimensions[d]))] = to_json(r.likert->per_dimension[d]);
    }
    lk["total"] = to_json(r.likert->total);
    js["likert"] = std::move(lk);
  } else {
    js["likert"] = nullptr;
  }
  return js;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? fixed(*v, 3) : "-"; }

std::string cell(const DimensionAlpha& d) { return d.result ? fixed(d.result->alpha, 3) : "-"; }

}  // namespace

std::string render_span_agreement_table(std::span<const AgreementReport> reports) {
  TextTable t;
  t.add_header({"Annotation Task", "Agreement (Kripp.-alpha)", "Class-agn. overlap (F1)",
                "Class-aw. overlap (F1)"});
  for (const auto& r : reports) {
    t.add_row({r.name,
               cell(r.count_alpha ? std::optional<double>(r.count_alpha->alpha) : std::nullopt),
               cell(r.overlap_f1_agnostic), cell(r.overlap_f1_aware)});
  }
  return t.render();
}

std::string render_likert_table(const LikertAgreement& likert) {
  TextTable t;
  std::vector<std::string> header{""};
  for (auto d : kAllDimensions) header.emplace_back(dimension_column_label(d));
  header.emplace_back("Total");
  t.add_header(std::move(header));
  std::vector<std::string> row{"Agree. (Kr.-alpha)"};
  for (const auto& d : likert.per_dimension) row.push_back(cell(d));
  row.push_back(cell(likert.total));
  t.add_row(std::move(row));
  return t.render();
}

}  // namespace halluspan
