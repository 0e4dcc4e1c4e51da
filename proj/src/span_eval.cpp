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

#include "halluspan/span_eval.hpp"

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <unordered_map>

#include "halluspan/error.hpp"

namespace halluspan {

EvalCounts& EvalCounts::operator+=(const EvalCounts& o) {
  correct += o.correct;
  partial += o.partial;
  incorrect += o.incorrect;
  missed += o.missed;
  spurious += o.spurious;
  return *this;
}

Scores score(const EvalCounts& c) {
  Scores s;
  const double credit = static_cast<double>(c.correct) + 0.5 * static_cast<double>(c.partial);
  const std::size_t pred = c.pred_total();
  const std::size_t gold = c.gold_total();
  s.zero_support = pred == 0 || gold == 0;
  s.precision = pred == 0 ? 0.0 : credit / static_cast<double>(pred);
  s.recall = gold == 0 ? 0.0 : credit / static_cast<double>(gold);
  s.f1 = (s.precision + s.recall) == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

namespace {

enum class PairKind { kNone, kCorrect, kPartial, kIncorrect };

PairKind classify(const SpanAnnotation& g, const SpanAnnotation& p, LabelMode mode) {
  if (!g.overlaps(p)) return PairKind::kNone;
  const bool exact = g.start == p.start && g.end == p.end;
  if (mode == LabelMode::kClassAware && g.cls != p.cls) return PairKind::kIncorrect;
  return exact ? PairKind::kCorrect : PairKind::kPartial;
}

// Lexicographic objective (correct, partial, incorrect).
struct Gain {
  std::size_t correct = 0, partial = 0, incorrect = 0;
  auto key() const { return std::tie(correct, partial, incorrect); }
  bool operator>(const Gain& o) const { return key() > o.key(); }
};

Gain add(Gain g, PairKind k) {
  switch (k) {
    case PairKind::kCorrect: ++g.correct; break;
    case PairKind::kPartial: ++g.partial; break;
    case PairKind::kIncorrect: ++g.incorrect; break;
    case PairKind::kNone: break;
  }
  return g;
}

}  // namespace

DocumentMatch match_spans(const AnnotationSet& gold_set, const AnnotationSet& pred_set,
                          LabelMode mode) {
  if (gold_set.doc_id != pred_set.doc_id) {
    throw Error(ErrorCode::kDocMismatch,
                "gold '" + gold_set.doc_id + "' vs predicted '" + pred_set.doc_id + "'");
  }
  std::vector<SpanAnnotation> gold = gold_set.spans;
  std::vector<SpanAnnotation> pred = pred_set.spans;
  std::stable_sort(gold.begin(), gold.end(), span_less);
  std::stable_sort(pred.begin(), pred.end(), span_less);
  const std::size_t a = gold.size();
  const std::size_t b = pred.size();

  // Sorted disjoint intervals admit no crossing pairs, so an LCS-style DP over
  // (gold suffix, pred suffix) finds the optimum.
  std::vector<Gain> best((a + 1) * (b + 1));
  std::vector<std::uint8_t> step((a + 1) * (b + 1), 0);
  auto at = [b](std::size_t i, std::size_t j) { return i * (b + 1) + j; };
  for (std::size_t i = a; i-- > 0;) {
    for (std::size_t j = b; j-- > 0;) {
      Gain value = best[at(i + 1, j)];
      std::uint8_t s = 1;  // skip gold
      if (best[at(i, j + 1)] > value) value = best[at(i, j + 1)], s = 2;  // skip pred
      const PairKind k = classify(gold[i], pred[j], mode);
      if (k != PairKind::kNone) {
        const Gain paired = add(best[at(i + 1, j + 1)], k);
        if (!(value > paired)) value = paired, s = 0;
      }
      best[at(i, j)] = value;
      step[at(i, j)] = s;
    }
  }

  DocumentMatch out;
  std::vector<bool> gold_used(a, false), pred_used(b, false);
  std::size_t i = 0, j = 0;
  while (i < a && j < b) {
    switch (step[at(i, j)]) {
      case 0: {
        const PairKind k = classify(gold[i], pred[j], mode);
        EvalCounts delta;
        if (k == PairKind::kCorrect) delta.correct = 1;
        if (k == PairKind::kPartial) delta.partial = 1;
        if (k == PairKind::kIncorrect) delta.incorrect = 1;
        out.counts += delta;
        if (gold[i].cls) out.per_class[class_index(*gold[i].cls)] += delta;
        out.pairs.push_back({i, j});
        gold_used[i] = pred_used[j] = true;
        ++i, ++j;
        break;
      }
      case 1: ++i; break;
      default: ++j; break;
    }
  }
  for (std::size_t g = 0; g < a; ++g) {
    if (gold_used[g]) continue;
    ++out.counts.missed;
    if (gold[g].cls) ++out.per_class[class_index(*gold[g].cls)].missed;
  }
  for (std::size_t p = 0; p < b; ++p) {
    if (pred_used[p]) continue;
    ++out.counts.spurious;
    if (pred[p].cls) ++out.per_class[class_index(*pred[p].cls)].spurious;
  }
  return out;
}

EvalCounts match_document(const AnnotationSet& gold, const AnnotationSet& pred, LabelMode mode) {
  return match_spans(gold, pred, mode).counts;
}

namespace {

std::unordered_map<std::string, const AnnotationSet*> index_by_doc(
    std::span<const AnnotationSet> sets, const char* what) {
  std::unordered_map<std::string, const AnnotationSet*> out;
  for (const auto& s : sets) {
    if (!out.emplace(s.doc_id, &s).second) {
      throw Error(ErrorCode::kSchemaError,
                  std::string("duplicate ") + what + " annotation set for '" + s.doc_id + "'");
    }
  }
  return out;
}

}  // namespace

std::array<ClassRecall, kNumClasses> per_class_recall(std::span<const AnnotationSet> gold,
                                                      std::span<const AnnotationSet> pred) {
  const auto preds = index_by_doc(pred, "predicted");
  std::array<EvalCounts, kNumClasses> counts{};
  for (const auto& g : gold) {
    AnnotationSet empty{g.doc_id, "", {}};
    auto it = preds.find(g.doc_id);
    const AnnotationSet& p = it == preds.end() ? empty : *it->second;
    for (auto cls : kAllClasses) {
      AnnotationSet restricted{g.doc_id, g.annotator, {}};
      for (const auto& s : g.spans) {
        if (s.cls == cls) restricted.spans.push_back(s);
      }
      if (restricted.spans.empty()) continue;
      counts[class_index(cls)] += match_document(restricted, p, LabelMode::kClassAgnostic);
    }
  }
  std::array<ClassRecall, kNumClasses> out{};
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const auto& c = counts[k];
    out[k].support = c.gold_total();
    out[k].zero_support = out[k].support == 0;
    out[k].recall = out[k].zero_support ? 0.0 : score(c).recall;
  }
  return out;
}

EvalReport evaluate_corpus(std::span<const AnnotationSet> gold, std::span<const AnnotationSet> pred,
                           LabelMode mode) {
  index_by_doc(gold, "gold");
  const auto preds = index_by_doc(pred, "predicted");
  EvalReport r;
  r.mode = mode;
  for (const auto& g : gold) {
    AnnotationSet empty{g.doc_id, "", {}};
    auto it = preds.find(g.doc_id);
    const DocumentMatch m = match_spans(g, it == preds.end() ? empty : *it->second, mode);
    r.counts += m.counts;
    for (std::size_t k = 0; k < kNumClasses; ++k) r.per_class_counts[k] += m.per_class[k];
    ++r.documents;
  }
  r.scores = score(r.counts);
  r.no_gold_spans = r.counts.gold_total() == 0;
  r.per_class_recall = per_class_recall(gold, pred);
  return r;
}

}  // namespace halluspan
