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

#include "halluspan/entity_detector.hpp"

#include <algorithm>
#include <tuple>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/span_eval.hpp"

namespace halluspan {

void DetectorConfig::check() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "tau must lie in [0, 1]", std::to_string(tau));
  }
}

DocumentMentions recognize_document(const DocumentPair& doc, const Lexicon& lexicon) {
  return {doc.id, recognize(doc.context, lexicon), recognize(doc.summary, lexicon)};
}

EntityDetection detect_mentions(const DocumentMentions& mentions, const EmbeddingStore* embeddings,
                                const DetectorConfig& cfg) {
  cfg.check();
  EntityDetection out;
  out.spans.doc_id = mentions.doc_id;
  out.spans.annotator = cfg.annotator;

  std::set<std::string> context_ids;
  for (const auto& m : mentions.context) context_ids.insert(m.concept_id);

  const bool embed = cfg.use_embeddings && embeddings != nullptr && !embeddings->empty();
  std::vector<const std::vector<double>*> context_vecs;
  if (embed) {
    for (const auto& id : context_ids) {
      if (const auto* v = embeddings->find(id)) {
        context_vecs.push_back(v);
      } else {
        out.missing_embeddings.insert(id);
      }
    }
  }

  for (const auto& m : mentions.summary) {
    if (context_ids.count(m.concept_id) > 0) continue;
    bool equivalent = false;
    if (embed) {
      if (const auto* v = embeddings->find(m.concept_id)) {
        equivalent = std::any_of(context_vecs.begin(), context_vecs.end(), [&](const auto* c) {
          return cosine_similarity(*v, *c) >= cfg.tau;
        });
      } else {
        out.missing_embeddings.insert(m.concept_id);
      }
    }
    if (!equivalent) out.spans.spans.push_back({m.start, m.end, std::nullopt});
  }
  out.spans = sorted(std::move(out.spans));
  return out;
}

EntityDetection detect(const DocumentPair& doc, const Lexicon& lexicon,
                       const EmbeddingStore* embeddings, const DetectorConfig& cfg) {
  return detect_mentions(recognize_document(doc, lexicon), embeddings, cfg);
}

std::map<std::string, DocumentMentions> read_mentions(std::istream& in,
                                                      const std::set<std::string>& type_filter) {
  std::map<std::string, DocumentMentions> docs;
  for_each_jsonl(in, [&](const nlohmann::json& rec, std::size_t line) {
    const std::string doc_id = require_string(rec, "doc_id", line);
    const std::string side = require_string(rec, "side", line);
    const long long start = require_int(rec, "start", line);
    const long long end = require_int(rec, "end", line);
    Mention m;
    m.concept_id = require_string(rec, "concept_id", line);
    m.semantic_type = rec.contains("semantic_type") ? require_string(rec, "semantic_type", line) : "";
    if (start < 0 || end <= start) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": mention needs 0 <= start < end");
    }
    m.start = static_cast<std::size_t>(start);
    m.end = static_cast<std::size_t>(end);
    auto& doc = docs[doc_id];
    doc.doc_id = doc_id;
    if (!type_filter.empty() && type_filter.count(m.semantic_type) == 0) return;
    if (side == "context") {
      doc.context.push_back(std::move(m));
    } else if (side == "summary") {
      doc.summary.push_back(std::move(m));
    } else {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": side must be 'context' or 'summary'");
    }
  });
  for (auto& [id, doc] : docs) {
    for (auto* side : {&doc.context, &doc.summary}) {
      std::sort(side->begin(), side->end(),
                [](const Mention& a, const Mention& b) { return std::tie(a.start, a.end) < std::tie(b.start, b.end); });
      for (std::size_t i = 1; i < side->size(); ++i) {
        if ((*side)[i].start < (*side)[i - 1].end) {
          throw Error(ErrorCode::kSchemaError, "overlapping mentions in document '" + id + "'");
        }
      }
    }
  }
  return docs;
}

std::map<std::string, DocumentMentions> load_mentions(const std::filesystem::path& path,
                                                      const std::set<std::string>& type_filter) {
  auto in = open_input(path);
  return read_mentions(in, type_filter);
}

TauTuning tune_tau(std::span<const AnnotationSet> dev_gold, std::span<const DocumentMentions> dev_docs,
                   const EmbeddingStore& embeddings, std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::kEmptyGrid, "tau grid is empty");
  TauTuning out;
  out.grid.assign(grid.begin(), grid.end());
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());

  std::vector<AnnotationSet> gold;
  for (const auto& g : dev_gold) gold.push_back(without_classes(g));

  double best = -1.0;
  for (double tau : out.grid) {
    DetectorConfig cfg;
    cfg.tau = tau;
    cfg.use_embeddings = true;
    std::vector<AnnotationSet> pred;
    for (const auto& doc : dev_docs) pred.push_back(detect_mentions(doc, &embeddings, cfg).spans);
    const double f1 = evaluate_corpus(gold, pred, LabelMode::kClassAgnostic).scores.f1;
    out.f1.push_back(f1);
    if (f1 > best) {
      best = f1;
      out.tau = tau;
    }
  }
  out.all_zero = best <= 0.0;
  return out;
}

}  // namespace halluspan
