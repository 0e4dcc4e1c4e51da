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

#include "halluspan/metric_report.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/parallel.hpp"
#include "halluspan/table.hpp"

namespace halluspan {

MetricReport score_summary(const MetricInput& in) {
  MetricReport r;
  const auto cand = metric_tokens(in.candidate);
  const auto ref = metric_tokens(in.reference);
  for (std::size_t n = 1; n <= 4; ++n) r.rouge_n[n - 1] = rouge_n(cand, ref, n);
  r.rouge_l = rouge_l(cand, ref);
  const std::string refs[] = {in.reference};
  r.sari = sari_components(in.source, in.candidate, refs);
  r.words = static_cast<double>(corpus_stats(in.candidate).words);
  return r;
}

namespace {

void add_prf(Prf& acc, const Prf& x, double w) {
  acc.precision += x.precision * w;
  acc.recall += x.recall * w;
  acc.f1 += x.f1 * w;
}

}  // namespace

MetricReport score_corpus(std::span<const MetricInput> inputs,
                          const std::map<std::string, std::map<std::string, double>>& external,
                          std::size_t jobs) {
  const auto per_doc =
      parallel_map(inputs.size(), jobs, [&](std::size_t i) { return score_summary(inputs[i]); });
  MetricReport out;
  if (!inputs.empty()) {
    const double w = 1.0 / static_cast<double>(inputs.size());
    for (const auto& r : per_doc) {
      for (std::size_t n = 0; n < 4; ++n) add_prf(out.rouge_n[n], r.rouge_n[n], w);
      add_prf(out.rouge_l, r.rouge_l, w);
      out.sari.keep += r.sari.keep * w;
      out.sari.del += r.sari.del * w;
      out.sari.add += r.sari.add * w;
      out.sari.score += r.sari.score * w;
      out.words += r.words * w;
    }
  }
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& in : inputs) {
    auto it = external.find(in.doc_id);
    if (it == external.end()) continue;
    for (const auto& [name, value] : it->second) {
      sums[name].first += value;
      ++sums[name].second;
    }
  }
  for (const auto& [name, s] : sums) out.external[name] = s.first / static_cast<double>(s.second);
  return out;
}

std::map<std::string, std::map<std::string, double>> load_external_scores(
    const std::filesystem::path& path) {
  std::map<std::string, std::map<std::string, double>> out;
  for_each_jsonl(path, [&](const nlohmann::json& rec, std::size_t line) {
    const std::string doc = require_string(rec, "doc_id", line);
    const std::string name = require_string(rec, "name", line);
    if (!rec.contains("value") || !rec["value"].is_number()) {
      throw Error(ErrorCode::kSchemaError, "record " + std::to_string(line) + ": 'value' must be a number");
    }
    if (!out[doc].emplace(name, rec["value"].get<double>()).second) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(line) + ": duplicate score '" + name + "' for '" + doc + "'");
    }
  });
  return out;
}

namespace {

nlohmann::ordered_json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

}  // namespace

nlohmann::ordered_json to_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  for (std::size_t n = 0; n < 4; ++n) j["rouge_" + std::to_string(n + 1)] = prf_json(report.rouge_n[n]);
  j["rouge_l"] = prf_json(report.rouge_l);
  j["sari"] = {{"score", report.sari.score},
               {"keep", report.sari.keep},
               {"delete", report.sari.del},
               {"add", report.sari.add}};
  j["words"] = report.words;
  j["external"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.external) j["external"][name] = value;
  return j;
}

std::string render_metric_table(std::span<const MetricRow> rows, const std::string& section) {
  TextTable t;
  t.add_header({"Model", "R-1", "R-2", "R-3", "R-4", "R-L", "BERT", "DeBERT", "SARI", "Words"});
  if (!section.empty()) t.add_section(section);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto ext = [&](const MetricReport& r, const char* name) {
    auto it = r.external.find(name);
    return it == r.external.end() ? nan : 100.0 * it->second;
  };
  for (const auto& row : rows) {
    const auto& r = row.report;
    t.add_row({row.model, fixed(100 * r.rouge_n[0].f1, 2), fixed(100 * r.rouge_n[1].f1, 2),
               fixed(100 * r.rouge_n[2].f1, 2), fixed(100 * r.rouge_n[3].f1, 2),
               fixed(100 * r.rouge_l.f1, 2), fixed(ext(r, "bert"), 2), fixed(ext(r, "debert"), 2),
               fixed(r.sari.score, 2), fixed(r.words, 2)});
  }
  return t.render();
}

}  // namespace halluspan
