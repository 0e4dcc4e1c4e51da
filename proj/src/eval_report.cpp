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

#include "halluspan/eval_report.hpp"

#include <algorithm>

#include "halluspan/table.hpp"

namespace halluspan {

using nlohmann::ordered_json;

ordered_json to_json(const EvalCounts& c) {
  ordered_json js;
  js["correct"] = c.correct;
  js["partial"] = c.partial;
  js["incorrect"] = c.incorrect;
  js["missed"] = c.missed;
  js["spurious"] = c.spurious;
  return js;
}

ordered_json to_json(const EvalReport& r) {
  ordered_json js;
  js["mode"] = std::string(mode_name(r.mode));
  js["documents"] = r.documents;
  js["counts"] = to_json(r.counts);
  js["precision"] = r.scores.precision;
  js["recall"] = r.scores.recall;
  js["f1"] = r.scores.f1;
  js["zero_support"] = r.scores.zero_support;
  js["no_gold_spans"] = r.no_gold_spans;
  ordered_json per_class;
  for (auto cls : kAllClasses) {
    const auto k = class_index(cls);
    ordered_json row = to_json(r.per_class_counts[k]);
    row["recall"] = r.per_class_recall[k].recall;
    row["support"] = r.per_class_recall[k].support;
    row["zero_support"] = r.per_class_recall[k].zero_support;
    per_class[std::string(canonical_name(cls))] = std::move(row);
  }
  js["per_class"] = std::move(per_class);
  return js;
}

ordered_json to_json(const DetectionResult& result) {
  ordered_json js;
  js["model"] = result.model;
  js["dataset"] = result.dataset;
  js["report"] = to_json(result.report);
  return js;
}

namespace {

std::vector<std::string> datasets_of(std::span<const DetectionResult> results) {
  std::vector<std::string> out;
  for (const auto& r : results) {
    if (std::find(out.begin(), out.end(), r.dataset) == out.end()) out.push_back(r.dataset);
  }
  return out;
}

std::string pct(double ratio) { return fixed(100.0 * ratio, 1); }

}  // namespace

std::string render_detection_table(std::span<const DetectionResult> results) {
  const auto datasets = datasets_of(results);
  TextTable t;
  std::vector<std::string> top{"Model"};
  std::vector<std::string> sub{""};
  for (const auto& d : datasets) {
    top.insert(top.end(), {d, "", ""});
    sub.insert(sub.end(), {"Prec.", "Rec.", "F1"});
  }
  t.add_header(std::move(top));
  t.add_header(std::move(sub));

  const std::pair<LabelMode, const char*> sections[] = {
      {LabelMode::kClassAgnostic, "Class-agnostic recognition"},
      {LabelMode::kClassAware, "Class-aware recognition (11 classes)"},
  };
  for (const auto& [mode, title] : sections) {
    std::vector<std::string> models;
    for (const auto& r : results) {
      if (r.report.mode == mode &&
          std::find(models.begin(), models.end(), r.model) == models.end()) {
        models.push_back(r.model);
      }
    }
    if (models.empty()) continue;
    t.add_section(title);
    for (const auto& m : models) {
      std::vector<std::string> row{m};
      for (const auto& d : datasets) {
        auto it = std::find_if(results.begin(), results.end(), [&](const DetectionResult& r) {
          return r.report.mode == mode && r.model == m && r.dataset == d;
        });
        if (it == results.end()) {
          row.insert(row.end(), {"", "", ""});
        } else {
          const Scores& s = it->report.scores;
          row.insert(row.end(), {pct(s.precision), pct(s.recall), pct(s.f1)});
        }
      }
      t.add_row(std::move(row));
    }
  }
  return t.render();
}

std::string render_recall_table(std::span<const DetectionResult> results) {
  TextTable t;
  std::vector<std::string> header{"Model"};
  for (auto cls : kAllClasses) header.emplace_back(recall_column_label(cls));
  t.add_header(std::move(header));
  for (const auto& d : datasets_of(results)) {
    t.add_section(d);
    for (const auto& r : results) {
      if (r.dataset != d) continue;
      std::vector<std::string> row{r.model};
      for (auto cls : kAllClasses) row.push_back(pct(r.report.per_class_recall[class_index(cls)].recall));
      t.add_row(std::move(row));
    }
  }
  return t.render();
}

std::string render_count_table(std::span<const CountRow> rows) {
  TextTable t;
  std::vector<std::string> header{"Dataset / Model"};
  for (auto cls : kAllClasses) header.emplace_back(count_column_label(cls));
  header.emplace_back("Total");
  t.add_header(std::move(header));
  for (const auto& r : rows) {
    std::vector<std::string> row{r.name};
    for (auto cls : kAllClasses) row.push_back(std::to_string(r.counts.per_class[class_index(cls)]));
    row.push_back(std::to_string(r.counts.total));
    t.add_row(std::move(row));
  }
  return t.render();
}

std::string render_summary_count_table(std::span<const SummaryCountRow> rows) {
  TextTable t;
  t.add_header({"Model", "Hallucinations Mean (SD)", "Summaries"});
  for (const auto& r : rows) {
    t.add_row({r.name, fixed(r.counts.mean, 2) + " (" + fixed(r.counts.sd, 2) + ")",
               std::to_string(r.counts.counts.size())});
  }
  return t.render();
}

}  // namespace halluspan
