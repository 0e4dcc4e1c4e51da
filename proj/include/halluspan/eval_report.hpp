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

#ifndef HALLUSPAN_EVAL_REPORT_HPP_
#define HALLUSPAN_EVAL_REPORT_HPP_

#include <span>
#include <string>

#include "halluspan/annotation.hpp"
#include "halluspan/span_eval.hpp"
#include "json.hpp"

namespace halluspan {

// A scored detector on one dataset, i.e. one cell group of the detection
// table.
struct DetectionResult {
  std::string model;
  std::string dataset;
  EvalReport report;
};

nlohmann::ordered_json to_json(const EvalCounts& counts);
nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const DetectionResult& result);

// Prec./Rec./F1 (in percent) per dataset, rows grouped into class-agnostic
// and class-aware sections.
std::string render_detection_table(std::span<const DetectionResult> results);

// Recall per hallucination label (in percent), one section per dataset.
std::string render_recall_table(std::span<const DetectionResult> results);

// Number of annotated hallucinations per type with a total column.
struct CountRow {
  std::string name;
  ClassCounts counts;
};
std::string render_count_table(std::span<const CountRow> rows);

// Mean (SD) of hallucinations per summary.
struct SummaryCountRow {
  std::string name;
  SummaryCounts counts;
};
std::string render_summary_count_table(std::span<const SummaryCountRow> rows);

}  // namespace halluspan

#endif  // HALLUSPAN_EVAL_REPORT_HPP_
