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

#ifndef HALLUSPAN_METRIC_REPORT_HPP_
#define HALLUSPAN_METRIC_REPORT_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "halluspan/text_metrics.hpp"
#include "json.hpp"

namespace halluspan {

struct MetricReport {
  std::array<Prf, 4> rouge_n{};  // orders 1..4
  Prf rouge_l;
  SariComponents sari;
  double words = 0.0;
  std::map<std::string, double> external;
};

// One generated summary with its source context and reference summary.
struct MetricInput {
  std::string doc_id;
  std::string source;
  std::string candidate;
  std::string reference;
};

MetricReport score_summary(const MetricInput& in);

// Macro average over documents, computed on up to `jobs` threads.
// `external` maps doc_id to named scores; each name is averaged over the
// documents that carry it.
MetricReport score_corpus(std::span<const MetricInput> inputs,
                          const std::map<std::string, std::map<std::string, double>>& external = {},
                          std::size_t jobs = 1);

// {doc_id, name, value} records. Duplicate (doc_id, name) pairs are rejected.
std::map<std::string, std::map<std::string, double>> load_external_scores(
    const std::filesystem::path& path);

nlohmann::ordered_json to_json(const MetricReport& report);

struct MetricRow {
  std::string model;
  MetricReport report;
};

// Columns R-1..R-4, R-L, BERT, DeBERT, SARI, Words. Ratios are shown in
// percent with two decimals; external scores named "bert" and "debert" fill
// the BERT columns and print "-" when absent.
std::string render_metric_table(std::span<const MetricRow> rows, const std::string& section = {});

}  // namespace halluspan

#endif  // HALLUSPAN_METRIC_REPORT_HPP_
