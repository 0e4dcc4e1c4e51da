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

#include "halluspan/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "halluspan/agreement.hpp"
#include "halluspan/alignment.hpp"
#include "halluspan/chat_client.hpp"
#include "halluspan/corpus_prep.hpp"
#include "halluspan/digest.hpp"
#include "halluspan/entity_detector.hpp"
#include "halluspan/error.hpp"
#include "halluspan/eval_report.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/llm_detection.hpp"
#include "halluspan/metric_report.hpp"
#include "halluspan/parallel.hpp"
#include "halluspan/prompts.hpp"
#include "halluspan/standoff.hpp"
#include "halluspan/tagged_text.hpp"
#include "halluspan/text_metrics.hpp"

#ifndef HALLUSPAN_VERSION
#define HALLUSPAN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace halluspan {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  // 2^64 mod bound, computed without overflow. Draws at or above
  // 2^64 - skew fall in the incomplete top block.
  const std::uint64_t skew = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (skew == 0 || x < 0 - skew) return x % bound;
  }
}

std::vector<std::size_t> sample_shots(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("cannot sample {} examples from {} records", k, n));
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_draw(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

namespace {

struct ClientOptions {
  std::string client_mode = "replay";
  std::string fixtures;
  std::string base_url = EndpointConfig{}.base_url;
  std::string path = EndpointConfig{}.path;
  std::string model = EndpointConfig{}.model;
  std::string api_key_env = EndpointConfig{}.api_key_env;
  std::string auth_style = EndpointConfig{}.auth_style;
  int max_tokens = 600;
  double temperature = 0.0;
  int max_retries = EndpointConfig{}.max_retries;
  std::string templates;
};

struct Options {
  std::size_t jobs = 4;
  std::string manifest;

  // shared paths
  std::string in;
  std::string out;
  std::string corpus;

  // prep
  std::string rules;
  std::string context_mode = "short";
  std::string stats;

  // detect-entity
  std::string lexicon;
  std::string embeddings;
  std::string mentions;
  std::vector<std::string> types;
  double tau = 0.85;
  bool use_embeddings = false;
  std::vector<double> tune_grid;
  std::string dev_gold;
  std::string dev_corpus;
  std::string dev_mentions;

  // detect-llm / summarize
  std::string mode = "class_aware";
  std::string eval_mode = "both";
  bool cot = false;
  std::size_t shots = 0;
  std::string exemplars;
  std::optional<std::uint64_t> seed;
  std::string annotator;
  ClientOptions client;

  // eval / agree / metrics
  std::string gold;
  std::vector<std::string> preds;
  std::string dataset = "dataset";
  std::string a;
  std::string b;
  std::string ratings;
  std::string name = "annotation";
  std::string pred;
  std::string external;
  std::string model = "model";

  // align
  std::string response;
  std::string summary;
  double min_confidence = 0.5;

  // validate
  std::string annotations;
  std::vector<std::string> layers;
  std::string aux;

  // counts
  std::string by = "class";
};

struct RunContext {
  std::vector<std::string> args;
  std::string subcommand;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::optional<std::uint64_t> seed;
  ordered_json extra = ordered_json::object();
};

fs::path input_path(RunContext& ctx, const std::string& p) {
  std::error_code ec;
  if (p.empty() || !fs::exists(p, ec)) throw Error(ErrorCode::kIoError, "input not found: " + p);
  ctx.inputs.emplace_back(p);
  return p;
}

fs::path output_path(RunContext& ctx, const std::string& p) {
  if (p.empty()) throw Error(ErrorCode::kConfigError, "missing output path");
  ctx.outputs.emplace_back(p);
  return p;
}

LabelMode mode_or_throw(const std::string& name) {
  auto m = parse_mode(name);
  if (!m) throw Error(ErrorCode::kConfigError, "unknown mode '" + name + "'");
  return *m;
}

std::string digest_of(const fs::path& p) {
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    // Digest of the sorted (name, digest) list of regular files.
    std::vector<std::string> entries;
    for (const auto& e : fs::recursive_directory_iterator(p)) {
      if (e.is_regular_file()) {
        entries.push_back(fs::relative(e.path(), p).generic_string() + ":" + sha256_file_hex(e.path()));
      }
    }
    std::sort(entries.begin(), entries.end());
    std::string joined;
    for (const auto& s : entries) joined += s + "\n";
    return sha256_hex(joined);
  }
  return sha256_file_hex(p);
}

void write_manifest(const RunContext& ctx, const std::string& resolved, const fs::path& where) {
  ordered_json m;
  m["tool"] = "halluspan";
  m["version"] = HALLUSPAN_VERSION;
  m["subcommand"] = ctx.subcommand;
  m["argv"] = ctx.args;
  m["resolved_config"] = resolved;
  ordered_json inputs = ordered_json::array();
  for (const auto& p : ctx.inputs) inputs.push_back({{"path", p.generic_string()}, {"sha256", digest_of(p)}});
  m["inputs"] = inputs;
  ordered_json outputs = ordered_json::array();
  for (const auto& p : ctx.outputs) outputs.push_back(p.generic_string());
  m["outputs"] = outputs;
  m["seed"] = ctx.seed ? ordered_json(*ctx.seed) : ordered_json(nullptr);
  m["details"] = ctx.extra;
  write_file(where, m.dump(2) + "\n");
}

std::map<std::string, const DocumentPair*> index_corpus(const std::vector<DocumentPair>& docs) {
  std::map<std::string, const DocumentPair*> idx;
  for (const auto& d : docs) idx[d.id] = &d;
  return idx;
}

void check_sets(const std::vector<AnnotationSet>& sets, const std::vector<DocumentPair>& docs,
                const std::string& what) {
  const auto idx = index_corpus(docs);
  for (const auto& s : sets) {
    auto it = idx.find(s.doc_id);
    if (it == idx.end()) {
      throw Error(ErrorCode::kDocMismatch, what + ": unknown document '" + s.doc_id + "'");
    }
    const auto v = validate(s, *it->second);
    if (!v.empty()) {
      throw Error(ErrorCode::kSchemaError,
                  fmt::format("{}: document '{}': {}", what, s.doc_id, v.front().message));
    }
  }
}

std::vector<std::pair<std::string, std::string>> write_jsonl_records(const fs::path& path,
                                                                    const std::vector<ordered_json>& recs) {
  std::string text;
  for (const auto& r : recs) text += r.dump(-1, ' ', false, json::error_handler_t::replace) + "\n";
  write_file(path, text);
  return {};
}

// ---------------------------------------------------------------- prep

int run_prep(const Options& o, RunContext& ctx, std::ostream& out) {
  const auto notes = load_notes(input_path(ctx, o.in));
  const RuleSet rules = o.rules.empty() ? RuleSet{} : RuleSet::load(input_path(ctx, o.rules));
  const auto mode = parse_context_mode(o.context_mode);
  if (!mode) throw Error(ErrorCode::kConfigError, "context mode must be 'short' or 'full'");
  const auto result = run_pipeline(notes, rules, *mode, o.jobs);
  save_corpus(output_path(ctx, o.out), result.dataset);
  const fs::path stats = o.stats.empty() ? fs::path(o.out + ".stats.json") : fs::path(o.stats);
  write_file(output_path(ctx, stats.string()), to_json(result.stats, result.kept()).dump(2) + "\n");
  out << render_stage_table(result.stats, result.kept());
  return 0;
}

int run_subset(const Options& o, RunContext& ctx, std::ostream& out) {
  const auto docs = load_corpus(input_path(ctx, o.in));
  const auto kept = filter_anno_subset(docs);
  save_corpus(output_path(ctx, o.out), kept);
  out << fmt::format("kept {} of {} documents\n", kept.size(), docs.size());
  return 0;
}

// ---------------------------------------------------------------- entity

std::vector<DocumentMentions> mentions_for(const std::vector<DocumentPair>& docs, const Lexicon* lexicon,
                                           const std::map<std::string, DocumentMentions>* given,
                                           std::size_t jobs) {
  return parallel_map(docs.size(), jobs, [&](std::size_t i) {
    if (given != nullptr) {
      auto it = given->find(docs[i].id);
      return it == given->end() ? DocumentMentions{docs[i].id, {}, {}} : it->second;
    }
    return recognize_document(docs[i], *lexicon);
  });
}

int run_detect_entity(const Options& o, RunContext& ctx, std::ostream& out, std::ostream& err) {
  DetectorConfig cfg;
  cfg.tau = o.tau;
  cfg.use_embeddings = o.use_embeddings;
  if (!o.annotator.empty()) cfg.annotator = o.annotator;
  cfg.check();
  const std::set<std::string> types(o.types.begin(), o.types.end());
  if (o.lexicon.empty() && o.mentions.empty()) {
    throw Error(ErrorCode::kConfigError, "either --lexicon or --mentions is required");
  }
  std::optional<Lexicon> lexicon;
  if (!o.lexicon.empty()) {
    lexicon = Lexicon::load(input_path(ctx, o.lexicon));
    lexicon->set_type_filter(types);
  }
  EmbeddingStore embeddings;
  if (!o.embeddings.empty()) embeddings = EmbeddingStore::load(input_path(ctx, o.embeddings));
  if (cfg.use_embeddings && embeddings.empty()) {
    throw Error(ErrorCode::kConfigError, "--use-embeddings needs a non-empty --embeddings file");
  }

  const auto docs = load_corpus(input_path(ctx, o.corpus));
  std::optional<std::map<std::string, DocumentMentions>> given;
  if (!o.mentions.empty()) given = load_mentions(input_path(ctx, o.mentions), types);

  if (!o.tune_grid.empty()) {
    if (o.dev_gold.empty() || o.dev_corpus.empty()) {
      throw Error(ErrorCode::kConfigError, "tuning needs --dev-gold and --dev-corpus");
    }
    const auto dev_docs = load_corpus(input_path(ctx, o.dev_corpus));
    const auto dev_gold = load_standoff(input_path(ctx, o.dev_gold));
    std::optional<std::map<std::string, DocumentMentions>> dev_given;
    if (!o.dev_mentions.empty()) dev_given = load_mentions(input_path(ctx, o.dev_mentions), types);
    if (!dev_given && !lexicon) throw Error(ErrorCode::kConfigError, "tuning needs --lexicon or --dev-mentions");
    const auto dev_mentions = mentions_for(dev_docs, lexicon ? &*lexicon : nullptr,
                                           dev_given ? &*dev_given : nullptr, o.jobs);
    const TauTuning tuned = tune_tau(dev_gold, dev_mentions, embeddings, o.tune_grid);
    cfg.tau = tuned.tau;
    cfg.use_embeddings = true;
    ordered_json t;
    t["grid"] = tuned.grid;
    t["f1"] = tuned.f1;
    t["tau"] = tuned.tau;
    t["all_zero"] = tuned.all_zero;
    ctx.extra["tuning"] = t;
    if (tuned.all_zero) err << "warning: every grid value scored F1 0; using the smallest\n";
    out << fmt::format("tuned tau = {}\n", tuned.tau);
  }

  const auto mentions = mentions_for(docs, lexicon ? &*lexicon : nullptr, given ? &*given : nullptr, o.jobs);
  const auto results = parallel_map(docs.size(), o.jobs, [&](std::size_t i) {
    return detect_mentions(mentions[i], &embeddings, cfg);
  });
  std::vector<AnnotationSet> sets;
  std::vector<ordered_json> diags;
  for (const auto& r : results) {
    sets.push_back(r.spans);
    diags.push_back({{"doc_id", r.spans.doc_id}, {"missing_embeddings", r.missing_embeddings}});
  }
  check_sets(sets, docs, "detected spans");
  save_standoff(output_path(ctx, o.out), sets);
  write_jsonl_records(output_path(ctx, o.out + ".diagnostics.jsonl"), diags);
  ctx.extra["tau"] = cfg.tau;
  ctx.extra["use_embeddings"] = cfg.use_embeddings;
  std::size_t flagged = 0;
  for (const auto& s : sets) flagged += s.spans.size();
  out << fmt::format("flagged {} spans in {} documents\n", flagged, sets.size());
  return 0;
}

// ---------------------------------------------------------------- LLM

ChatClient make_client(const ClientOptions& c) {
  EndpointConfig cfg;
  cfg.base_url = c.base_url;
  cfg.path = c.path;
  cfg.model = c.model;
  cfg.api_key_env = c.api_key_env;
  cfg.auth_style = c.auth_style;
  cfg.max_tokens = c.max_tokens;
  cfg.temperature = c.temperature;
  cfg.max_retries = c.max_retries;
  const auto mode = parse_client_mode(c.client_mode);
  if (!mode) throw Error(ErrorCode::kConfigError, "client mode must be live, replay or record");
  return ChatClient(cfg, *mode, c.fixtures);
}

PromptTemplates templates_for(const ClientOptions& c, RunContext& ctx) {
  if (c.templates.empty()) return PromptTemplates::embedded();
  std::error_code ec;
  if (!fs::is_directory(c.templates, ec)) {
    throw Error(ErrorCode::kTemplateMissing, "template directory not found: " + c.templates);
  }
  ctx.inputs.emplace_back(c.templates);
  return PromptTemplates::load(c.templates);
}

std::vector<std::size_t> pick_shots(const Options& o, std::size_t available, RunContext& ctx) {
  if (o.shots == 0) return {};
  if (!o.seed) throw Error(ErrorCode::kConfigError, "--seed is required when sampling examples");
  ctx.seed = o.seed;
  return sample_shots(available, o.shots, *o.seed);
}

bool infrastructure_failure(ErrorCode c) {
  return c == ErrorCode::kFixtureMiss || c == ErrorCode::kTransport || c == ErrorCode::kRateLimited;
}

int run_detect_llm(const Options& o, RunContext& ctx, std::ostream& out, std::ostream& err) {
  LlmDetectorSettings settings;
  settings.prompt.mode = mode_or_throw(o.mode);
  settings.prompt.cot = o.cot;
  settings.align.min_confidence = o.min_confidence;
  settings.annotator = o.annotator.empty() ? o.client.model : o.annotator;
  if (o.shots > 0) {
    if (o.exemplars.empty()) throw Error(ErrorCode::kConfigError, "--shots needs --exemplars");
    const auto pool = load_detection_exemplars(input_path(ctx, o.exemplars));
    const auto picked = pick_shots(o, pool.size(), ctx);
    ordered_json ids = ordered_json::array();
    for (auto i : picked) {
      settings.prompt.shots.push_back(pool[i]);
      ids.push_back(pool[i].doc.id);
    }
    ctx.extra["shots"] = ids;
  }
  const auto templates = templates_for(o.client, ctx);
  const auto docs = load_corpus(input_path(ctx, o.corpus));
  if (!o.client.fixtures.empty() && o.client.client_mode == "replay") input_path(ctx, o.client.fixtures);
  ChatClient client = make_client(o.client);
  const auto results = detect_batch(docs, settings, templates, client, o.jobs);

  std::vector<AnnotationSet> sets;
  std::vector<ordered_json> diags;
  int code = 0;
  for (const auto& r : results) {
    sets.push_back(r.spans);
    ordered_json d;
    d["doc_id"] = r.spans.doc_id;
    const auto diag = to_json(r.diagnostics);
    for (const auto& [k, v] : diag.items()) d[k] = v;
    diags.push_back(std::move(d));
    if (r.diagnostics.error) {
      err << fmt::format("error[{}]: document '{}': {}\n", error_code_name(*r.diagnostics.error),
                         r.spans.doc_id, r.diagnostics.message);
      if (infrastructure_failure(*r.diagnostics.error)) code = 2;
    }
  }
  save_standoff(output_path(ctx, o.out), sets);
  write_jsonl_records(output_path(ctx, o.out + ".diagnostics.jsonl"), diags);
  ctx.extra["network_calls"] = client.network_calls();
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.diagnostics.ok ? 0 : 1;
  out << fmt::format("annotated {} documents, {} failed\n", results.size(), failed);
  return code;
}

int run_summarize(const Options& o, RunContext& ctx, std::ostream& out, std::ostream& err) {
  if (o.shots > kMaxSummaryShots) {
    throw Error(ErrorCode::kConfigError, fmt::format("at most {} examples", kMaxSummaryShots));
  }
  std::vector<SummaryExemplar> shots;
  if (o.shots > 0) {
    if (o.exemplars.empty()) throw Error(ErrorCode::kConfigError, "--shots needs --exemplars");
    const auto pool = load_corpus(input_path(ctx, o.exemplars));
    ordered_json ids = ordered_json::array();
    for (auto i : pick_shots(o, pool.size(), ctx)) {
      shots.push_back({pool[i].context, pool[i].summary});
      ids.push_back(pool[i].id);
    }
    ctx.extra["shots"] = ids;
  }
  const auto templates = templates_for(o.client, ctx);
  const auto docs = load_corpus(input_path(ctx, o.corpus));
  ChatClient client = make_client(o.client);
  struct Result {
    std::string text;
    std::optional<ErrorCode> error;
    std::string message;
  };
  const auto results = parallel_map(docs.size(), o.jobs, [&](std::size_t i) {
    Result r;
    try {
      r.text = client.complete(build_summarization_prompt(shots, docs[i], templates)).text;
    } catch (const Error& e) {
      if (!infrastructure_failure(e.code())) throw;
      r.error = e.code();
      r.message = e.what();
    }
    return r;
  });
  std::vector<ordered_json> recs;
  int code = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ordered_json rec;
    rec["id"] = docs[i].id;
    if (results[i].error) {
      rec["summary"] = nullptr;
      rec["error"] = error_code_name(*results[i].error);
      err << fmt::format("error[{}]: document '{}': {}\n", error_code_name(*results[i].error), docs[i].id,
                         results[i].message);
      code = 2;
    } else {
      rec["summary"] = results[i].text;
    }
    recs.push_back(std::move(rec));
  }
  write_jsonl_records(output_path(ctx, o.out), recs);
  out << fmt::format("summarized {} documents\n", docs.size());
  return code;
}

// ---------------------------------------------------------------- eval

// "name=path", or a bare path named after its file stem.
std::pair<std::string, std::string> split_named(const std::string& spec) {
  if (const auto eq = spec.find('='); eq != std::string::npos) return {spec.substr(0, eq), spec.substr(eq + 1)};
  return {fs::path(spec).stem().string(), spec};
}

int run_eval(const Options& o, RunContext& ctx, std::ostream& out) {
  const auto gold = load_standoff(input_path(ctx, o.gold));
  std::optional<std::vector<DocumentPair>> docs;
  if (!o.corpus.empty()) {
    docs = load_corpus(input_path(ctx, o.corpus));
    check_sets(gold, *docs, "gold");
  }
  std::vector<LabelMode> modes;
  if (o.eval_mode == "both") {
    modes = {LabelMode::kClassAgnostic, LabelMode::kClassAware};
  } else {
    modes = {mode_or_throw(o.eval_mode)};
  }
  std::vector<DetectionResult> results;
  for (const auto& spec : o.preds) {
    const auto [name, path] = split_named(spec);
    const auto pred = load_standoff(input_path(ctx, path));
    if (docs) check_sets(pred, *docs, "predictions '" + name + "'");
    for (auto m : modes) results.push_back({name, o.dataset, evaluate_corpus(gold, pred, m)});
  }
  ordered_json report;
  report["dataset"] = o.dataset;
  ordered_json arr = ordered_json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  report["results"] = arr;
  if (!o.out.empty()) write_file(output_path(ctx, o.out), report.dump(2) + "\n");
  // Per-class recall does not depend on the mode; one row per model.
  std::vector<DetectionResult> recall_rows;
  for (const auto& r : results) {
    if (r.report.mode == modes.front()) recall_rows.push_back(r);
  }
  out << render_detection_table(results) << "\n" << render_recall_table(recall_rows);
  return 0;
}

// ---------------------------------------------------------------- agree

int run_agree(const Options& o, RunContext& ctx, std::ostream& out) {
  AgreementReport report;
  report.name = o.name;
  if (!o.a.empty() || !o.b.empty()) {
    const auto a = load_standoff(input_path(ctx, o.a));
    const auto b = load_standoff(input_path(ctx, o.b));
    std::vector<std::string> ids;
    for (const auto& s : a) ids.push_back(s.doc_id);
    std::sort(ids.begin(), ids.end());
    const std::vector<std::vector<AnnotationSet>> annotators = {a, b};
    report.count_alpha = count_agreement(annotators, ids);
    report.overlap_f1_agnostic = span_overlap_f1(a, b, LabelMode::kClassAgnostic);
    report.overlap_f1_aware = span_overlap_f1(a, b, LabelMode::kClassAware);
  }
  if (!o.ratings.empty()) report.likert = likert_alpha(load_ratings(input_path(ctx, o.ratings)));
  if (!report.count_alpha && !report.likert) {
    throw Error(ErrorCode::kConfigError, "give --a and --b, or --ratings");
  }
  if (!o.out.empty()) write_file(output_path(ctx, o.out), to_json(report).dump(2) + "\n");
  if (report.count_alpha) {
    const AgreementReport rows[] = {report};
    out << render_span_agreement_table(rows);
  }
  if (report.likert) {
    if (report.count_alpha) out << "\n";
    out << render_likert_table(*report.likert);
  }
  return 0;
}

// ---------------------------------------------------------------- metrics

int run_metrics(const Options& o, RunContext& ctx, std::ostream& out) {
  const auto docs = load_corpus(input_path(ctx, o.corpus));
  const auto idx = index_corpus(docs);
  std::vector<MetricInput> inputs;
  for_each_jsonl(input_path(ctx, o.pred), [&](const json& rec, std::size_t line) {
    const std::string id = require_string(rec, "id", line);
    auto it = idx.find(id);
    if (it == idx.end()) throw Error(ErrorCode::kDocMismatch, "unknown document '" + id + "'");
    if (!rec.contains("summary") || !rec["summary"].is_string()) {
      throw Error(ErrorCode::kSchemaError, fmt::format("record {}: 'summary' must be a string", line));
    }
    inputs.push_back({id, it->second->context, rec["summary"].get<std::string>(), it->second->summary});
  });
  std::map<std::string, std::map<std::string, double>> external;
  if (!o.external.empty()) external = load_external_scores(input_path(ctx, o.external));
  const MetricReport report = score_corpus(inputs, external, o.jobs);
  CorpusStats cand;
  for (const auto& in : inputs) cand += corpus_stats(in.candidate);
  ordered_json j;
  j["model"] = o.model;
  j["documents"] = inputs.size();
  j["metrics"] = to_json(report);
  j["candidate_stats"] = {{"words", cand.words}, {"sentences", cand.sentences},
                          {"characters", cand.characters}, {"deidentified", cand.deid_count}};
  if (!o.out.empty()) write_file(output_path(ctx, o.out), j.dump(2) + "\n");
  const MetricRow rows[] = {{o.model, report}};
  out << render_metric_table(rows, o.dataset == "dataset" ? std::string() : o.dataset);
  return 0;
}

// ---------------------------------------------------------------- align

int run_align(const Options& o, RunContext& ctx, std::ostream& out) {
  const std::string response = read_file(input_path(ctx, o.response));
  const std::string summary = read_file(input_path(ctx, o.summary));
  const DocumentPair doc{"input", "", summary};
  AlignOptions opts;
  opts.min_confidence = o.min_confidence;
  const auto r = interpret_response(doc, response, mode_or_throw(o.mode), "align", opts);
  ordered_json j;
  j["spans"] = to_json(r.spans)["spans"];
  j["diagnostics"] = to_json(r.diagnostics);
  const std::string text = j.dump(2) + "\n";
  if (!o.out.empty()) {
    write_file(output_path(ctx, o.out), text);
  } else {
    out << text;
  }
  if (r.diagnostics.error) {
    throw Error(*r.diagnostics.error, r.diagnostics.message);
  }
  return 0;
}

// ---------------------------------------------------------------- validate

int run_validate(const Options& o, RunContext& ctx, std::ostream& out) {
  const auto docs = load_corpus(input_path(ctx, o.corpus));
  const auto idx = index_corpus(docs);
  std::size_t problems = 0;
  auto report = [&](const std::string& doc, const std::string& annotator, const Violation& v) {
    ++problems;
    out << fmt::format("{}\t{}\t{}\t{}\t{}\n", doc, annotator,
                       v.span_index ? std::to_string(*v.span_index) : std::string("-"),
                       violation_rule_name(v.rule), v.message);
  };
  if (!o.annotations.empty()) {
    for (const auto& s : load_standoff(input_path(ctx, o.annotations))) {
      auto it = idx.find(s.doc_id);
      if (it == idx.end()) {
        report(s.doc_id, s.annotator, {std::nullopt, ViolationRule::kDocMismatch, "unknown document"});
        continue;
      }
      for (const auto& v : validate(s, *it->second)) report(s.doc_id, s.annotator, v);
    }
  }
  if (!o.aux.empty()) {
    for (const auto& s : load_aux_labels(input_path(ctx, o.aux))) {
      auto it = idx.find(s.doc_id);
      if (it == idx.end()) {
        report(s.doc_id, s.annotator, {std::nullopt, ViolationRule::kDocMismatch, "unknown document"});
        continue;
      }
      for (const auto& v : validate(s, *it->second)) report(s.doc_id, s.annotator, v);
    }
  }
  if (problems > 0) {
    throw Error(ErrorCode::kSchemaError, fmt::format("{} violations found", problems));
  }
  return 0;
}

// ---------------------------------------------------------------- counts

// One row per annotation layer, e.g. each annotator and the agreed set.
int run_counts(const Options& o, RunContext& ctx, std::ostream& out) {
  if (o.by != "class" && o.by != "summary") {
    throw Error(ErrorCode::kConfigError, "--by must be 'class' or 'summary'");
  }
  std::vector<CountRow> by_class;
  std::vector<SummaryCountRow> by_summary;
  for (const auto& spec : o.layers) {
    auto [name, path] = split_named(spec);
    if (o.layers.size() == 1 && spec.find('=') == std::string::npos) name = o.name;
    const auto sets = load_standoff(input_path(ctx, path));
    if (o.by == "class") by_class.push_back({name, count_by_class(sets)});
    else by_summary.push_back({name, count_by_summary(sets)});
  }
  out << (o.by == "class" ? render_count_table(by_class) : render_summary_count_table(by_summary));
  return 0;
}

void add_client_options(CLI::App* sub, ClientOptions& c) {
  sub->add_option("--client", c.client_mode, "live, replay or record")->capture_default_str();
  sub->add_option("--fixtures", c.fixtures, "fixture directory for replay and record modes");
  sub->add_option("--base-url", c.base_url, "endpoint base URL")->capture_default_str();
  sub->add_option("--endpoint-path", c.path, "chat completions path")->capture_default_str();
  sub->add_option("--model", c.model, "model or deployment name")->capture_default_str();
  sub->add_option("--api-key-env", c.api_key_env, "environment variable holding the credential")
      ->capture_default_str();
  sub->add_option("--auth-style", c.auth_style, "bearer or api-key")->capture_default_str();
  sub->add_option("--max-tokens", c.max_tokens)->capture_default_str();
  sub->add_option("--temperature", c.temperature)->capture_default_str();
  sub->add_option("--max-retries", c.max_retries)->capture_default_str();
  sub->add_option("--templates", c.templates, "directory overriding the built-in prompt templates");
}

int run_app(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run_rerun(const std::string& manifest, std::ostream& out, std::ostream& err) {
  json m;
  try {
    m = json::parse(read_file(manifest));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, "manifest " + manifest + ": " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) {
    throw Error(ErrorCode::kSchemaError, "manifest " + manifest + " has no argv");
  }
  const auto args = m["argv"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "rerun") {
    throw Error(ErrorCode::kConfigError, "manifest records a rerun");
  }
  return run_app(args, out, err);
}

int run_app(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Span-level hallucination annotation, detection and evaluation toolkit", "halluspan"};
  app.set_version_flag("--version", HALLUSPAN_VERSION);
  app.set_config("--config", "", "TOML or INI file supplying option values");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::string rerun_manifest;
  app.add_option("--jobs,-j", o.jobs, "worker threads")->capture_default_str();
  app.add_option("--manifest", o.manifest, "manifest path (default: <out>.manifest.json)");

  auto* prep = app.add_subcommand("prep", "split notes and apply cleaning rules");
  prep->add_option("--in", o.in, "notes {note_id, text}")->required();
  prep->add_option("--rules", o.rules, "rule config (JSON)");
  prep->add_option("--out", o.out, "dataset {id, context, summary}")->required();
  prep->add_option("--context-mode", o.context_mode, "short or full")->capture_default_str();
  prep->add_option("--stats", o.stats, "stage statistics (default: <out>.stats.json)");

  auto* subset = app.add_subcommand("subset", "keep documents sized for annotation");
  subset->add_option("--in", o.in)->required();
  subset->add_option("--out", o.out)->required();

  auto* dent = app.add_subcommand("detect-entity", "entity-based hallucination baseline");
  dent->add_option("--corpus", o.corpus)->required();
  dent->add_option("--out", o.out, "standoff output")->required();
  dent->add_option("--lexicon", o.lexicon, "surface<TAB>concept<TAB>type");
  dent->add_option("--embeddings", o.embeddings, "concept vectors");
  dent->add_option("--mentions", o.mentions, "precomputed mentions instead of the lexicon");
  dent->add_option("--types", o.types, "allowed semantic types")->delimiter(',');
  dent->add_option("--tau", o.tau, "equivalence threshold")->capture_default_str();
  dent->add_flag("--use-embeddings", o.use_embeddings);
  dent->add_option("--tune-grid", o.tune_grid, "tau values to try")->delimiter(',');
  dent->add_option("--dev-gold", o.dev_gold);
  dent->add_option("--dev-corpus", o.dev_corpus);
  dent->add_option("--dev-mentions", o.dev_mentions);
  dent->add_option("--annotator", o.annotator);

  auto* dllm = app.add_subcommand("detect-llm", "LLM span annotation via inline tags");
  dllm->add_option("--corpus", o.corpus)->required();
  dllm->add_option("--out", o.out, "standoff output")->required();
  dllm->add_option("--mode", o.mode, "class_aware or class_agnostic")->capture_default_str();
  dllm->add_flag("--cot", o.cot, "include the error list in examples");
  dllm->add_option("--shots", o.shots)->capture_default_str();
  dllm->add_option("--exemplars", o.exemplars, "labeled examples to sample from");
  dllm->add_option("--seed", o.seed, "seed for example sampling");
  dllm->add_option("--annotator", o.annotator, "annotator name (default: model)");
  dllm->add_option("--min-confidence", o.min_confidence, "alignment confidence floor")->capture_default_str();
  add_client_options(dllm, o.client);

  auto* summ = app.add_subcommand("summarize", "generate summaries with an LLM");
  summ->add_option("--corpus", o.corpus)->required();
  summ->add_option("--out", o.out, "{id, summary}")->required();
  summ->add_option("--shots", o.shots)->capture_default_str();
  summ->add_option("--exemplars", o.exemplars, "corpus to sample examples from");
  summ->add_option("--seed", o.seed);
  add_client_options(summ, o.client);

  auto* eval = app.add_subcommand("eval", "score predicted spans against gold spans");
  eval->add_option("--gold", o.gold)->required();
  eval->add_option("--pred", o.preds, "[name=]path, repeatable")->required();
  eval->add_option("--mode", o.eval_mode, "class_aware, class_agnostic or both")->capture_default_str();
  eval->add_option("--corpus", o.corpus, "validate spans against this corpus");
  eval->add_option("--dataset", o.dataset)->capture_default_str();
  eval->add_option("--out", o.out, "JSON report");

  auto* agree = app.add_subcommand("agree", "inter-annotator agreement");
  agree->add_option("--a", o.a);
  agree->add_option("--b", o.b);
  agree->add_option("--ratings", o.ratings, "Likert ratings");
  agree->add_option("--name", o.name)->capture_default_str();
  agree->add_option("--out", o.out, "JSON report");

  auto* metrics = app.add_subcommand("metrics", "ROUGE, SARI and word counts");
  metrics->add_option("--corpus", o.corpus, "sources and references")->required();
  metrics->add_option("--pred", o.pred, "{id, summary}")->required();
  metrics->add_option("--external", o.external, "{doc_id, name, value}");
  metrics->add_option("--model", o.model)->capture_default_str();
  metrics->add_option("--dataset", o.dataset, "section title");
  metrics->add_option("--out", o.out, "JSON report");

  auto* align_cmd = app.add_subcommand("align", "project tagged spans onto the original summary");
  align_cmd->add_option("--response", o.response, "tagged text")->required();
  align_cmd->add_option("--summary", o.summary, "original summary text")->required();
  align_cmd->add_option("--mode", o.mode)->capture_default_str();
  align_cmd->add_option("--min-confidence", o.min_confidence)->capture_default_str();
  align_cmd->add_option("--out", o.out);

  auto* val = app.add_subcommand("validate", "check annotations against a corpus");
  val->add_option("--corpus", o.corpus)->required();
  val->add_option("--annotations", o.annotations);
  val->add_option("--aux", o.aux, "key fact and jargon labels");

  auto* counts = app.add_subcommand("counts", "hallucination counts per type or per summary");
  counts->add_option("--annotations", o.layers, "[name=]path, repeatable")->required();
  counts->add_option("--name", o.name)->capture_default_str();
  counts->add_option("--by", o.by, "class or summary")->capture_default_str();

  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest");
  rerun->add_option("manifest", rerun_manifest)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (rerun->parsed()) return run_rerun(rerun_manifest, out, err);

  RunContext ctx;
  ctx.args.assign(args.begin(), args.end());
  ctx.subcommand = app.get_subcommands().front()->get_name();
  int code = 0;
  if (prep->parsed()) code = run_prep(o, ctx, out);
  else if (subset->parsed()) code = run_subset(o, ctx, out);
  else if (dent->parsed()) code = run_detect_entity(o, ctx, out, err);
  else if (dllm->parsed()) code = run_detect_llm(o, ctx, out, err);
  else if (summ->parsed()) code = run_summarize(o, ctx, out, err);
  else if (eval->parsed()) code = run_eval(o, ctx, out);
  else if (agree->parsed()) code = run_agree(o, ctx, out);
  else if (metrics->parsed()) code = run_metrics(o, ctx, out);
  else if (align_cmd->parsed()) code = run_align(o, ctx, out);
  else if (val->parsed()) code = run_validate(o, ctx, out);
  else if (counts->parsed()) code = run_counts(o, ctx, out);

  fs::path manifest;
  if (!o.manifest.empty()) {
    manifest = o.manifest;
  } else if (!o.out.empty()) {
    manifest = o.out + ".manifest.json";
  }
  if (!manifest.empty()) write_manifest(ctx, app.config_to_str(true, false), manifest);
  return code;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  try {
    return run_app(args, out, err);
  } catch (const Error& e) {
    err << fmt::format("error[{}]: {}\n", error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << fmt::format("error[IoError]: {}\n", e.what());
    return 2;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace halluspan
