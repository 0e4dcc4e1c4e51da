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

#include "halluspan/corpus_prep.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>

#include "halluspan/error.hpp"
#include "halluspan/jsonl.hpp"
#include "halluspan/parallel.hpp"
#include "halluspan/table.hpp"
#include "halluspan/utf8.hpp"

namespace halluspan {
namespace {

constexpr std::string_view kBhcHeader = "brief hospital course";
constexpr std::string_view kDiHeader = "discharge instructions";

constexpr std::array<std::string_view, 20> kKnownHeaders = {
    "brief hospital course",
    "discharge instructions",
    "followup instructions",
    "follow-up instructions",
    "follow up instructions",
    "discharge medications",
    "discharge disposition",
    "discharge diagnosis",
    "discharge diagnoses",
    "discharge condition",
    "medications on admission",
    "pertinent results",
    "physical exam",
    "history of present illness",
    "past medical history",
    "social history",
    "family history",
    "chief complaint",
    "major surgical or invasive procedure",
    "allergies",
};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

struct HeaderHit {
  std::string_view name;
  std::size_t line_start;
  std::size_t content_start;  // just after the header (and colon)
};

// Returns the header a line opens, if any.
std::optional<HeaderHit> header_at(std::string_view note, std::size_t line_start, std::size_t line_end) {
  std::size_t p = line_start;
  while (p < line_end && (note[p] == ' ' || note[p] == '\t')) ++p;
  const std::string lowered = ascii_lower(note.substr(p, line_end - p));
  for (std::string_view h : kKnownHeaders) {
    if (lowered.rfind(h, 0) != 0) continue;
    std::size_t q = h.size();
    while (q < lowered.size() && (lowered[q] == ' ' || lowered[q] == '\t')) ++q;
    if (q < lowered.size() && lowered[q] == ':') return HeaderHit{h, line_start, p + q + 1};
    if (trim(std::string_view(lowered).substr(q)).empty()) return HeaderHit{h, line_start, line_end};
  }
  return std::nullopt;
}

std::vector<HeaderHit> find_headers(std::string_view note) {
  std::vector<HeaderHit> hits;
  std::size_t start = 0;
  while (start <= note.size()) {
    std::size_t end = note.find('\n', start);
    if (end == std::string_view::npos) end = note.size();
    if (auto h = header_at(note, start, end)) hits.push_back(*h);
    if (end == note.size()) break;
    start = end + 1;
  }
  return hits;
}

std::string section_text(std::string_view note, const std::vector<HeaderHit>& hits, std::size_t i) {
  const std::size_t end = i + 1 < hits.size() ? hits[i + 1].line_start : note.size();
  return trim(note.substr(hits[i].content_start, end - hits[i].content_start));
}

// Literal or regex search; returns [begin, end) byte offsets.
std::optional<std::pair<std::size_t, std::size_t>> search(const std::string& text, const Rule& rule,
                                                          const std::regex* re, std::size_t from = 0) {
  if (re != nullptr) {
    std::smatch m;
    auto begin = text.begin() + static_cast<std::ptrdiff_t>(from);
    if (!std::regex_search(begin, text.end(), m, *re)) return std::nullopt;
    const std::size_t b = from + static_cast<std::size_t>(m.position(0));
    return std::pair{b, b + static_cast<std::size_t>(m.length(0))};
  }
  if (rule.pattern.empty()) return std::nullopt;
  const std::size_t pos = rule.icase ? ascii_lower(text).find(ascii_lower(rule.pattern), from)
                                     : text.find(rule.pattern, from);
  if (pos == std::string::npos) return std::nullopt;
  return std::pair{pos, pos + rule.pattern.size()};
}

bool full_match(const std::string& text, const Rule& rule, const std::regex* re) {
  if (re != nullptr) return std::regex_match(text, *re);
  return rule.icase ? ascii_lower(text) == ascii_lower(rule.pattern) : text == rule.pattern;
}

// Returns true if the text changed.
bool transform(std::string& text, const Rule& rule, const std::regex* re) {
  const std::string before = text;
  switch (rule.kind) {
    case RuleKind::kPrefixStrip: {
      const std::size_t lead = text.find_first_not_of(" \t\r\n");
      if (lead == std::string::npos) break;
      const std::string body = text.substr(lead);
      auto hit = search(body, rule, re);
      if (hit && hit->first == 0 && hit->second > 0) text = trim(std::string_view(body).substr(hit->second));
      break;
    }
    case RuleKind::kHeadingStrip: {
      std::string out;
      std::size_t start = 0;
      while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        const bool last = end == std::string::npos;
        if (last) end = text.size();
        const std::string line = text.substr(start, end - start);
        if (!full_match(trim(line), rule, re)) {
          out += line;
          if (!last) out += '\n';
        }
        if (last) break;
        start = end + 1;
      }
      text = trim(out);
      break;
    }
    case RuleKind::kPatternReplace: {
      const std::string repl = rule.replacement.value_or("");
      if (re != nullptr) {
        text = std::regex_replace(text, *re, repl);
      } else {
        std::string out;
        std::size_t from = 0;
        while (auto hit = search(text, rule, nullptr, from)) {
          out.append(text, from, hit->first - from);
          out += repl;
          from = hit->second;
        }
        out.append(text, from, std::string::npos);
        text = std::move(out);
      }
      break;
    }
    case RuleKind::kSuffixPrune: {
      if (auto hit = search(text, rule, re)) text = trim(std::string_view(text).substr(0, hit->first));
      break;
    }
    default:
      break;
  }
  return text != before;
}

// Returns true if the rule rejects the record.
bool rejects(const Outcome& o, const Rule& rule, const std::regex* re) {
  const std::string& text = rule.target == RuleTarget::kSummary ? o.summary : o.context;
  switch (rule.kind) {
    case RuleKind::kTemplateReject:
      return search(text, rule, re).has_value();
    case RuleKind::kLengthFilter:
      return utf8::length(text) < static_cast<std::size_t>(rule.param.value_or(0));
    case RuleKind::kSectionRequire:
      if (rule.pattern.empty()) return trim(text).empty();
      return !search(text, rule, re).has_value();
    default:
      return false;
  }
}

bool is_transform(RuleKind k) {
  return k == RuleKind::kPrefixStrip || k == RuleKind::kHeadingStrip ||
         k == RuleKind::kPatternReplace || k == RuleKind::kSuffixPrune;
}

RuleTarget parse_target(const std::string& s, const std::string& id) {
  if (s == "summary") return RuleTarget::kSummary;
  if (s == "context") return RuleTarget::kContext;
  throw Error(ErrorCode::kConfigError, "rule '" + id + "': target must be 'summary' or 'context'");
}

}  // namespace

std::string_view context_mode_name(ContextMode mode) {
  return mode == ContextMode::kShort ? "short" : "full";
}

std::optional<ContextMode> parse_context_mode(std::string_view name) {
  if (name == "short") return ContextMode::kShort;
  if (name == "full") return ContextMode::kFull;
  return std::nullopt;
}

Sections split_sections(std::string_view note, ContextMode mode) {
  const auto hits = find_headers(note);
  auto di = std::find_if(hits.begin(), hits.end(), [](const HeaderHit& h) { return h.name == kDiHeader; });
  if (di == hits.end()) throw Error(ErrorCode::kSectionMissing, "no discharge instructions section");
  Sections out;
  out.di = section_text(note, hits, static_cast<std::size_t>(di - hits.begin()));
  if (mode == ContextMode::kFull) {
    out.bhc = trim(note.substr(0, di->line_start));
  } else {
    auto bhc = std::find_if(hits.begin(), hits.end(), [](const HeaderHit& h) { return h.name == kBhcHeader; });
    if (bhc != hits.end()) out.bhc = section_text(note, hits, static_cast<std::size_t>(bhc - hits.begin()));
  }
  if (out.bhc.empty()) out.warnings.push_back("empty brief hospital course");
  if (out.di.empty()) out.warnings.push_back("empty discharge instructions");
  return out;
}

std::string_view rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::kPrefixStrip: return "prefix_strip";
    case RuleKind::kHeadingStrip: return "heading_strip";
    case RuleKind::kPatternReplace: return "pattern_replace";
    case RuleKind::kSuffixPrune: return "suffix_prune";
    case RuleKind::kTemplateReject: return "template_reject";
    case RuleKind::kLengthFilter: return "length_filter";
    case RuleKind::kSectionRequire: return "section_require";
  }
  return "";
}

std::optional<RuleKind> parse_rule_kind(std::string_view name) {
  for (auto k : {RuleKind::kPrefixStrip, RuleKind::kHeadingStrip, RuleKind::kPatternReplace,
                 RuleKind::kSuffixPrune, RuleKind::kTemplateReject, RuleKind::kLengthFilter,
                 RuleKind::kSectionRequire}) {
    if (rule_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::stable_sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) { return a.stage < b.stage; });
  for (const auto& r : rules_) {
    if (r.id.empty()) throw Error(ErrorCode::kConfigError, "rule without id");
    if (r.stage <= kSplitStage) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("rule '{}': stage must be at least {}", r.id, kSplitStage + 1));
    }
    if (r.kind == RuleKind::kLengthFilter && (!r.param || *r.param < 0)) {
      throw Error(ErrorCode::kConfigError, "rule '" + r.id + "': length_filter needs param >= 0");
    }
    const bool needs_pattern = r.kind != RuleKind::kLengthFilter && r.kind != RuleKind::kSectionRequire;
    if (needs_pattern && r.pattern.empty()) {
      throw Error(ErrorCode::kConfigError, "rule '" + r.id + "': empty pattern");
    }
    if (r.regex && !r.pattern.empty()) {
      try {
        auto flags = std::regex::ECMAScript;
        if (r.icase) flags |= std::regex::icase;
        compiled_.emplace_back(std::regex(r.pattern, flags));
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::kConfigError, "rule '" + r.id + "': pattern does not compile", e.what());
      }
    } else {
      compiled_.emplace_back(std::nullopt);
    }
  }
}

std::vector<int> RuleSet::stages() const {
  std::vector<int> out;
  for (const auto& r : rules_) {
    if (out.empty() || out.back() != r.stage) out.push_back(r.stage);
  }
  return out;
}

const std::regex* RuleSet::compiled(std::size_t i) const {
  return compiled_[i] ? &*compiled_[i] : nullptr;
}

RuleSet RuleSet::from_json(const nlohmann::json& config) {
  if (!config.is_object() || !config.contains("rules") || !config["rules"].is_array()) {
    throw Error(ErrorCode::kConfigError, "rule config needs a 'rules' array");
  }
  std::vector<Rule> rules;
  for (const auto& j : config["rules"]) {
    try {
      Rule r;
      r.id = j.at("id").get<std::string>();
      r.stage = j.at("stage").get<int>();
      const auto kind_name = j.at("kind").get<std::string>();
      const auto kind = parse_rule_kind(kind_name);
      if (!kind) throw Error(ErrorCode::kConfigError, "rule '" + r.id + "': unknown kind '" + kind_name + "'");
      r.kind = *kind;
      r.pattern = j.value("pattern", "");
      r.regex = j.value("regex", false);
      r.icase = j.value("icase", true);
      if (j.contains("replacement") && !j["replacement"].is_null()) r.replacement = j["replacement"].get<std::string>();
      if (j.contains("param") && !j["param"].is_null()) r.param = j["param"].get<long long>();
      r.target = parse_target(j.value("target", "summary"), r.id);
      rules.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kConfigError, std::string("invalid rule entry: ") + e.what());
    }
  }
  return RuleSet(std::move(rules));
}

RuleSet RuleSet::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
}

Outcome apply_rules(std::string context, std::string summary, const RuleSet& rules) {
  Outcome o;
  o.context = std::move(context);
  o.summary = std::move(summary);
  const auto& rs = rules.rules();
  std::vector<std::size_t> armed_length_filters;
  std::size_t i = 0;
  while (i < rs.size()) {
    const int stage = rs[i].stage;
    bool changed_summary = false, changed_context = false;
    for (; i < rs.size() && rs[i].stage == stage; ++i) {
      const Rule& rule = rs[i];
      const std::regex* re = rules.compiled(i);
      if (is_transform(rule.kind)) {
        std::string& text = rule.target == RuleTarget::kSummary ? o.summary : o.context;
        if (transform(text, rule, re)) {
          o.edits.push_back({stage, rule.id});
          (rule.target == RuleTarget::kSummary ? changed_summary : changed_context) = true;
        }
        continue;
      }
      if (rejects(o, rule, re)) {
        o.kept = false;
        o.rejected_stage = stage;
        o.rejected_rule = rule.id;
        if (changed_summary || changed_context) o.transformed_stages.push_back(stage);
        return o;
      }
      if (rule.kind == RuleKind::kLengthFilter) armed_length_filters.push_back(i);
    }
    if (changed_summary || changed_context) {
      o.transformed_stages.push_back(stage);
      for (std::size_t f : armed_length_filters) {
        const Rule& lf = rs[f];
        const bool touched = lf.target == RuleTarget::kSummary ? changed_summary : changed_context;
        if (touched && lf.stage < stage && rejects(o, lf, nullptr)) {
          o.kept = false;
          o.rejected_stage = stage;
          o.rejected_rule = lf.id;
          return o;
        }
      }
    }
  }
  return o;
}

Outcome apply_rules(std::string summary, const RuleSet& rules) {
  return apply_rules(std::string(), std::move(summary), rules);
}

std::vector<RawNote> load_notes(const std::filesystem::path& path) {
  std::vector<RawNote> out;
  for_each_jsonl(path, [&](const nlohmann::json& rec, std::size_t line) {
    out.push_back({require_string(rec, "note_id", line), require_string(rec, "text", line)});
  });
  return out;
}

PipelineResult run_pipeline(std::span<const RawNote> notes, const RuleSet& rules, ContextMode mode,
                            std::size_t jobs) {
  struct PerNote {
    bool split_ok = false;
    Outcome outcome;
  };
  const auto results = parallel_map(notes.size(), jobs, [&](std::size_t i) {
    PerNote r;
    Sections sec;
    try {
      sec = split_sections(notes[i].text, mode);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSectionMissing) throw;
      return r;
    }
    r.split_ok = true;
    r.outcome = apply_rules(std::move(sec.bhc), std::move(sec.di), rules);
    return r;
  });

  PipelineResult out;
  StageStat split{kSplitStage, "split_sections", notes.size(), 0, 0};
  for (const auto& r : results) split.rejected += r.split_ok ? 0 : 1;
  out.stats.push_back(split);
  std::size_t entered = split.entered - split.rejected;
  for (int stage : rules.stages()) {
    StageStat st;
    st.stage = stage;
    for (const auto& r : rules.rules()) {
      if (r.stage == stage) st.name += (st.name.empty() ? "" : ",") + r.id;
    }
    st.entered = entered;
    for (const auto& r : results) {
      if (!r.split_ok) continue;
      const auto& ts = r.outcome.transformed_stages;
      if (std::find(ts.begin(), ts.end(), stage) != ts.end()) ++st.transformed;
      if (r.outcome.rejected_stage == stage) ++st.rejected;
    }
    entered -= st.rejected;
    out.stats.push_back(std::move(st));
  }
  for (std::size_t i = 0; i < notes.size(); ++i) {
    const auto& r = results[i];
    if (r.split_ok && r.outcome.kept) out.dataset.push_back({notes[i].note_id, r.outcome.context, r.outcome.summary});
  }
  return out;
}

nlohmann::ordered_json to_json(std::span<const StageStat> stats, std::size_t kept) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : stats) {
    arr.push_back({{"stage", s.stage}, {"name", s.name}, {"entered", s.entered},
                   {"rejected", s.rejected}, {"transformed", s.transformed}});
  }
  j["stages"] = arr;
  j["kept"] = kept;
  return j;
}

std::string render_stage_table(std::span<const StageStat> stats, std::size_t kept) {
  TextTable t;
  t.add_header({"Stage", "Rules", "Entered", "Rejected", "Transformed"});
  for (const auto& s : stats) {
    t.add_row({std::to_string(s.stage), s.name, std::to_string(s.entered), std::to_string(s.rejected),
               std::to_string(s.transformed)});
  }
  t.add_row({"Kept", "", std::to_string(kept), "", ""});
  return t.render();
}

std::vector<DocumentPair> filter_anno_subset(std::span<const DocumentPair> dataset) {
  std::vector<DocumentPair> out;
  for (const auto& d : dataset) {
    if (utf8::length(d.context) <= kSubsetMaxContext && utf8::length(d.summary) >= kSubsetMinSummary) {
      out.push_back(d);
    }
  }
  return out;
}

}  // namespace halluspan
