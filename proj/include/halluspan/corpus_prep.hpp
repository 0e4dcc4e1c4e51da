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

#ifndef HALLUSPAN_CORPUS_PREP_HPP_
#define HALLUSPAN_CORPUS_PREP_HPP_

#include <filesystem>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halluspan/annotation.hpp"
#include "json.hpp"

namespace halluspan {

enum class ContextMode { kShort, kFull };

std::string_view context_mode_name(ContextMode mode);
std::optional<ContextMode> parse_context_mode(std::string_view name);

struct Sections {
  std::string bhc;
  std::string di;
  std::vector<std::string> warnings;
};

// Section headers are recognized at the start of a line, ignoring case and
// leading blanks, with an optional colon. The discharge instructions run up to
// the next known header. Short mode takes the brief hospital course section as
// context, full mode everything before the discharge instructions. Throws
// SectionMissing without a discharge instructions header.
Sections split_sections(std::string_view note, ContextMode mode);

enum class RuleKind {
  kPrefixStrip,
  kHeadingStrip,
  kPatternReplace,
  kSuffixPrune,
  kTemplateReject,
  kLengthFilter,
  kSectionRequire,
};

std::string_view rule_kind_name(RuleKind kind);
std::optional<RuleKind> parse_rule_kind(std::string_view name);

enum class RuleTarget { kSummary, kContext };

struct Rule {
  std::string id;
  int stage = 2;
  RuleKind kind = RuleKind::kPatternReplace;
  std::string pattern;
  bool regex = false;
  bool icase = true;
  std::optional<std::string> replacement;
  std::optional<long long> param;
  RuleTarget target = RuleTarget::kSummary;
};

// Stage 1 is the section split; configured rules start at stage 2.
inline constexpr int kSplitStage = 1;

// Rules sorted by stage (stable), with their patterns compiled.
class RuleSet {
 public:
  RuleSet() = default;
  // Throws ConfigError for invalid rules.
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  std::vector<int> stages() const;
  const std::regex* compiled(std::size_t i) const;

  // {"rules": [{id, stage, kind, pattern, regex?, icase?, replacement?,
  // param?, target?}]}
  static RuleSet from_json(const nlohmann::json& config);
  static RuleSet load(const std::filesystem::path& path);

 private:
  std::vector<Rule> rules_;
  std::vector<std::optional<std::regex>> compiled_;
};

struct RuleEdit {
  int stage;
  std::string rule_id;
};

struct Outcome {
  bool kept = true;
  std::string context;
  std::string summary;
  std::optional<int> rejected_stage;
  std::string rejected_rule;
  std::vector<RuleEdit> edits;
  std::vector<int> transformed_stages;  // ascending, unique
};

// Applies the rules stage by stage. A length filter also applies again after
// every later stage that changed the text it targets.
Outcome apply_rules(std::string context, std::string summary, const RuleSet& rules);
Outcome apply_rules(std::string summary, const RuleSet& rules);

struct RawNote {
  std::string note_id;
  std::string text;
};

// {note_id, text}
std::vector<RawNote> load_notes(const std::filesystem::path& path);

struct StageStat {
  int stage = 0;
  std::string name;
  std::size_t entered = 0;
  std::size_t rejected = 0;
  std::size_t transformed = 0;
};

struct PipelineResult {
  std::vector<DocumentPair> dataset;
  std::vector<StageStat> stats;
  std::size_t kept() const { return dataset.size(); }
};

PipelineResult run_pipeline(std::span<const RawNote> notes, const RuleSet& rules, ContextMode mode,
                            std::size_t jobs = 1);

nlohmann::ordered_json to_json(std::span<const StageStat> stats, std::size_t kept);
std::string render_stage_table(std::span<const StageStat> stats, std::size_t kept);

inline constexpr std::size_t kSubsetMaxContext = 4000;
inline constexpr std::size_t kSubsetMinSummary = 600;

// Keeps documents with at most 4000 context and at least 600 summary
// characters.
std::vector<DocumentPair> filter_anno_subset(std::span<const DocumentPair> dataset);

}  // namespace halluspan

#endif  // HALLUSPAN_CORPUS_PREP_HPP_
