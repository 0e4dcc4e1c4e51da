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

#include <random>

#include "doctest.h"
#include "halluspan/alignment.hpp"
#include "halluspan/error.hpp"
#include "halluspan/tagged_text.hpp"
#include "halluspan/utf8.hpp"
#include "oracles/levenshtein.hpp"
#include "unit/generators.hpp"

using namespace halluspan;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("parse_tagged strips markup and records spans") {
  const auto p = parse_tagged(
      R"(You had <error class="unsupported_condition">pneumonia</error> and took <error>aspirin</error>.)",
      LabelMode::kClassAware);
  CHECK(p.plain == "You had pneumonia and took aspirin.");
  REQUIRE(p.spans.size() == 2);
  CHECK(p.spans[0] == SpanAnnotation{8, 17, HallucinationClass::kUnsupportedCondition});
  CHECK(p.spans[1] == SpanAnnotation{27, 34, HallucinationClass::kUnsupportedOther});
  CHECK(p.warnings.size() == 1);
  CHECK(p.segments.size() == 5);
}

TEST_CASE("class-agnostic parsing drops class attributes") {
  const auto p = parse_tagged(R"(a <error class="bogus">b</error> c)", LabelMode::kClassAgnostic);
  REQUIRE(p.spans.size() == 1);
  CHECK_FALSE(p.spans[0].cls.has_value());
  CHECK(p.warnings.empty());
}

TEST_CASE("unknown class maps to unsupported_other with a warning") {
  const auto p = parse_tagged(R"(<error class="made_up">x</error>)", LabelMode::kClassAware);
  REQUIRE(p.spans.size() == 1);
  CHECK(p.spans[0].cls == HallucinationClass::kUnsupportedOther);
  REQUIRE(p.warnings.size() == 1);
  CHECK(p.warnings[0].find("made_up") != std::string::npos);
}

TEST_CASE("malformed markup is rejected") {
  CHECK(code_of([] { parse_tagged("a <error>b", LabelMode::kClassAgnostic); }) == ErrorCode::kMalformedTag);
  CHECK(code_of([] { parse_tagged("a </error>", LabelMode::kClassAgnostic); }) == ErrorCode::kMalformedTag);
  CHECK(code_of([] { parse_tagged("<error>a <error>b</error></error>", LabelMode::kClassAgnostic); }) ==
        ErrorCode::kMalformedTag);
  CHECK(code_of([] { parse_tagged(R"(<error id="1">a</error>)", LabelMode::kClassAgnostic); }) ==
        ErrorCode::kMalformedTag);
  try {
    parse_tagged("x <error>y", LabelMode::kClassAgnostic);
  } catch (const Error& e) {
    CHECK(e.detail() == "x <error>y");
  }
}

TEST_CASE("whitespace-only tags are dropped, other angle brackets are text") {
  const auto p = parse_tagged("a <error> </error>b <errors> <b>", LabelMode::kClassAgnostic);
  CHECK(p.spans.empty());
  CHECK(p.plain == "a  b <errors> <b>");
  CHECK(p.warnings.size() == 1);
}

TEST_CASE("offsets are in characters for multibyte text") {
  const auto p = parse_tagged("Température <error>élevée</error>.", LabelMode::kClassAgnostic);
  REQUIRE(p.spans.size() == 1);
  CHECK(p.spans[0].start == 12);
  CHECK(p.spans[0].end == 18);
  CHECK(utf8::slice(p.plain, 12, 18) == "élevée");
}

TEST_CASE("render then parse is the identity on valid sets") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 500; ++round) {
    const std::string text = gen::random_text(rng, 80);
    const bool classed = round % 2 == 0;
    const auto spans = gen::random_spans(rng, text, 8, classed);
    const std::string tagged = render_tagged(text, spans);
    const auto p = parse_tagged(tagged, classed ? LabelMode::kClassAware : LabelMode::kClassAgnostic);
    CHECK(p.plain == text);
    CHECK(p.spans == spans);
    CHECK(p.markup_length == utf8::length(tagged) - utf8::length(text));
  }
}

TEST_CASE("identity alignment maps every offset to itself") {
  const std::string text = "Your doctors stopped your metformin.";
  const auto map = align(text, text);
  CHECK(map.confidence == 1.0);
  CHECK(map.edit_cost == 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    CHECK(map.start_at[i] == i);
    CHECK(map.end_at[i + 1] == i + 1);
  }
}

TEST_CASE("typo corrected by the labeler still projects onto the original word") {
  const std::string original = "Please take your medictaions as prescribed.";
  const auto p = parse_tagged("Please take your <error>medications</error> as prescribed.",
                              LabelMode::kClassAgnostic);
  const auto map = align(p.plain, original);
  CHECK(map.edit_cost == 2);
  const auto proj = project_spans(p.spans, map);
  REQUIRE(proj.spans.size() == 1);
  CHECK(utf8::slice(original, proj.spans[0].start, proj.spans[0].end) == "medictaions");
}

TEST_CASE("spans over invented text are dropped") {
  const std::string original = "You were admitted for chest pain.";
  const auto p = parse_tagged("You were admitted <error>yesterday</error> for chest pain.",
                              LabelMode::kClassAgnostic);
  const auto map = align(p.plain, original);
  const auto proj = project_spans(p.spans, map);
  CHECK(proj.spans.empty());
  REQUIRE(proj.dropped.size() == 1);
  CHECK(proj.dropped[0].reason == "span projects to zero width");
}

TEST_CASE("low confidence alignment raises") {
  CHECK(code_of([] { align("completely different words", "xyzxyzxyzxyzxyzxyzxyz"); }) ==
        ErrorCode::kLowConfidence);
  AlignOptions lax;
  lax.min_confidence = 0.0;
  CHECK_NOTHROW(align("completely different words", "xyzxyzxyzxyzxyzxyzxyz", lax));
}

TEST_CASE("edit cost equals the Levenshtein distance") {
  std::mt19937_64 rng(9);
  AlignOptions lax;
  lax.min_confidence = 0.0;
  for (int round = 0; round < 300; ++round) {
    const std::string a = gen::random_text(rng, 30);
    const std::string b = gen::random_text(rng, 30);
    const auto map = align(a, b, lax);
    CHECK(map.edit_cost == oracle::levenshtein(utf8::decode(a), utf8::decode(b)));
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(map.start_at[i] <= map.start_at[i + 1]);
      CHECK(map.end_at[i] <= map.end_at[i + 1]);
      CHECK(map.end_at[i + 1] <= b.size());
    }
  }
}

TEST_CASE("projected spans of light edits stay within bounds and ordered") {
  std::mt19937_64 rng(13);
  AlignOptions lax;
  lax.min_confidence = 0.0;
  std::uniform_int_distribution<int> pick(0, 25);
  for (int round = 0; round < 200; ++round) {
    const std::string original = gen::random_text(rng, 60);
    std::string variant = original;
    for (int k = 0; k < 3; ++k) {
      variant[static_cast<std::size_t>(pick(rng)) % variant.size()] = static_cast<char>('a' + pick(rng));
    }
    const auto spans = gen::random_spans(rng, variant, 5, false);
    const auto proj = project_spans(spans, align(variant, original, lax));
    CHECK(proj.spans.size() + proj.dropped.size() == spans.size());
    for (std::size_t i = 0; i < proj.spans.size(); ++i) {
      CHECK(proj.spans[i].start < proj.spans[i].end);
      CHECK(proj.spans[i].end <= original.size());
      if (i > 0) CHECK(proj.spans[i - 1].end <= proj.spans[i].start);
    }
  }
}

TEST_CASE("sentence mode pairs sentences on long inputs") {
  std::string original, variant;
  for (int i = 0; i < 40; ++i) {
    original += "Sentence number " + std::to_string(i) + " talks about medicine.\n";
    variant += "Sentence number " + std::to_string(i) + (i == 17 ? " talks about medicines.\n" : " talks about medicine.\n");
  }
  AlignOptions small;
  small.sentence_mode_threshold = 100;
  const auto map = align(variant, original, small);
  CHECK(map.sentence_mode);
  CHECK(map.edit_cost == 1);
  const auto full = align(variant, original);
  CHECK_FALSE(full.sentence_mode);
  CHECK(full.start_at == map.start_at);
}
