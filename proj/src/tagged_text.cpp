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

#include "halluspan/tagged_text.hpp"

#include <algorithm>

#include "halluspan/error.hpp"
#include "halluspan/utf8.hpp"

namespace halluspan {

namespace {

constexpr std::u32string_view kOpenPrefix = U"<error";
constexpr std::u32string_view kClassAttr = U" class=\"";
constexpr std::u32string_view kClose = U"</error>";

bool starts_with(std::u32string_view s, std::size_t at, std::u32string_view prefix) {
  return s.substr(at, prefix.size()) == prefix;
}

[[noreturn]] void malformed(std::string_view raw, const std::string& what, std::size_t at) {
  throw Error(ErrorCode::kMalformedTag,
              "malformed error tag at character " + std::to_string(at) + ": " + what,
              std::string(raw));
}

}  // namespace

std::string_view mode_name(LabelMode mode) {
  return mode == LabelMode::kClassAware ? "class_aware" : "class_agnostic";
}

std::optional<LabelMode> parse_mode(std::string_view name) {
  if (name == "class_aware") return LabelMode::kClassAware;
  if (name == "class_agnostic") return LabelMode::kClassAgnostic;
  return std::nullopt;
}

ParsedTagged parse_tagged(std::string_view text, LabelMode mode) {
  const std::u32string in = utf8::decode(text);
  ParsedTagged out;
  std::u32string plain;
  plain.reserve(in.size());

  bool open = false;
  std::size_t open_at = 0;       // offset in plain
  std::size_t open_source = 0;   // offset in input, for messages
  std::optional<HallucinationClass> open_cls;
  std::size_t segment_start = 0;

  auto flush_segment = [&](bool tagged, std::optional<HallucinationClass> cls) {
    if (plain.size() > segment_start || tagged) {
      out.segments.push_back({utf8::encode(plain.substr(segment_start)), tagged, cls});
    }
    segment_start = plain.size();
  };

  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == U'<' && starts_with(in, i, kOpenPrefix) && i + kOpenPrefix.size() < in.size() &&
        (in[i + kOpenPrefix.size()] == U'>' || in[i + kOpenPrefix.size()] == U' ')) {
      std::size_t j = i + kOpenPrefix.size();
      std::optional<std::u32string> class_name;
      if (in[j] == U' ') {
        if (!starts_with(in, j, kClassAttr)) malformed(text, "unsupported attribute", i);
        j += kClassAttr.size();
        const std::size_t name_end = in.find(U'"', j);
        if (name_end == std::u32string::npos) malformed(text, "unterminated class attribute", i);
        class_name = in.substr(j, name_end - j);
        j = name_end + 1;
        if (j >= in.size() || in[j] != U'>') malformed(text, "expected '>' after class attribute", i);
      }
      if (open) malformed(text, "nested error tag", i);
      flush_segment(false, std::nullopt);
      ++j;  // past '>'
      out.markup_length += j - i;
      open = true;
      open_at = plain.size();
      open_source = i;
      open_cls.reset();
      if (mode == LabelMode::kClassAware) {
        if (!class_name) {
          out.warnings.push_back("error tag at character " + std::to_string(i) +
                                 " has no class; using unsupported_other");
          open_cls = HallucinationClass::kUnsupportedOther;
        } else if (auto c = try_parse_label(utf8::encode(*class_name))) {
          open_cls = c;
        } else {
          out.warnings.push_back("error tag at character " + std::to_string(i) +
                                 " has unknown class '" + utf8::encode(*class_name) +
                                 "'; using unsupported_other");
          open_cls = HallucinationClass::kUnsupportedOther;
        }
      }
      i = j;
      continue;
    }
    if (in[i] == U'<' && starts_with(in, i, kClose)) {
      if (!open) malformed(text, "closing tag without opening tag", i);
      open = false;
      out.markup_length += kClose.size();
      const std::size_t end = plain.size();
      if (utf8::trim(std::u32string_view(plain).substr(open_at, end - open_at)).empty()) {
        out.warnings.push_back("error tag at character " + std::to_string(open_source) +
                               " encloses no text; dropped");
        // Keep the enclosed whitespace as untagged text.
      } else {
        flush_segment(true, open_cls);
        out.spans.push_back({open_at, end, open_cls});
      }
      i += kClose.size();
      continue;
    }
    plain.push_back(in[i]);
    ++i;
  }
  if (open) malformed(text, "unclosed error tag", open_source);
  flush_segment(false, std::nullopt);
  out.plain = utf8::encode(plain);
  return out;
}

std::string render_tagged(std::string_view plain, std::span<const SpanAnnotation> spans) {
  const std::u32string text = utf8::decode(plain);
  std::vector<SpanAnnotation> ordered(spans.begin(), spans.end());
  std::stable_sort(ordered.begin(), ordered.end(), span_less);
  std::string out;
  out.reserve(plain.size() + spans.size() * 48);
  std::size_t pos = 0;
  for (const auto& s : ordered) {
    const std::size_t start = std::min(std::max(s.start, pos), text.size());
    const std::size_t end = std::min(std::max(s.end, start), text.size());
    out += utf8::encode(std::u32string_view(text).substr(pos, start - pos));
    if (s.cls) {
      out += "<error class=\"";
      out += canonical_name(*s.cls);
      out += "\">";
    } else {
      out += "<error>";
    }
    out += utf8::encode(std::u32string_view(text).substr(start, end - start));
    out += "</error>";
    pos = end;
  }
  out += utf8::encode(std::u32string_view(text).substr(pos));
  return out;
}

}  // namespace halluspan
