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

#include "halluspan/alignment.hpp"

#include <algorithm>
#include <cstdint>

#include "halluspan/error.hpp"
#include "halluspan/utf8.hpp"

namespace halluspan {
namespace {

enum Move : std::uint8_t { kMatch = 0, kSubstitute = 1, kSkipOriginal = 2, kSkipVariant = 3 };

// Two bits per DP cell.
class MoveGrid {
 public:
  MoveGrid(std::size_t rows, std::size_t cols)
      : cols_(cols), bits_((rows * cols + 3) / 4, 0) {}
  void set(std::size_t r, std::size_t c, Move m) {
    const std::size_t k = r * cols_ + c;
    bits_[k / 4] = static_cast<std::uint8_t>(bits_[k / 4] | (m << ((k % 4) * 2)));
  }
  Move get(std::size_t r, std::size_t c) const {
    const std::size_t k = r * cols_ + c;
    return static_cast<Move>((bits_[k / 4] >> ((k % 4) * 2)) & 3);
  }

 private:
  std::size_t cols_;
  std::vector<std::uint8_t> bits_;
};

struct Score {
  std::uint32_t cost = 0;
  std::uint32_t matches = 0;
};

bool better(Score a, Score b) {
  return a.cost < b.cost || (a.cost == b.cost && a.matches > b.matches);
}

struct Segment {
  std::size_t v_begin, v_end, o_begin, o_end;
};

// Aligns one block and writes its part of the boundary maps. The DP runs over
// suffixes so that the forward trace can take the preferred move greedily,
// which places matches as early as possible.
void align_block(std::u32string_view v, std::u32string_view o, const Segment& seg,
                 OffsetMap& map) {
  const std::size_t n = seg.v_end - seg.v_begin;
  const std::size_t m = seg.o_end - seg.o_begin;
  const std::u32string_view vs = v.substr(seg.v_begin, n);
  const std::u32string_view os = o.substr(seg.o_begin, m);

  MoveGrid moves(n + 1, m + 1);
  std::vector<Score> next(m + 1), cur(m + 1);
  // Row n: only original characters remain.
  for (std::size_t j = m + 1; j-- > 0;) {
    next[j] = {static_cast<std::uint32_t>(m - j), 0};
    if (j < m) moves.set(n, j, kSkipOriginal);
  }
  for (std::size_t i = n; i-- > 0;) {
    cur[m] = {static_cast<std::uint32_t>(n - i), 0};
    moves.set(i, m, kSkipVariant);
    for (std::size_t j = m; j-- > 0;) {
      Score best;
      Move pick;
      if (vs[i] == os[j]) {
        best = {next[j + 1].cost, next[j + 1].matches + 1};
        pick = kMatch;
      } else {
        best = {next[j + 1].cost + 1, next[j + 1].matches};
        pick = kSubstitute;
      }
      const Score skip_o{cur[j + 1].cost + 1, cur[j + 1].matches};
      if (better(skip_o, best)) best = skip_o, pick = kSkipOriginal;
      const Score skip_v{next[j].cost + 1, next[j].matches};
      if (better(skip_v, best)) best = skip_v, pick = kSkipVariant;
      cur[j] = best;
      moves.set(i, j, pick);
    }
    std::swap(cur, next);
  }
  map.edit_cost += next[0].cost;
  map.matched += next[0].matches;

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    const Move mv = moves.get(i, j);
    switch (mv) {
      case kMatch:
      case kSubstitute:
        map.start_at[seg.v_begin + i] = seg.o_begin + j;
        ++i, ++j;
        map.end_at[seg.v_begin + i] = seg.o_begin + j;
        break;
      case kSkipVariant:
        map.start_at[seg.v_begin + i] = seg.o_begin + j;
        ++i;
        map.end_at[seg.v_begin + i] = seg.o_begin + j;
        break;
      case kSkipOriginal:
        ++j;
        break;
    }
  }
}

// Sentence ranges covering the whole text: a break follows [.!?] plus any
// whitespace, or a newline.
std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges(std::u32string_view s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    ++i;
    bool cut = false;
    if (c == U'\n') {
      cut = true;
    } else if ((c == U'.' || c == U'!' || c == U'?') && (i == s.size() || utf8::is_space(s[i]))) {
      while (i < s.size() && utf8::is_space(s[i]) && s[i] != U'\n') ++i;
      cut = true;
    }
    if (cut) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  if (begin < s.size()) out.emplace_back(begin, s.size());
  return out;
}

std::vector<std::uint64_t> bigrams(std::u32string_view s) {
  std::vector<std::uint64_t> out;
  if (s.size() < 2) {
    if (!s.empty()) out.push_back(static_cast<std::uint64_t>(s[0]) << 32);
    return out;
  }
  out.reserve(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    out.push_back((static_cast<std::uint64_t>(s[i]) << 32) | s[i + 1]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double dice(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common, ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

// Pairs sentences monotonically, maximizing summed bigram similarity over
// pairs whose similarity is at least 0.5, and returns the blocks to align.
std::vector<Segment> pair_sentences(std::u32string_view v, std::u32string_view o) {
  const auto vs = sentence_ranges(v);
  const auto os = sentence_ranges(o);
  std::vector<std::vector<std::uint64_t>> vb, ob;
  for (auto [b, e] : vs) vb.push_back(bigrams(v.substr(b, e - b)));
  for (auto [b, e] : os) ob.push_back(bigrams(o.substr(b, e - b)));

  const std::size_t a = vs.size(), b = os.size();
  std::vector<double> best((a + 1) * (b + 1), 0.0);
  std::vector<std::uint8_t> step((a + 1) * (b + 1), 0);
  auto at = [b](std::size_t i, std::size_t j) { return i * (b + 1) + j; };
  for (std::size_t i = a; i-- > 0;) {
    for (std::size_t j = b; j-- > 0;) {
      double value = best[at(i + 1, j)];
      std::uint8_t s = 1;
      if (best[at(i, j + 1)] > value) value = best[at(i, j + 1)], s = 2;
      const double sim = dice(vb[i], ob[j]);
      if (sim >= 0.5 && best[at(i + 1, j + 1)] + sim >= value) {
        value = best[at(i + 1, j + 1)] + sim, s = 0;
      }
      best[at(i, j)] = value;
      step[at(i, j)] = s;
    }
  }

  std::vector<Segment> blocks;
  std::size_t i = 0, j = 0;
  std::size_t gap_v = 0, gap_o = 0;  // start of the pending unpaired region
  auto flush_gap = [&](std::size_t v_to, std::size_t o_to) {
    if (v_to > gap_v || o_to > gap_o) blocks.push_back({gap_v, v_to, gap_o, o_to});
  };
  while (i < a && j < b) {
    const std::uint8_t s = step[at(i, j)];
    if (s == 0) {
      flush_gap(vs[i].first, os[j].first);
      blocks.push_back({vs[i].first, vs[i].second, os[j].first, os[j].second});
      gap_v = vs[i].second;
      gap_o = os[j].second;
      ++i, ++j;
    } else if (s == 1) {
      ++i;
    } else {
      ++j;
    }
  }
  flush_gap(v.size(), o.size());
  return blocks;
}

// Unpaired regions larger than this are not aligned character by character.
constexpr std::size_t kMaxBlockCells = std::size_t{1} << 26;

}  // namespace

OffsetMap align_chars(std::u32string_view variant, std::u32string_view original,
                      const AlignOptions& options) {
  OffsetMap map;
  map.variant_length = variant.size();
  map.original_length = original.size();
  map.start_at.assign(variant.size() + 1, 0);
  map.end_at.assign(variant.size() + 1, 0);

  std::vector<Segment> blocks;
  if (variant.size() > options.sentence_mode_threshold ||
      original.size() > options.sentence_mode_threshold) {
    map.sentence_mode = true;
    blocks = pair_sentences(variant, original);
  } else {
    blocks.push_back({0, variant.size(), 0, original.size()});
  }
  for (const auto& seg : blocks) {
    const std::size_t cells = (seg.v_end - seg.v_begin + 1) * (seg.o_end - seg.o_begin + 1);
    if (map.sentence_mode && cells > kMaxBlockCells) {
      // Treat the whole region as rewritten.
      for (std::size_t i = seg.v_begin; i < seg.v_end; ++i) {
        map.start_at[i] = seg.o_begin;
        map.end_at[i + 1] = seg.o_begin;
      }
      map.edit_cost += (seg.v_end - seg.v_begin) + (seg.o_end - seg.o_begin);
      continue;
    }
    align_block(variant, original, seg, map);
  }
  map.start_at[variant.size()] = original.size();

  const std::size_t denom = std::max(variant.size(), original.size());
  map.confidence = denom == 0 ? 1.0 : static_cast<double>(map.matched) / static_cast<double>(denom);
  if (map.confidence < options.min_confidence) {
    throw Error(ErrorCode::kLowConfidence,
                "alignment confidence " + std::to_string(map.confidence) + " below threshold " +
                    std::to_string(options.min_confidence));
  }
  return map;
}

OffsetMap align(std::string_view variant, std::string_view original, const AlignOptions& options) {
  return align_chars(utf8::decode(variant), utf8::decode(original), options);
}

Projection project_spans(std::span<const SpanAnnotation> spans, const OffsetMap& map) {
  Projection out;
  for (const auto& s : spans) {
    if (s.end > map.variant_length || s.start >= s.end) {
      out.dropped.push_back({s, "span outside the aligned text"});
      continue;
    }
    const std::size_t start = map.start_at[s.start];
    const std::size_t end = map.end_at[s.end];
    if (end <= start) {
      out.dropped.push_back({s, "span projects to zero width"});
      continue;
    }
    out.spans.push_back({start, end, s.cls});
  }
  return out;
}

}  // namespace halluspan
