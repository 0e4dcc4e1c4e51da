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

#include "halluspan/text_metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "halluspan/utf8.hpp"

namespace halluspan {
namespace {

bool is_punct(char32_t c) { return !utf8::is_space(c) && !utf8::is_alnum(c); }

using Gram = std::vector<std::string>;
using GramCounts = std::map<Gram, std::size_t>;

GramCounts ngram_counts(std::span<const std::string> toks, std::size_t n) {
  GramCounts out;
  if (n == 0 || toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++out[Gram(toks.begin() + static_cast<std::ptrdiff_t>(i),
               toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

Prf make_prf(double hits, double cand_total, double ref_total) {
  Prf r;
  r.precision = cand_total > 0 ? hits / cand_total : 0.0;
  r.recall = ref_total > 0 ? hits / ref_total : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

double f1_of(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

std::size_t get(const GramCounts& c, const Gram& g) {
  auto it = c.find(g);
  return it == c.end() ? 0 : it->second;
}

struct SariN {
  double keep, del, add;
};

SariN sari_ngram(const GramCounts& s, const GramCounts& c, const GramCounts& r, std::size_t numref) {
  // Source and candidate counts are scaled by the number of references so
  // that they are comparable with the pooled reference counts.
  double keep_p_sum = 0.0;
  std::size_t keep_n = 0;
  double keep_good_total = 0.0;
  double keep_all_total = 0.0;
  double del_p_sum = 0.0;
  std::size_t del_n = 0;
  for (const auto& [g, sc] : s) {
    const std::size_t s_rep = sc * numref;
    const std::size_t c_rep = get(c, g) * numref;
    const std::size_t rc = get(r, g);
    const std::size_t keep = std::min(s_rep, c_rep);
    const std::size_t all = std::min(s_rep, rc);
    keep_all_total += static_cast<double>(all);
    if (keep > 0) {
      const std::size_t good = std::min(keep, rc);
      keep_p_sum += static_cast<double>(good) / static_cast<double>(keep);
      keep_good_total += static_cast<double>(good);
      ++keep_n;
    }
    if (s_rep > c_rep) {
      const std::size_t dl = s_rep - c_rep;
      const std::size_t good = dl > rc ? dl - rc : 0;
      del_p_sum += static_cast<double>(good) / static_cast<double>(dl);
      ++del_n;
    }
  }
  const double keep_p = keep_n > 0 ? keep_p_sum / static_cast<double>(keep_n) : 0.0;
  const double keep_r = keep_all_total > 0 ? keep_good_total / keep_all_total : 0.0;
  const double del_p = del_n > 0 ? del_p_sum / static_cast<double>(del_n) : 0.0;

  std::size_t add_n = 0, add_good = 0, add_all = 0;
  for (const auto& [g, cc] : c) {
    if (s.count(g) > 0) continue;
    ++add_n;
    if (r.count(g) > 0) ++add_good;
  }
  for (const auto& [g, rc] : r) {
    if (s.count(g) == 0) ++add_all;
  }
  const double add_p = add_n > 0 ? static_cast<double>(add_good) / static_cast<double>(add_n) : 0.0;
  const double add_r = add_all > 0 ? static_cast<double>(add_good) / static_cast<double>(add_all) : 0.0;
  return {f1_of(keep_p, keep_r), del_p, f1_of(add_p, add_r)};
}

const std::set<std::u32string>& abbreviations() {
  static const std::set<std::u32string> kAbbrev = {U"dr", U"mr", U"mrs", U"ms", U"st",
                                                   U"vs", U"e.g", U"i.e", U"etc"};
  return kAbbrev;
}

}  // namespace

std::vector<std::string> metric_tokens(std::string_view text) {
  std::vector<std::string> out;
  const std::u32string t = utf8::decode(text);
  std::size_t i = 0;
  while (i < t.size()) {
    while (i < t.size() && utf8::is_space(t[i])) ++i;
    std::size_t j = i;
    while (j < t.size() && !utf8::is_space(t[j])) ++j;
    std::size_t a = i, b = j;
    while (a < b && is_punct(t[a])) ++a;
    while (b > a && is_punct(t[b - 1])) --b;
    if (a < b) {
      std::u32string tok;
      for (std::size_t k = a; k < b; ++k) tok.push_back(utf8::to_lower(t[k]));
      out.push_back(utf8::encode(tok));
    }
    i = j;
  }
  return out;
}

Prf rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
            std::size_t n) {
  const GramCounts c = ngram_counts(candidate, n);
  const GramCounts r = ngram_counts(reference, n);
  std::size_t hits = 0, ct = 0, rt = 0;
  for (const auto& [g, k] : c) {
    ct += k;
    hits += std::min(k, get(r, g));
  }
  for (const auto& [g, k] : r) rt += k;
  return make_prf(static_cast<double>(hits), static_cast<double>(ct), static_cast<double>(rt));
}

Prf rouge_n(std::string_view candidate, std::string_view reference, std::size_t n) {
  return rouge_n(metric_tokens(candidate), metric_tokens(reference), n);
}

Prf rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  const std::size_t m = candidate.size(), n = reference.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return make_prf(static_cast<double>(prev[n]), static_cast<double>(m), static_cast<double>(n));
}

Prf rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_l(metric_tokens(candidate), metric_tokens(reference));
}

SariComponents sari_components(std::string_view source, std::string_view candidate,
                               std::span<const std::string> references) {
  SariComponents out;
  if (references.empty()) return out;
  const auto s = metric_tokens(source);
  const auto c = metric_tokens(candidate);
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) refs.push_back(metric_tokens(r));
  for (std::size_t n = 1; n <= 4; ++n) {
    GramCounts rc;
    for (const auto& r : refs) {
      for (const auto& [g, k] : ngram_counts(r, n)) rc[g] += k;
    }
    const SariN v = sari_ngram(ngram_counts(s, n), ngram_counts(c, n), rc, refs.size());
    out.keep += v.keep / 4;
    out.del += v.del / 4;
    out.add += v.add / 4;
  }
  out.score = 100.0 * (out.keep + out.del + out.add) / 3;
  return out;
}

double sari(std::string_view source, std::string_view candidate,
            std::span<const std::string> references) {
  return sari_components(source, candidate, references).score;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& o) {
  words += o.words;
  sentences += o.sentences;
  characters += o.characters;
  deid_count += o.deid_count;
  return *this;
}

CorpusStats corpus_stats(std::string_view text) {
  CorpusStats st;
  const std::u32string t = utf8::decode(text);
  st.characters = t.size();
  for (std::size_t i = 0; i < t.size();) {
    while (i < t.size() && utf8::is_space(t[i])) ++i;
    if (i < t.size()) ++st.words;
    while (i < t.size() && !utf8::is_space(t[i])) ++i;
  }
  for (std::size_t pos = text.find("___"); pos != std::string_view::npos;
       pos = text.find("___", pos + 3)) {
    ++st.deid_count;
  }

  bool content = false;
  std::size_t seg_start = 0;
  auto close = [&] {
    if (content) ++st.sentences;
    content = false;
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char32_t ch = t[i];
    if (ch == U'\n' || ch == U'\r') {
      close();
      seg_start = i + 1;
      continue;
    }
    if (utf8::is_alnum(ch) || ch == U'_') {
      content = true;
      continue;
    }
    if (ch != U'.' && ch != U'!' && ch != U'?') continue;
    std::size_t j = i;
    while (j < t.size() && (t[j] == U'.' || t[j] == U'!' || t[j] == U'?')) ++j;
    if (j < t.size() && !utf8::is_space(t[j])) {
      i = j - 1;
      continue;
    }
    if (j == i + 1 && ch == U'.') {
      // The word before the period, lowercased, e.g. "dr" or "e.g".
      std::size_t w = i;
      while (w > seg_start && !utf8::is_space(t[w - 1])) --w;
      std::u32string word;
      for (std::size_t k = w; k < i; ++k) word.push_back(utf8::to_lower(t[k]));
      while (!word.empty() && (word.front() == U'(' || word.front() == U'"')) word.erase(0, 1);
      if (abbreviations().count(word) > 0) continue;
    }
    close();
    seg_start = j;
    i = j - 1;
  }
  close();
  return st;
}

}  // namespace halluspan
