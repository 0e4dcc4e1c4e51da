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

#include "halluspan/table.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "halluspan/utf8.hpp"

namespace halluspan {

void TextTable::add_header(std::vector<std::string> cells) { header_.push_back(std::move(cells)); }

void TextTable::add_section(std::string title) { body_.push_back({true, {std::move(title)}}); }

void TextTable::add_row(std::vector<std::string> cells) { body_.push_back({false, std::move(cells)}); }

std::string TextTable::render() const {
  std::size_t ncols = 0;
  for (const auto& h : header_) ncols = std::max(ncols, h.size());
  for (const auto& r : body_) {
    if (!r.section) ncols = std::max(ncols, r.cells.size());
  }
  std::vector<std::size_t> width(ncols, 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      width[c] = std::max(width[c], utf8::length(cells[c]));
    }
  };
  for (const auto& h : header_) measure(h);
  for (const auto& r : body_) {
    if (!r.section) measure(r.cells);
  }
  std::size_t total = 0;
  for (auto w : width) total += w;
  total += ncols > 0 ? 2 * (ncols - 1) : 0;
  for (const auto& r : body_) {
    if (r.section) total = std::max(total, utf8::length(r.cells[0]));
  }

  const std::string rule(total, '-');
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < ncols; ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      const std::size_t pad = width[c] - utf8::length(cell);
      if (c > 0) line += "  ";
      if (c == 0) {
        line += cell + std::string(pad, ' ');
      } else {
        line += std::string(pad, ' ') + cell;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  };
  for (const auto& h : header_) emit(h);
  out += rule + '\n';
  for (std::size_t i = 0; i < body_.size(); ++i) {
    const auto& r = body_[i];
    if (r.section) {
      if (i > 0) out += rule + '\n';
      out += r.cells[0] + '\n';
      out += rule + '\n';
    } else {
      emit(r.cells);
    }
  }
  return out;
}

std::string fixed(double value, int decimals) {
  if (std::isnan(value)) return "-";
  return fmt::format("{:.{}f}", value, decimals);
}

}  // namespace halluspan
