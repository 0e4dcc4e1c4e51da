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

#ifndef HALLUSPAN_TABLE_HPP_
#define HALLUSPAN_TABLE_HPP_

#include <string>
#include <vector>

namespace halluspan {

// Plain-text table: first column left-aligned, the rest right-aligned. Header
// rows are separated from the body by a rule; section rows span the table and
// are framed by rules.
class TextTable {
 public:
  void add_header(std::vector<std::string> cells);
  void add_section(std::string title);
  void add_row(std::vector<std::string> cells);
  std::string render() const;

 private:
  struct Row {
    bool section = false;
    std::vector<std::string> cells;
  };
  std::vector<std::vector<std::string>> header_;
  std::vector<Row> body_;
};

// Fixed-point formatting, "-" for NaN.
std::string fixed(double value, int decimals);

}  // namespace halluspan

#endif  // HALLUSPAN_TABLE_HPP_
