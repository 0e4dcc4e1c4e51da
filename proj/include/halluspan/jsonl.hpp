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

#ifndef HALLUSPAN_JSONL_HPP_
#define HALLUSPAN_JSONL_HPP_

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "json.hpp"

namespace halluspan {

// Streams a line-delimited JSON file. The callback receives the parsed record
// and its 1-based line number; blank lines are skipped. Parse failures raise
// SchemaError naming the line.
void for_each_jsonl(std::istream& in,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Field accessors that raise SchemaError with the record line on mismatch.
std::string require_string(const nlohmann::json& rec, const char* key, std::size_t line);
long long require_int(const nlohmann::json& rec, const char* key, std::size_t line);

}  // namespace halluspan

#endif  // HALLUSPAN_JSONL_HPP_
