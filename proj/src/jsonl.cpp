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

#include "halluspan/jsonl.hpp"

#include <sstream>

#include "halluspan/error.hpp"

namespace halluspan {

using nlohmann::json;

void for_each_jsonl(std::istream& in,
                    const std::function<void(const json&, std::size_t)>& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(lineno) + ": invalid JSON (" + e.what() + ")");
    }
    if (!rec.is_object()) {
      throw Error(ErrorCode::kSchemaError,
                  "record " + std::to_string(lineno) + ": expected an object");
    }
    fn(rec, lineno);
  }
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t)>& fn) {
  auto in = open_input(path);
  for_each_jsonl(in, fn);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::string require_string(const json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) {
    throw Error(ErrorCode::kSchemaError, "record " + std::to_string(line) +
                                             ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

long long require_int(const json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::kSchemaError, "record " + std::to_string(line) +
                                             ": field '" + key + "' must be an integer");
  }
  return it->get<long long>();
}

}  // namespace halluspan
