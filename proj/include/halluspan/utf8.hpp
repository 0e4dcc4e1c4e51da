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

#ifndef HALLUSPAN_UTF8_HPP_
#define HALLUSPAN_UTF8_HPP_

#include <cstddef>
#include <string>
#include <string_view>

// All offsets in this project count Unicode scalar values. Texts are kept as
// UTF-8 bytes and decoded on demand. Decoding is lenient: every invalid byte
// becomes U+FFFD, so any byte string has a well-defined character length.
namespace halluspan::utf8 {

std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view chars);
std::size_t length(std::string_view bytes);

// Characters [start, end) of a UTF-8 string, clamped to its length.
std::string slice(std::string_view bytes, std::size_t start, std::size_t end);

bool is_space(char32_t c);
bool is_alnum(char32_t c);
char32_t to_lower(char32_t c);

std::u32string_view trim(std::u32string_view s);

}  // namespace halluspan::utf8

#endif  // HALLUSPAN_UTF8_HPP_
