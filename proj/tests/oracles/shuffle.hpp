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

#ifndef HALLUSPAN_TESTS_SHUFFLE_HPP_
#define HALLUSPAN_TESTS_SHUFFLE_HPP_

#include <cstdint>
#include <random>
#include <vector>

// Reference partial Fisher-Yates with 128-bit rejection bounds.
namespace oracle {

inline std::vector<std::size_t> seeded_sample(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const unsigned __int128 range = n - i;
    const unsigned __int128 space = static_cast<unsigned __int128>(1) << 64;
    const unsigned __int128 limit = space - space % range;
    unsigned __int128 x;
    do {
      x = gen();
    } while (x >= limit);
    std::swap(v[i], v[i + static_cast<std::size_t>(x % range)]);
  }
  v.resize(k);
  return v;
}

}  // namespace oracle

#endif  // HALLUSPAN_TESTS_SHUFFLE_HPP_
