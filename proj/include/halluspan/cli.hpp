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

#ifndef HALLUSPAN_CLI_HPP_
#define HALLUSPAN_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace halluspan {

// Uniform integer in [0, bound): draws x from the generator until
// x < 2^64 - (2^64 mod bound) and returns x mod bound. bound must be positive.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound);

// Picks k of n indices with a seeded partial Fisher-Yates shuffle over
// mt19937_64: for i = 0..k-1 swap position i with i + draw(n - i). Throws
// InsufficientData when k > n.
std::vector<std::size_t> sample_shots(std::size_t n, std::size_t k, std::uint64_t seed);

// Runs one subcommand. `args` excludes the program name. Returns the process
// exit code: 0 on success, 1 for validation failures, 2 for IO and transport
// failures.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace halluspan

#endif  // HALLUSPAN_CLI_HPP_
