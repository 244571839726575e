// Copyright 2026 The cfed Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace cfed {

/// Independent consumers of randomness. Each gets its own child stream so
/// that adding draws to one never perturbs another.
enum class Stream : std::uint32_t {
  ue_drop = 1,
  los = 2,
  shadowing = 3,
  solver = 4,
  monte_carlo = 5,
};

using Rng = std::mt19937_64;

inline Rng child_stream(std::uint64_t master, Stream purpose, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

/// Seed of Monte Carlo drop `index` under a master seed.
inline std::uint64_t drop_seed(std::uint64_t master, std::uint64_t index) {
  auto rng = child_stream(master, Stream::monte_carlo, index);
  return rng();
}

}  // namespace cfed
