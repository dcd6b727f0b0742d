// Copyright 2026 The qwm Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace qwm {

// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so seeded outputs would differ between standard libraries. These helpers
// only rely on the fully specified mt19937_64 stream.

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound), bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // 2^64 - reject_below is a multiple of bound.
  const std::uint64_t reject_below = (0 - bound) % bound;
  std::uint64_t x = rng();
  while (x < reject_below) x = rng();
  return x % bound;
}

template <class T>
void shuffle_in_place(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace qwm
