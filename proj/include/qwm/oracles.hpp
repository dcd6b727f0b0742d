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

// The two memory walks on the line simulated in their own memory-register
// bases. They share no code with the line-digraph engine and serve as its
// reference.

#include <span>
#include <vector>

#include "qwm/analysis.hpp"

namespace qwm {

/// |x, c_1..c_d, c>: c_1 is the most recent move, c the coin.
struct RecycledCoinTerm {
  long x = 0;
  std::vector<int> memory;  // +/-1, most recent first
  int coin = 1;
  Amplitude amplitude;
};

/// |x0, x1, c>: x0 current position, x1 = x0 +/- 1 previous position.
struct ReflectTransmitTerm {
  long x0 = 0;
  long x1 = -1;
  int coin = 1;
  Amplitude amplitude;
};

/// Recycled-coin memory walk: coin acts on c, then
///   |x, c_1..c_d, c> -> |x + c, c, c_1..c_{d-1}>  with new coin c_d.
/// Positions live on a periodic window of `window` sites with centered
/// coordinates. Supports d in {1, 2}. Returns P(x, t) for t = 0..t_max.
std::vector<PositionDistribution> recycled_coin_walk(std::size_t window, std::size_t depth,
                                                     const CoinMatrix& coin,
                                                     std::span<const RecycledCoinTerm> initial,
                                                     std::size_t t_max);

/// Reflect/transmit memory walk with one memory: coin +1 reflects
/// (|x0,x1,+1> -> |x1,x0,+1>), coin -1 transmits
/// (|x0,x1,-1> -> |2x0-x1,x0,-1>).
std::vector<PositionDistribution> reflect_transmit_walk(
    std::size_t window, const CoinMatrix& coin, std::span<const ReflectTransmitTerm> initial,
    std::size_t t_max);

/// Path-vertex form (x - c_1 - ... - c_d, ..., x - c_1, x) of a recycled-coin
/// basis term.
BasisAmplitude to_path_basis(const RecycledCoinTerm& term);
/// Path-vertex form (x1, x0) of a reflect/transmit basis term.
BasisAmplitude to_path_basis(const ReflectTransmitTerm& term);

}  // namespace qwm
