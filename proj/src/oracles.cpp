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

#include "qwm/oracles.hpp"

#include <cstdlib>
#include <string>

#include "qwm/error.hpp"

namespace qwm {

namespace {

std::size_t slot(int sign) {
  if (sign != 1 && sign != -1) fail(ErrorKind::kInvalidArgument, "coin must be +1 or -1");
  return sign > 0 ? 0 : 1;
}
int sign_of(std::size_t s) { return s == 0 ? 1 : -1; }

struct Ring {
  std::size_t n;
  std::size_t index(long x) const {
    const auto m = static_cast<long>(n);
    return static_cast<std::size_t>(((x % m) + m) % m);
  }
  long coordinate(std::size_t i) const { return centered_coordinate(i, n); }
};

PositionDistribution empty_distribution(const Ring& ring, std::size_t t) {
  PositionDistribution d;
  d.min_position = -static_cast<long>((ring.n - 1) / 2);
  d.probabilities.assign(ring.n, 0.0);
  d.time = t;
  return d;
}

}  // namespace

std::vector<PositionDistribution> recycled_coin_walk(std::size_t window, std::size_t depth,
                                                     const CoinMatrix& coin,
                                                     std::span<const RecycledCoinTerm> initial,
                                                     std::size_t t_max) {
  if (depth != 1 && depth != 2)
    fail(ErrorKind::kUnsupported, "recycled-coin oracle supports memory depth 1 or 2");
  if (coin.size() != 2) fail(ErrorKind::kInvalidArgument, "oracle needs a 2x2 coin");
  const Ring ring{window};
  const std::size_t memories = std::size_t{1} << depth;
  // index = ((x * memories) + memory bits) * 2 + coin; bit i of the memory
  // holds c_{i+1} (set for -1).
  auto idx = [&](std::size_t x, std::size_t mem, std::size_t c) {
    return (x * memories + mem) * 2 + c;
  };
  std::vector<Amplitude> psi(window * memories * 2, 0.0), next(psi.size());
  for (const auto& term : initial) {
    if (term.memory.size() != depth)
      fail(ErrorKind::kInvalidArgument, "memory register has the wrong length");
    std::size_t mem = 0;
    for (std::size_t i = 0; i < depth; ++i) mem |= slot(term.memory[i]) << i;
    psi[idx(ring.index(term.x), mem, slot(term.coin))] += term.amplitude;
  }

  std::vector<PositionDistribution> history;
  auto record = [&](std::size_t t) {
    PositionDistribution d = empty_distribution(ring, t);
    for (std::size_t x = 0; x < window; ++x) {
      double p = 0.0;
      for (std::size_t k = 0; k < memories * 2; ++k) p += std::norm(psi[x * memories * 2 + k]);
      d.probabilities[static_cast<std::size_t>(ring.coordinate(x) - d.min_position)] += p;
    }
    history.push_back(std::move(d));
  };

  record(0);
  for (std::size_t t = 1; t <= t_max; ++t) {
    std::fill(next.begin(), next.end(), Amplitude{});
    for (std::size_t x = 0; x < window; ++x)
      for (std::size_t mem = 0; mem < memories; ++mem) {
        const Amplitude in0 = psi[idx(x, mem, 0)];
        const Amplitude in1 = psi[idx(x, mem, 1)];
        for (std::size_t j = 0; j < 2; ++j) {
          const Amplitude a = coin(0, j) * in0 + coin(1, j) * in1;
          if (a == Amplitude{}) continue;
          // Move by j, push j onto the memory, the oldest entry becomes the coin.
          const std::size_t oldest = (mem >> (depth - 1)) & 1;
          const std::size_t shifted = ((mem << 1) | j) & (memories - 1);
          const std::size_t x_new = ring.index(ring.coordinate(x) + sign_of(j));
          next[idx(x_new, shifted, oldest)] += a;
        }
      }
    psi.swap(next);
    record(t);
  }
  return history;
}

std::vector<PositionDistribution> reflect_transmit_walk(
    std::size_t window, const CoinMatrix& coin, std::span<const ReflectTransmitTerm> initial,
    std::size_t t_max) {
  if (coin.size() != 2) fail(ErrorKind::kInvalidArgument, "oracle needs a 2x2 coin");
  const Ring ring{window};
  // index = (x0 * 2 + side) * 2 + coin, side 0 when x1 = x0 - 1.
  auto idx = [](std::size_t x0, std::size_t side, std::size_t c) { return (x0 * 2 + side) * 2 + c; };
  std::vector<Amplitude> psi(window * 4, 0.0), next(psi.size());
  for (const auto& term : initial) {
    const long step = term.x0 - term.x1;
    if (std::abs(step) != 1)
      fail(ErrorKind::kInvalidArgument, "previous position must be adjacent");
    psi[idx(ring.index(term.x0), step > 0 ? 0 : 1, slot(term.coin))] += term.amplitude;
  }

  std::vector<PositionDistribution> history;
  auto record = [&](std::size_t t) {
    PositionDistribution d = empty_distribution(ring, t);
    for (std::size_t x = 0; x < window; ++x) {
      double p = 0.0;
      for (std::size_t k = 0; k < 4; ++k) p += std::norm(psi[x * 4 + k]);
      d.probabilities[static_cast<std::size_t>(ring.coordinate(x) - d.min_position)] += p;
    }
    history.push_back(std::move(d));
  };

  record(0);
  for (std::size_t t = 1; t <= t_max; ++t) {
    std::fill(next.begin(), next.end(), Amplitude{});
    for (std::size_t x = 0; x < window; ++x)
      for (std::size_t side = 0; side < 2; ++side) {
        const long x0 = ring.coordinate(x);
        const long x1 = side == 0 ? x0 - 1 : x0 + 1;
        const Amplitude in0 = psi[idx(x, side, 0)];
        const Amplitude in1 = psi[idx(x, side, 1)];
        for (std::size_t j = 0; j < 2; ++j) {
          const Amplitude a = coin(0, j) * in0 + coin(1, j) * in1;
          if (a == Amplitude{}) continue;
          const long new_x0 = (j == 0) ? x1 : 2 * x0 - x1;
          const std::size_t new_side = new_x0 - x0 > 0 ? 0 : 1;
          next[idx(ring.index(new_x0), new_side, j)] += a;
        }
      }
    psi.swap(next);
    record(t);
  }
  return history;
}

BasisAmplitude to_path_basis(const RecycledCoinTerm& term) {
  BasisAmplitude b;
  const std::size_t d = term.memory.size();
  b.path.resize(d + 1);
  long x = term.x;
  b.path[d] = x;
  for (std::size_t i = 0; i < d; ++i) {
    x -= term.memory[i];
    b.path[d - 1 - i] = x;
  }
  b.coin = coin_from_sign(term.coin);
  b.amplitude = term.amplitude;
  return b;
}

BasisAmplitude to_path_basis(const ReflectTransmitTerm& term) {
  return {{term.x1, term.x0}, coin_from_sign(term.coin), term.amplitude};
}

}  // namespace qwm
