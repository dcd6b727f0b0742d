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

#include <span>
#include <vector>

#include "qwm/partition.hpp"

namespace qwm {

/// Coin-shift function gc: (vertex, coin) -> coin applied after the move.
/// Stored as an explicit table, entry v*m + k.
class CoinShift {
 public:
  CoinShift(std::size_t coins, std::vector<Coin> table);

  Coin operator()(Vertex v, Coin k) const { return table_[v * coins_ + k]; }

  std::size_t coins() const { return coins_; }
  std::size_t vertex_count() const { return table_.size() / coins_; }
  std::span<const Coin> table() const { return table_; }

  friend bool operator==(const CoinShift&, const CoinShift&) = default;

 private:
  std::size_t coins_;
  std::vector<Coin> table_;
};

struct CoinShiftReport {
  bool valid = false;
  /// Target vertices whose incoming (vertex, coin) pairs do not receive every
  /// coin exactly once.
  std::vector<Vertex> violations;
};

/// Unitarity constraint: for every target v, gc over the m pairs (u, k) with
/// f_{C_k}(u) = v must hit each coin exactly once.
CoinShiftReport validate_coin_shift(const Partition& p, const CoinShift& gc);

/// gc1: emits the oldest coin remembered by the source vertex (the factor of
/// the first arc of its path), whatever the incoming coin. Valid for every
/// partition of a two-coin line digraph.
CoinShift memory_coin_shift(const Partition& p);

/// gc2: carries the coin through the move unchanged. Valid only when the
/// partition is a dicycle factorization; throws kConstraintViolation
/// otherwise.
CoinShift carried_coin_shift(const Partition& p);

/// Every coin-shift table satisfying the unitarity constraint, in
/// lexicographic table order. Throws kSize when |V|*m exceeds max_entries.
std::vector<CoinShift> enumerate_coin_shifts(const Partition& p,
                                             std::size_t max_entries = 24);

}  // namespace qwm
