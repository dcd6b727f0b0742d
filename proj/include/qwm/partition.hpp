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
#include <memory>
#include <span>
#include <vector>

#include "qwm/graph.hpp"

namespace qwm {

/// Coin labels are 0..m-1. For two-coin walks label 0 is rendered as +1 and
/// label 1 as -1.
using Coin = std::size_t;

inline int coin_sign(Coin c) { return c == 0 ? +1 : -1; }
inline Coin coin_from_sign(int s) { return s > 0 ? 0 : 1; }

struct PartitionReport {
  bool cover_ok = false;   // per vertex, the m classes use m distinct out-arcs
  bool outdeg_ok = false;  // every class entry is an arc of the host
  bool is_dicycle = false; // additionally every class is a permutation

  bool valid() const { return cover_ok && outdeg_ok; }
  friend bool operator==(const PartitionReport&, const PartitionReport&) = default;
};

/// An edge partition {C_1, ..., C_m} of a host digraph, stored as the
/// successor table f_{C_k}(v). Entries are not required to be valid; use
/// report() to check them.
class Partition {
 public:
  Partition(std::shared_ptr<const RegularDigraph> host, std::vector<Vertex> successors);

  static Partition from_factorization(std::shared_ptr<const RegularDigraph> host,
                                      const Factorization& factors);

  const RegularDigraph& host() const { return *host_; }
  const std::shared_ptr<const RegularDigraph>& host_ptr() const { return host_; }
  std::size_t coins() const { return host_->degree(); }

  /// f_{C_k}(v).
  Vertex successor(Coin k, Vertex v) const { return table_[v * coins() + k]; }

  /// Row-major table, entry v*m + k.
  std::span<const Vertex> table() const { return table_; }

  const PartitionReport& report() const { return report_; }
  bool is_dicycle() const { return report_.is_dicycle; }

 private:
  std::shared_ptr<const RegularDigraph> host_;
  std::vector<Vertex> table_;
  PartitionReport report_;
};

PartitionReport validate_partition(const Partition& p);

/// The two partitions of the published memory walks on the line.
enum class NamedPartition {
  kRecycledCoin,     // class k steps in direction s_k from the current position
  kReflectTransmit,  // class +1 reflects, class -1 transmits
};

/// Builds a named partition on a line digraph of a bidirected cycle.
/// kRecycledCoin accepts any depth >= 1; kReflectTransmit needs depth 1
/// (its reflect class is not a permutation beyond that).
Partition named_partition(NamedPartition kind, std::shared_ptr<const RegularDigraph> host);

/// Independent uniformly random bijection coin -> out-arc at every vertex.
Partition random_partition(std::shared_ptr<const RegularDigraph> host, std::uint64_t seed);

/// Random dicycle factorization by seeded repeated perfect matching. Not
/// uniform over all factorizations.
Partition random_dicycle_factorization(std::shared_ptr<const RegularDigraph> host,
                                       std::uint64_t seed);

}  // namespace qwm
