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

#include "qwm/partition.hpp"

#include <algorithm>
#include <string>

#include "qwm/error.hpp"
#include "qwm/random.hpp"

namespace qwm {

Partition::Partition(std::shared_ptr<const RegularDigraph> host,
                     std::vector<Vertex> successors)
    : host_(std::move(host)), table_(std::move(successors)) {
  if (!host_) fail(ErrorKind::kInvalidArgument, "partition needs a host graph");
  if (table_.size() != host_->size() * host_->degree())
    fail(ErrorKind::kInvalidArgument,
         "partition table has " + std::to_string(table_.size()) + " entries, expected " +
             std::to_string(host_->size() * host_->degree()));
  for (Vertex w : table_)
    if (w >= host_->size())
      fail(ErrorKind::kInvalidArgument, "partition successor out of range");
  report_ = validate_partition(*this);
}

Partition Partition::from_factorization(std::shared_ptr<const RegularDigraph> host,
                                        const Factorization& factors) {
  const std::size_t n = host->size();
  const std::size_t m = host->degree();
  if (factors.size() != m) fail(ErrorKind::kInvalidArgument, "factor count != degree");
  std::vector<Vertex> table(n * m);
  for (Vertex v = 0; v < n; ++v)
    for (Coin k = 0; k < m; ++k) table[v * m + k] = factors[k].at(v);
  return Partition(std::move(host), std::move(table));
}

PartitionReport validate_partition(const Partition& p) {
  const RegularDigraph& g = p.host();
  const std::size_t n = g.size();
  const std::size_t m = g.degree();
  PartitionReport r{true, true, true};
  std::vector<Vertex> row(m);
  for (Vertex v = 0; v < n; ++v) {
    for (Coin k = 0; k < m; ++k) {
      row[k] = p.successor(k, v);
      if (!g.has_arc(v, row[k])) r.outdeg_ok = false;
    }
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) r.cover_ok = false;
  }
  // With outdeg_ok every class has one out-arc per vertex; distinct entries
  // per vertex over m out-arcs mean the union is exactly E(host).
  if (!r.outdeg_ok) r.cover_ok = false;

  std::vector<char> hit(n);
  for (Coin k = 0; k < m && r.is_dicycle; ++k) {
    std::fill(hit.begin(), hit.end(), 0);
    for (Vertex v = 0; v < n; ++v) {
      if (hit[p.successor(k, v)]++) {
        r.is_dicycle = false;
        break;
      }
    }
  }
  r.is_dicycle = r.is_dicycle && r.valid();
  return r;
}

namespace {

void require_cycle_line_digraph(const RegularDigraph& host) {
  if (host.family() != GraphFamily::kBidirectedCycle || host.depth() == 0)
    fail(ErrorKind::kInvalidArgument,
         "named partitions need a line digraph of a bidirected cycle");
}

Vertex lookup(const RegularDigraph& host, const std::vector<Vertex>& path) {
  const auto v = host.find(path);
  if (!v) fail(ErrorKind::kInvalidGraph, "path is not a vertex of the host");
  return *v;
}

}  // namespace

Partition named_partition(NamedPartition kind, std::shared_ptr<const RegularDigraph> host) {
  require_cycle_line_digraph(*host);
  const std::size_t n = host->base().size();
  const std::size_t depth = host->depth();
  if (kind == NamedPartition::kReflectTransmit && depth != 1)
    fail(ErrorKind::kUnsupported, "reflect/transmit partition is defined for depth 1 only");

  std::vector<Vertex> table(host->size() * 2);
  std::vector<Vertex> next(depth + 1);
  for (Vertex v = 0; v < host->size(); ++v) {
    const auto path = host->path(v);
    const Vertex x = path.back();
    std::copy(path.begin() + 1, path.end(), next.begin());
    for (Coin k = 0; k < 2; ++k) {
      if (kind == NamedPartition::kRecycledCoin) {
        next.back() = coin_sign(k) > 0 ? (x + 1) % n : (x + n - 1) % n;
      } else {
        const Vertex previous = path[0];
        // reflect: back to the previous position; transmit: keep going.
        next.back() = (k == 0) ? previous : (2 * x + n - previous) % n;
      }
      table[v * 2 + k] = lookup(*host, next);
    }
  }
  return Partition(std::move(host), std::move(table));
}

Partition random_partition(std::shared_ptr<const RegularDigraph> host, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t m = host->degree();
  std::vector<Vertex> table;
  table.reserve(host->size() * m);
  std::vector<Vertex> row(m);
  for (Vertex v = 0; v < host->size(); ++v) {
    const auto out = host->out(v);
    std::copy(out.begin(), out.end(), row.begin());
    shuffle_in_place(std::span<Vertex>(row), rng);
    table.insert(table.end(), row.begin(), row.end());
  }
  return Partition(std::move(host), std::move(table));
}

Partition random_dicycle_factorization(std::shared_ptr<const RegularDigraph> host,
                                       std::uint64_t seed) {
  const Factorization factors = dicycle_factorization(*host, seed);
  return Partition::from_factorization(std::move(host), factors);
}

}  // namespace qwm
