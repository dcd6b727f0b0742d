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

#include "qwm/coin_shift.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qwm/error.hpp"

namespace qwm {

CoinShift::CoinShift(std::size_t coins, std::vector<Coin> table)
    : coins_(coins), table_(std::move(table)) {
  if (coins_ == 0) fail(ErrorKind::kInvalidArgument, "coin shift needs at least one coin");
  if (table_.size() % coins_ != 0)
    fail(ErrorKind::kInvalidArgument, "coin shift table is not |V| x m");
  for (Coin c : table_)
    if (c >= coins_) fail(ErrorKind::kInvalidArgument, "coin shift output out of range");
}

CoinShiftReport validate_coin_shift(const Partition& p, const CoinShift& gc) {
  const std::size_t n = p.host().size();
  const std::size_t m = p.coins();
  if (gc.coins() != m || gc.vertex_count() != n)
    fail(ErrorKind::kInvalidArgument, "coin shift does not match the partition's host");

  std::vector<std::size_t> hits(n * m, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Coin k = 0; k < m; ++k) ++hits[p.successor(k, u) * m + gc(u, k)];

  CoinShiftReport report;
  for (Vertex v = 0; v < n; ++v) {
    const auto first = hits.begin() + static_cast<std::ptrdiff_t>(v * m);
    if (!std::all_of(first, first + static_cast<std::ptrdiff_t>(m),
                     [](std::size_t h) { return h == 1; }))
      report.violations.push_back(v);
  }
  report.valid = report.violations.empty();
  return report;
}

namespace {

void require_two_coin_line_digraph(const Partition& p, const char* what) {
  if (p.coins() != 2)
    fail(ErrorKind::kUnsupported,
         std::string(what) + " is defined for two-coin walks only");
  if (p.host().depth() == 0)
    fail(ErrorKind::kInvalidArgument,
         std::string(what) + " needs a line digraph host (memory depth >= 1)");
}

}  // namespace

CoinShift memory_coin_shift(const Partition& p) {
  require_two_coin_line_digraph(p, "memory coin shift");
  const RegularDigraph& host = p.host();
  const Factorization& factors = host.base_factorization();
  std::vector<Coin> table(host.size() * 2);
  for (Vertex v = 0; v < host.size(); ++v) {
    const auto path = host.path(v);
    const Coin oldest = factors[0][path[0]] == path[1] ? 0 : 1;
    table[v * 2] = oldest;
    table[v * 2 + 1] = oldest;
  }
  return CoinShift(2, std::move(table));
}

CoinShift carried_coin_shift(const Partition& p) {
  require_two_coin_line_digraph(p, "carried coin shift");
  if (!p.is_dicycle())
    fail(ErrorKind::kConstraintViolation,
         "carried coin shift (gc2) needs a dicycle factorization partition: on a "
         "partition where two vertices share a successor in one class, both "
         "incoming pairs keep the same coin and the shift is not unitary");
  std::vector<Coin> table(p.host().size() * 2);
  for (Vertex v = 0; v < p.host().size(); ++v) {
    table[v * 2] = 0;
    table[v * 2 + 1] = 1;
  }
  return CoinShift(2, std::move(table));
}

std::vector<CoinShift> enumerate_coin_shifts(const Partition& p, std::size_t max_entries) {
  const std::size_t n = p.host().size();
  const std::size_t m = p.coins();
  if (n * m > max_entries)
    fail(ErrorKind::kSize, "coin-shift enumeration over " + std::to_string(n * m) +
                               " table entries exceeds the limit of " +
                               std::to_string(max_entries));

  // Group the (u, k) entries by the vertex they move to; each group must
  // receive a permutation of the coins.
  std::vector<std::vector<std::size_t>> groups(n);
  for (Vertex u = 0; u < n; ++u)
    for (Coin k = 0; k < m; ++k) groups[p.successor(k, u)].push_back(u * m + k);
  for (const auto& g : groups)
    if (g.size() != m) return {};

  std::vector<std::vector<Coin>> perms;
  std::vector<Coin> perm(m);
  std::iota(perm.begin(), perm.end(), Coin{0});
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::vector<Coin>> tables;
  std::vector<std::size_t> choice(n, 0);
  std::vector<Coin> table(n * m);
  while (true) {
    for (Vertex v = 0; v < n; ++v)
      for (std::size_t i = 0; i < m; ++i) table[groups[v][i]] = perms[choice[v]][i];
    tables.push_back(table);
    Vertex v = 0;
    while (v < n && ++choice[v] == perms.size()) choice[v++] = 0;
    if (v == n) break;
  }
  std::sort(tables.begin(), tables.end());

  std::vector<CoinShift> result;
  result.reserve(tables.size());
  for (auto& t : tables) result.emplace_back(m, std::move(t));
  return result;
}

}  // namespace qwm
