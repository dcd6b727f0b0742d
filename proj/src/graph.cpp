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

#include "qwm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qwm/error.hpp"
#include "qwm/random.hpp"

namespace qwm {

namespace {

constexpr Vertex kUnmatched = static_cast<Vertex>(-1);

// Kuhn's augmenting-path matching on the bipartite graph (out copy -> in
// copy) formed by the remaining arcs.
class BipartiteMatcher {
 public:
  BipartiteMatcher(const std::vector<std::vector<Vertex>>& arcs, std::size_t n)
      : arcs_(arcs), match_in_(n, kUnmatched), seen_(n, 0) {}

  bool augment(Vertex u) {
    ++stamp_;
    return try_kuhn(u);
  }

  // matched_out[u] = in-vertex matched to u.
  std::vector<Vertex> matched_out() const {
    std::vector<Vertex> result(match_in_.size(), kUnmatched);
    for (Vertex w = 0; w < match_in_.size(); ++w)
      if (match_in_[w] != kUnmatched) result[match_in_[w]] = w;
    return result;
  }

 private:
  bool try_kuhn(Vertex u) {
    for (Vertex w : arcs_[u]) {
      if (seen_[w] == stamp_) continue;
      seen_[w] = stamp_;
      if (match_in_[w] == kUnmatched || try_kuhn(match_in_[w])) {
        match_in_[w] = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<Vertex>>& arcs_;
  std::vector<Vertex> match_in_;
  std::vector<std::size_t> seen_;
  std::size_t stamp_ = 0;
};

}  // namespace

RegularDigraph RegularDigraph::from_out_lists(std::vector<std::vector<Vertex>> out,
                                              std::vector<long> coordinates,
                                              GraphFamily family) {
  RegularDigraph g;
  g.size_ = out.size();
  if (g.size_ == 0) fail(ErrorKind::kInvalidGraph, "graph has no vertices");
  g.degree_ = out.front().size();
  if (g.degree_ == 0) fail(ErrorKind::kInvalidGraph, "graph has out-degree 0");

  std::vector<std::size_t> in_degree(g.size_, 0);
  g.out_.reserve(g.size_ * g.degree_);
  for (Vertex v = 0; v < g.size_; ++v) {
    if (out[v].size() != g.degree_)
      fail(ErrorKind::kInvalidGraph,
           "vertex " + std::to_string(v) + " has out-degree " +
               std::to_string(out[v].size()) + ", expected " + std::to_string(g.degree_));
    std::vector<Vertex> sorted = out[v];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorKind::kInvalidGraph, "parallel arcs at vertex " + std::to_string(v));
    for (Vertex w : out[v]) {
      if (w >= g.size_)
        fail(ErrorKind::kInvalidGraph, "arc target " + std::to_string(w) + " out of range");
      ++in_degree[w];
      g.out_.push_back(w);
    }
  }
  for (Vertex v = 0; v < g.size_; ++v)
    if (in_degree[v] != g.degree_)
      fail(ErrorKind::kInvalidGraph, "vertex " + std::to_string(v) + " has in-degree " +
                                         std::to_string(in_degree[v]) + ", expected " +
                                         std::to_string(g.degree_));

  if (coordinates.empty()) {
    coordinates.resize(g.size_);
    std::iota(coordinates.begin(), coordinates.end(), 0L);
  } else if (coordinates.size() != g.size_) {
    fail(ErrorKind::kInvalidGraph, "coordinate count does not match vertex count");
  }
  g.coordinates_ = std::move(coordinates);
  g.family_ = family;
  g.paths_.resize(g.size_);
  std::iota(g.paths_.begin(), g.paths_.end(), Vertex{0});
  return g;
}

bool RegularDigraph::has_arc(Vertex from, Vertex to) const {
  const auto targets = out(from);
  return std::find(targets.begin(), targets.end(), to) != targets.end();
}

std::optional<Vertex> RegularDigraph::find(std::span<const Vertex> path) const {
  if (path.size() != depth_ + 1) return std::nullopt;
  if (depth_ == 0) {
    if (path[0] < size_) return path[0];
    return std::nullopt;
  }
  const auto it = by_path_.find(std::vector<Vertex>(path.begin(), path.end()));
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

std::optional<Vertex> RegularDigraph::base_vertex_at(long coordinate) const {
  const auto& coords = base().coordinates_;
  const auto it = std::find(coords.begin(), coords.end(), coordinate);
  if (it == coords.end()) return std::nullopt;
  return static_cast<Vertex>(it - coords.begin());
}

std::vector<std::pair<Vertex, Vertex>> RegularDigraph::arcs() const {
  std::vector<std::pair<Vertex, Vertex>> result;
  result.reserve(size_ * degree_);
  for (Vertex v = 0; v < size_; ++v)
    for (Vertex w : out(v)) result.emplace_back(v, w);
  return result;
}

std::vector<std::vector<int>> RegularDigraph::adjacency_matrix() const {
  std::vector<std::vector<int>> m(size_, std::vector<int>(size_, 0));
  for (Vertex v = 0; v < size_; ++v)
    for (Vertex w : out(v)) m[v][w] = 1;
  return m;
}

long centered_coordinate(std::size_t i, std::size_t n) {
  const auto x = static_cast<long>(i);
  return i <= n / 2 ? x : x - static_cast<long>(n);
}

RegularDigraph make_bidirected_cycle(std::size_t n) {
  if (n < 3) fail(ErrorKind::kInvalidGraph, "bidirected cycle needs n >= 3");
  std::vector<std::vector<Vertex>> out(n);
  std::vector<long> coordinates(n);
  for (Vertex x = 0; x < n; ++x) {
    out[x] = {(x + 1) % n, (x + n - 1) % n};
    coordinates[x] = centered_coordinate(x, n);
  }
  return RegularDigraph::from_out_lists(std::move(out), std::move(coordinates),
                                        GraphFamily::kBidirectedCycle);
}

RegularDigraph make_directed_cycle(std::size_t n) {
  if (n < 2) fail(ErrorKind::kInvalidGraph, "directed cycle needs n >= 2");
  std::vector<std::vector<Vertex>> out(n);
  std::vector<long> coordinates(n);
  for (Vertex x = 0; x < n; ++x) {
    out[x] = {(x + 1) % n};
    coordinates[x] = centered_coordinate(x, n);
  }
  return RegularDigraph::from_out_lists(std::move(out), std::move(coordinates),
                                        GraphFamily::kDirectedCycle);
}

int cycle_step(Vertex from, Vertex to, std::size_t n) {
  if ((from + 1) % n == to) return +1;
  if ((to + 1) % n == from) return -1;
  fail(ErrorKind::kInvalidArgument, "vertices are not adjacent on the cycle");
}

Factorization dicycle_factorization(const RegularDigraph& g,
                                    std::optional<std::uint64_t> seed) {
  const std::size_t n = g.size();
  const std::size_t m = g.degree();
  std::vector<std::vector<Vertex>> remaining(n);
  for (Vertex v = 0; v < n; ++v) remaining[v].assign(g.out(v).begin(), g.out(v).end());

  std::optional<Rng> rng;
  if (seed) rng.emplace(*seed);

  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});

  Factorization factors;
  factors.reserve(m);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (rng) {
      shuffle_in_place(std::span<Vertex>(order), *rng);
      for (auto& arcs : remaining) shuffle_in_place(std::span<Vertex>(arcs), *rng);
    }
    BipartiteMatcher matcher(remaining, n);
    for (Vertex u : order)
      if (!matcher.augment(u))
        fail(ErrorKind::kInvalidGraph, "no perfect matching; graph is not regular");
    Permutation perm = matcher.matched_out();
    for (Vertex v = 0; v < n; ++v) std::erase(remaining[v], perm[v]);
    factors.push_back(std::move(perm));
  }
  Permutation last(n);
  for (Vertex v = 0; v < n; ++v) last[v] = remaining[v].front();
  factors.push_back(std::move(last));
  return factors;
}

void check_factorization(const RegularDigraph& g, const Factorization& f) {
  const std::size_t n = g.size();
  if (f.size() != g.degree())
    fail(ErrorKind::kInvalidGraph, "factorization has " + std::to_string(f.size()) +
                                       " classes, expected " + std::to_string(g.degree()));
  std::vector<std::vector<Vertex>> used(n);
  for (const auto& perm : f) {
    if (perm.size() != n) fail(ErrorKind::kInvalidGraph, "factor has wrong size");
    std::vector<char> hit(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      const Vertex w = perm[v];
      if (w >= n || !g.has_arc(v, w))
        fail(ErrorKind::kInvalidGraph, "factor maps " + std::to_string(v) + " off an arc");
      if (hit[w]++) fail(ErrorKind::kInvalidGraph, "factor is not a permutation");
      used[v].push_back(w);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    std::sort(used[v].begin(), used[v].end());
    if (std::adjacent_find(used[v].begin(), used[v].end()) != used[v].end())
      fail(ErrorKind::kInvalidGraph,
           "factors share an arc leaving vertex " + std::to_string(v));
  }
}

RegularDigraph line_digraph(const RegularDigraph& g, const Factorization& f) {
  check_factorization(g, f);
  const std::size_t n = g.size();
  const std::size_t m = g.degree();

  Factorization inverse(m, Permutation(n));
  for (std::size_t k = 0; k < m; ++k)
    for (Vertex v = 0; v < n; ++v) inverse[k][f[k][v]] = v;

  RegularDigraph lg;
  lg.size_ = n * m;
  lg.degree_ = m;
  lg.depth_ = g.depth() + 1;
  lg.family_ = g.family();
  lg.base_ = g.depth() == 0 ? std::make_shared<const RegularDigraph>(g) : g.base_;
  lg.base_factors_ = g.depth() == 0 ? f : g.base_factors_;

  // Vertex k*n + l is the arc (D_k^{-1}(l) -> l); its out-arcs lead to the
  // arcs (l -> D_j(l)), i.e. vertices j*n + D_j(l).
  lg.out_.resize(lg.size_ * m);
  lg.paths_.reserve(lg.size_ * (lg.depth_ + 1));
  for (std::size_t k = 0; k < m; ++k) {
    for (Vertex l = 0; l < n; ++l) {
      const Vertex self = k * n + l;
      for (std::size_t j = 0; j < m; ++j) lg.out_[self * m + j] = j * n + f[j][l];
      const auto tail_path = g.path(inverse[k][l]);
      lg.paths_.insert(lg.paths_.end(), tail_path.begin(), tail_path.end());
      lg.paths_.push_back(g.current_position(l));
    }
  }
  for (Vertex v = 0; v < lg.size_; ++v) {
    const auto p = lg.path(v);
    lg.by_path_.emplace(std::vector<Vertex>(p.begin(), p.end()), v);
  }
  return lg;
}

Factorization lift_factorization(const Factorization& f) {
  const std::size_t m = f.size();
  const std::size_t n = f.front().size();
  Factorization lifted(m, Permutation(n * m));
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t target_block = (j + s) % m;
      for (Vertex i = 0; i < n; ++i)
        lifted[s][j * n + i] = target_block * n + f[target_block][i];
    }
  return lifted;
}

RegularDigraph iterate_line_digraph(const RegularDigraph& g, std::size_t depth,
                                    const Factorization& f) {
  if (depth == 0) return g;
  RegularDigraph current = line_digraph(g, f);
  Factorization level = f;
  for (std::size_t i = 1; i < depth; ++i) {
    level = lift_factorization(level);
    current = line_digraph(current, level);
  }
  return current;
}

RegularDigraph iterate_line_digraph(const RegularDigraph& g, std::size_t depth) {
  if (depth == 0) return g;
  return iterate_line_digraph(g, depth, dicycle_factorization(g));
}

RegularDigraph make_line_surrogate(std::size_t window, std::size_t depth) {
  if (window % 2 == 0)
    fail(ErrorKind::kInvalidGraph, "line surrogate window must be odd");
  const RegularDigraph cycle = make_bidirected_cycle(window);
  Factorization rotations(2, Permutation(window));
  for (Vertex x = 0; x < window; ++x) {
    rotations[0][x] = (x + 1) % window;
    rotations[1][x] = (x + window - 1) % window;
  }
  return iterate_line_digraph(cycle, depth, rotations);
}

std::size_t min_line_window(std::size_t t_max, std::size_t depth) {
  return 2 * t_max + 2 * depth + 3;
}

}  // namespace qwm
