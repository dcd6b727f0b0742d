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

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qwm {

using Vertex = std::size_t;

/// A permutation of the vertex set whose every pair (v, p[v]) is an arc.
using Permutation = std::vector<Vertex>;

/// m edge-disjoint permutations jointly covering every arc of an m-regular
/// digraph.
using Factorization = std::vector<Permutation>;

enum class GraphFamily { kGeneric, kDirectedCycle, kBidirectedCycle };

/// An m-out-regular, m-in-regular digraph.
///
/// Line digraphs of depth d keep a reference to the base graph they were
/// built from; every vertex carries the (d+1)-tuple of base vertices of the
/// d-step path it stands for, oldest first. For base graphs the tuple is the
/// vertex itself. Immutable after construction.
class RegularDigraph {
 public:
  /// Builds a base graph from ordered out-neighbor lists. Coordinates default
  /// to the vertex index. Throws ErrorKind::kInvalidGraph unless every vertex
  /// has out- and in-degree equal to the common list length and there are no
  /// parallel arcs.
  static RegularDigraph from_out_lists(std::vector<std::vector<Vertex>> out,
                                       std::vector<long> coordinates = {},
                                       GraphFamily family = GraphFamily::kGeneric);

  std::size_t size() const noexcept { return size_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t depth() const noexcept { return depth_; }
  GraphFamily family() const noexcept { return family_; }

  std::span<const Vertex> out(Vertex v) const {
    return {out_.data() + v * degree_, degree_};
  }
  bool has_arc(Vertex from, Vertex to) const;

  /// Base-graph path of v, oldest vertex first; length depth()+1.
  std::span<const Vertex> path(Vertex v) const {
    return {paths_.data() + v * (depth_ + 1), depth_ + 1};
  }
  /// Base vertex the walker sits on when at v (the last path entry).
  Vertex current_position(Vertex v) const { return path(v).back(); }

  /// The depth-0 graph this one was derived from (itself for base graphs).
  const RegularDigraph& base() const { return base_ ? *base_ : *this; }

  /// Display coordinate of a base vertex (centered position on cycles).
  long base_coordinate(Vertex b) const { return base().coordinates_[b]; }
  /// Base vertex with the given display coordinate, if any.
  std::optional<Vertex> base_vertex_at(long coordinate) const;
  /// Display coordinate of the current position of v.
  long coordinate(Vertex v) const { return base_coordinate(current_position(v)); }

  /// Factorization of the base graph used for the first line-digraph level;
  /// empty for base graphs. Factor k holds the arcs taken with coin k.
  const Factorization& base_factorization() const { return base_factors_; }

  /// Looks a vertex up by its base path.
  std::optional<Vertex> find(std::span<const Vertex> path) const;

  std::vector<std::pair<Vertex, Vertex>> arcs() const;

  /// Dense (0,1) adjacency matrix. Intended for tests and small graphs.
  std::vector<std::vector<int>> adjacency_matrix() const;

 private:
  friend RegularDigraph line_digraph(const RegularDigraph&, const Factorization&);

  RegularDigraph() = default;

  std::size_t size_ = 0;
  std::size_t degree_ = 0;
  std::size_t depth_ = 0;
  GraphFamily family_ = GraphFamily::kGeneric;
  std::vector<Vertex> out_;    // size_ * degree_
  std::vector<Vertex> paths_;  // size_ * (depth_ + 1)
  std::vector<long> coordinates_;  // base graphs only
  std::shared_ptr<const RegularDigraph> base_;
  Factorization base_factors_;
  std::map<std::vector<Vertex>, Vertex> by_path_;
};

/// Bidirected n-cycle: vertex x has out-neighbors (x+1, x-1) mod n, in that
/// order. Coordinates are centered, i.e. [-(n-1)/2, (n-1)/2] for odd n.
RegularDigraph make_bidirected_cycle(std::size_t n);

/// Directed n-cycle x -> x+1 (1-regular).
RegularDigraph make_directed_cycle(std::size_t n);

/// Centered coordinate of index i on an n-cycle.
long centered_coordinate(std::size_t i, std::size_t n);

/// Splits an m-regular digraph into m arc-disjoint permutations by repeated
/// perfect matching on its out/in bipartite incidence graph. Without a seed
/// the matching visits vertices and arcs in natural order; with a seed both
/// orders are shuffled.
Factorization dicycle_factorization(const RegularDigraph& g,
                                    std::optional<std::uint64_t> seed = std::nullopt);

/// Throws ErrorKind::kInvalidGraph if f is not a dicycle factorization of g.
void check_factorization(const RegularDigraph& g, const Factorization& f);

/// Line digraph with the block labeling: vertex k*N + l is the arc
/// (D_k^{-1}(l), l) of g, so every block-row of the adjacency matrix equals
/// (M(D_1) ... M(D_m)).
RegularDigraph line_digraph(const RegularDigraph& g, const Factorization& f);

/// The dicycle factorization of L(g) whose s-th class takes block j to block
/// j+s (mod m) through D_{j+s}.
Factorization lift_factorization(const Factorization& f);

/// L^d(g), re-factorizing each level with lift_factorization.
RegularDigraph iterate_line_digraph(const RegularDigraph& g, std::size_t depth,
                                    const Factorization& f);
RegularDigraph iterate_line_digraph(const RegularDigraph& g, std::size_t depth);

/// Finite stand-in for the infinite line: L^d of a bidirected cycle of odd
/// size `window`, factorized by the +1 / -1 rotations.
RegularDigraph make_line_surrogate(std::size_t window, std::size_t depth);

/// Smallest odd window for which a walk started near the origin cannot wrap
/// within t_max steps.
std::size_t min_line_window(std::size_t t_max, std::size_t depth);

/// Signed step between two adjacent vertices of a bidirected cycle (+1/-1).
int cycle_step(Vertex from, Vertex to, std::size_t n);

}  // namespace qwm
