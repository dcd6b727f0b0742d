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

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "qwm/error.hpp"
#include "qwm/graph.hpp"

using namespace qwm;

namespace {

std::set<Vertex> out_set(const RegularDigraph& g, Vertex v) {
  auto o = g.out(v);
  return {o.begin(), o.end()};
}

// Circulant digraph: v -> v + s (mod n) for every s in steps.
RegularDigraph circulant(std::size_t n, std::vector<std::size_t> steps) {
  std::vector<std::vector<Vertex>> out(n);
  for (Vertex v = 0; v < n; ++v)
    for (auto s : steps) out[v].push_back((v + s) % n);
  return RegularDigraph::from_out_lists(std::move(out));
}

// Independent check that f splits the arcs of g into permutations.
bool is_dicycle_factorization(const RegularDigraph& g, const Factorization& f) {
  if (f.size() != g.degree()) return false;
  std::multiset<std::pair<Vertex, Vertex>> used;
  for (const auto& perm : f) {
    std::vector<Vertex> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (Vertex v = 0; v < g.size(); ++v)
      if (sorted[v] != v) return false;
    for (Vertex v = 0; v < g.size(); ++v) used.insert({v, perm[v]});
  }
  const auto arcs = g.arcs();
  return std::multiset<std::pair<Vertex, Vertex>>(arcs.begin(), arcs.end()) == used;
}

void check_regular(const RegularDigraph& g) {
  const auto a = g.adjacency_matrix();
  for (std::size_t i = 0; i < g.size(); ++i) {
    int row = 0, col = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      row += a[i][j];
      col += a[j][i];
    }
    CHECK(row == static_cast<int>(g.degree()));
    CHECK(col == static_cast<int>(g.degree()));
  }
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("bidirected cycle adjacency") {
    const auto g3 = make_bidirected_cycle(3);
    CHECK(out_set(g3, 0) == std::set<Vertex>{1, 2});
    CHECK(out_set(g3, 1) == std::set<Vertex>{0, 2});
    CHECK(out_set(g3, 2) == std::set<Vertex>{0, 1});

    const auto g5 = make_bidirected_cycle(5);
    const Vertex origin = *g5.base_vertex_at(0);
    std::set<long> neighbors;
    for (Vertex w : g5.out(origin)) neighbors.insert(g5.base_coordinate(w));
    CHECK(neighbors == std::set<long>{-1, 1});
    CHECK(g5.base_coordinate(*g5.base_vertex_at(-2)) == -2);
    CHECK_FALSE(g5.base_vertex_at(3).has_value());
  }

  TEST_CASE("degenerate cycles are rejected") {
    CHECK_THROWS_AS(make_bidirected_cycle(2), Error);
    try {
      make_bidirected_cycle(2);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidGraph);
    }
  }

  TEST_CASE("irregular and parallel-arc inputs are rejected") {
    CHECK_THROWS_AS(RegularDigraph::from_out_lists({{1, 2}, {0, 2}, {0, 0}}), Error);
    CHECK_THROWS_AS(RegularDigraph::from_out_lists({{1}, {0}, {0}}), Error);
  }

  TEST_CASE("dicycle factorization of small graphs") {
    const auto c4 = make_bidirected_cycle(4);
    CHECK(is_dicycle_factorization(c4, dicycle_factorization(c4)));

    const auto d3 = make_directed_cycle(3);
    const auto f = dicycle_factorization(d3);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == Permutation{1, 2, 0});

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = circulant(9, {1, 2, 5});
      CHECK(is_dicycle_factorization(g, dicycle_factorization(g, seed)));
    }
  }

  TEST_CASE("seeded factorizations are reproducible") {
    const auto g = circulant(11, {1, 3, 4, 7});
    CHECK(dicycle_factorization(g, 5) == dicycle_factorization(g, 5));
  }

  TEST_CASE("invalid factorization is rejected") {
    const auto g = make_bidirected_cycle(5);
    Factorization bad(2, Permutation{1, 2, 3, 4, 0});  // both classes the same rotation
    CHECK_THROWS_AS(line_digraph(g, bad), Error);
  }

  TEST_CASE("line digraph of a directed cycle is a directed cycle") {
    const auto d3 = make_directed_cycle(3);
    const auto l = line_digraph(d3, dicycle_factorization(d3));
    CHECK(l.size() == 3);
    CHECK(l.degree() == 1);
    for (Vertex v = 0; v < 3; ++v) {
      // Following the unique out-arc three times returns to v.
      Vertex w = v;
      for (int i = 0; i < 3; ++i) w = l.out(w)[0];
      CHECK(w == v);
      CHECK(l.out(v)[0] != v);
    }
  }

  TEST_CASE("line digraph matches the arc-set definition") {
    const auto g = make_bidirected_cycle(5);
    const auto f = dicycle_factorization(g);
    const auto l = line_digraph(g, f);
    REQUIRE(l.size() == 10);
    // Vertices are exactly the arcs of g, each once.
    std::set<std::pair<Vertex, Vertex>> labels;
    for (Vertex v = 0; v < l.size(); ++v) {
      const auto p = l.path(v);
      REQUIRE(p.size() == 2);
      CHECK(g.has_arc(p[0], p[1]));
      labels.insert({p[0], p[1]});
    }
    const auto arcs = g.arcs();
    CHECK(labels == std::set<std::pair<Vertex, Vertex>>(arcs.begin(), arcs.end()));
    // ((a,b),(c,d)) is an arc iff b == c.
    for (Vertex u = 0; u < l.size(); ++u)
      for (Vertex v = 0; v < l.size(); ++v)
        CHECK(l.has_arc(u, v) == (l.path(u)[1] == l.path(v)[0]));
  }

  TEST_CASE("block rows of the line digraph adjacency are identical") {
    for (const auto& g : {make_bidirected_cycle(5), circulant(7, {1, 2, 4})}) {
      const auto f = dicycle_factorization(g, 3);
      const auto l = line_digraph(g, f);
      const auto a = l.adjacency_matrix();
      const std::size_t n = g.size(), m = g.degree();
      for (std::size_t k = 1; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) CHECK(a[k * n + i] == a[i]);
      // Each block row is (M(D_1) ... M(D_m)).
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t c = 0; c < n; ++c)
            CHECK(a[i][j * n + c] == (f[j][i] == c ? 1 : 0));
    }
  }

  TEST_CASE("iterated line digraphs") {
    const std::size_t n = 7;
    const auto g = make_bidirected_cycle(n);
    const auto l0 = iterate_line_digraph(g, 0);
    CHECK(l0.size() == n);
    CHECK(l0.arcs() == g.arcs());

    const auto l1 = iterate_line_digraph(g, 1);
    CHECK(l1.size() == 2 * n);
    for (Vertex v = 0; v < l1.size(); ++v) {
      const long prev = l1.base_coordinate(l1.path(v)[0]);
      const long cur = l1.coordinate(v);
      const long step = ((cur - prev) % 7 + 7) % 7;
      CHECK((step == 1 || step == 6));
    }

    const auto l2 = iterate_line_digraph(g, 2);
    CHECK(l2.size() == 4 * n);
    std::set<std::vector<Vertex>> walks;  // brute-force 2-step walks
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b : g.out(a))
        for (Vertex c : g.out(b)) walks.insert({a, b, c});
    std::set<std::vector<Vertex>> paths;
    for (Vertex v = 0; v < l2.size(); ++v) {
      const auto p = l2.path(v);
      paths.insert({p.begin(), p.end()});
    }
    CHECK(paths == walks);
  }

  TEST_CASE("regularity and vertex count are preserved under iteration") {
    for (const auto& g : {make_bidirected_cycle(5), circulant(5, {1, 2, 3})}) {
      std::size_t expected = g.size();
      for (std::size_t d = 0; d <= 3; ++d) {
        const auto l = iterate_line_digraph(g, d);
        CHECK(l.size() == expected);
        CHECK(l.depth() == d);
        check_regular(l);
        for (Vertex v = 0; v < l.size(); ++v) {
          const auto p = l.path(v);
          for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(g.has_arc(p[i], p[i + 1]));
        }
        expected *= g.degree();
      }
    }
  }

  TEST_CASE("lifted factorization stays a dicycle factorization") {
    const auto g = circulant(5, {1, 2, 3});
    const auto f = dicycle_factorization(g);
    const auto l = line_digraph(g, f);
    CHECK(is_dicycle_factorization(l, lift_factorization(f)));
  }

  TEST_CASE("current position is the last path entry") {
    const auto l2 = make_line_surrogate(9, 2);
    for (const std::vector<long> coords : {std::vector<long>{-2, -1, 0}, {2, 1, 0}, {0, 1, 2}}) {
      std::vector<Vertex> path;
      for (long x : coords) path.push_back(*l2.base_vertex_at(x));
      const auto v = l2.find(path);
      REQUIRE(v.has_value());
      CHECK(l2.coordinate(*v) == coords.back());
      CHECK(l2.current_position(*v) == path.back());
    }
  }

  TEST_CASE("line surrogate window") {
    CHECK(min_line_window(100, 1) == 205);
    CHECK_THROWS_AS(make_line_surrogate(10, 1), Error);
    const auto l = make_line_surrogate(11, 1);
    CHECK(l.size() == 22);
    CHECK(l.family() == GraphFamily::kBidirectedCycle);
  }
}
