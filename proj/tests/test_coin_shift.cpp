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
#include <memory>
#include <vector>

#include "qwm/coin_shift.hpp"
#include "qwm/error.hpp"
#include "qwm/walk.hpp"

using namespace qwm;

namespace {

std::shared_ptr<const RegularDigraph> line_host(std::size_t window, std::size_t depth = 1) {
  return std::make_shared<const RegularDigraph>(make_line_surrogate(window, depth));
}

// Shift bijectivity checked directly from the table, by counting hits.
bool shift_is_bijective(const Partition& p, const std::vector<Coin>& gc) {
  const std::size_t m = p.coins();
  std::vector<int> hits(p.host().size() * m, 0);
  for (Vertex v = 0; v < p.host().size(); ++v)
    for (Coin k = 0; k < m; ++k) ++hits[p.successor(k, v) * m + gc[v * m + k]];
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

std::vector<Coin> table_from_code(std::size_t code, std::size_t entries) {
  std::vector<Coin> t(entries);
  for (std::size_t i = 0; i < entries; ++i) t[i] = (code >> i) & 1;
  return t;
}

int sign_out(const CoinShift& gc, Vertex v, int in) { return coin_sign(gc(v, coin_from_sign(in))); }

std::vector<Partition> small_partitions(std::shared_ptr<const RegularDigraph> h) {
  std::vector<Partition> ps = {named_partition(NamedPartition::kRecycledCoin, h),
                               named_partition(NamedPartition::kReflectTransmit, h)};
  for (std::uint64_t s = 1; s <= 4; ++s) {
    ps.push_back(random_partition(h, s));
    ps.push_back(random_dicycle_factorization(h, s));
  }
  return ps;
}

}  // namespace

TEST_SUITE("coin_shift") {
  TEST_CASE("gc1 ignores the incoming coin") {
    auto h = line_host(9);
    const Partition pi1 = named_partition(NamedPartition::kRecycledCoin, h);
    const CoinShift gc = memory_coin_shift(pi1);
    for (Vertex v = 0; v < h->size(); ++v) CHECK(gc(v, 0) == gc(v, 1));
    // The emitted coin is the oldest remembered move.
    for (long x = -2; x <= 2; ++x) {
      const Vertex from_left = *h->find(std::vector<Vertex>{*h->base_vertex_at(x - 1),
                                                            *h->base_vertex_at(x)});
      CHECK(sign_out(gc, from_left, 1) == 1);
      CHECK(sign_out(gc, from_left, -1) == 1);
    }
  }

  TEST_CASE("gc1 is valid for every partition") {
    auto h = line_host(21);
    CHECK(validate_coin_shift(named_partition(NamedPartition::kRecycledCoin, h),
                              memory_coin_shift(named_partition(NamedPartition::kRecycledCoin, h)))
              .valid);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Partition p = random_partition(h, seed);
      CHECK(validate_coin_shift(p, memory_coin_shift(p)).valid);
    }
    auto h2 = line_host(11, 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Partition p = random_partition(h2, seed);
      CHECK(validate_coin_shift(p, memory_coin_shift(p)).valid);
    }
  }

  TEST_CASE("gc2 needs a dicycle factorization") {
    auto h = line_host(9);
    const Partition pi1 = named_partition(NamedPartition::kRecycledCoin, h);
    CHECK_THROWS_AS(carried_coin_shift(pi1), Error);
    try {
      carried_coin_shift(pi1);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kConstraintViolation);
    }
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    CHECK(validate_coin_shift(pi2, carried_coin_shift(pi2)).valid);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Partition p4 = random_dicycle_factorization(h, seed);
      CHECK(validate_coin_shift(p4, carried_coin_shift(p4)).valid);
      const Partition p3 = random_partition(h, seed);
      if (!p3.is_dicycle()) CHECK_THROWS_AS(carried_coin_shift(p3), Error);
    }
  }

  TEST_CASE("constant coin shift violates every target") {
    auto h = line_host(9);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const CoinShift constant(2, std::vector<Coin>(h->size() * 2, 0));
    const auto r = validate_coin_shift(pi2, constant);
    CHECK_FALSE(r.valid);
    CHECK(r.violations.size() == h->size());
  }

  TEST_CASE("enumeration matches an independent brute force") {
    auto h = line_host(3);  // three vertex pairs
    REQUIRE(h->size() == 6);
    for (const Partition& p : small_partitions(h)) {
      std::size_t brute = 0;
      for (std::size_t code = 0; code < (1u << 12); ++code)
        brute += shift_is_bijective(p, table_from_code(code, 12));
      const auto all = enumerate_coin_shifts(p);
      CHECK(all.size() == brute);
      CHECK(all.size() == 64);  // (m!)^|V|
      for (const auto& gc : all) CHECK(validate_coin_shift(p, gc).valid);
      CHECK(std::is_sorted(all.begin(), all.end(), [](const CoinShift& a, const CoinShift& b) {
        return std::lexicographical_compare(a.table().begin(), a.table().end(),
                                            b.table().begin(), b.table().end());
      }));
      CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    }
  }

  TEST_CASE("gc1 and gc2 both appear in the reflect/transmit enumeration") {
    auto h = line_host(3);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const auto all = enumerate_coin_shifts(pi2);
    CHECK(std::find(all.begin(), all.end(), memory_coin_shift(pi2)) != all.end());
    CHECK(std::find(all.begin(), all.end(), carried_coin_shift(pi2)) != all.end());
  }

  TEST_CASE("validator agrees with shift bijectivity on every table") {
    auto h = line_host(3);
    for (const Partition& p : small_partitions(h)) {
      for (std::size_t code = 0; code < (1u << 12); ++code) {
        const auto table = table_from_code(code, 12);
        const CoinShift gc(2, table);
        const bool valid = validate_coin_shift(p, gc).valid;
        CHECK(valid == shift_is_bijective(p, table));
        if (valid) {
          CHECK_NOTHROW(build_shift_operator(p, gc));
        } else {
          CHECK_THROWS_AS(build_shift_operator(p, gc), Error);
        }
      }
    }
  }

  TEST_CASE("pairing rules for paired vertices") {
    // Vertices i and i+N of the line digraph share their current position.
    auto h = line_host(3);
    const std::size_t n = h->base().size();
    for (const Partition& p : small_partitions(h)) {
      for (const auto& gc : enumerate_coin_shifts(p)) {
        for (Vertex i = 0; i < n; ++i) {
          const Vertex a = i, b = i + n;
          REQUIRE(h->current_position(a) == h->current_position(b));
          if (p.is_dicycle()) {
            CHECK(sign_out(gc, a, 1) == -sign_out(gc, b, -1));
            CHECK(sign_out(gc, a, -1) == -sign_out(gc, b, 1));
          } else if (p.successor(0, a) == p.successor(0, b)) {
            CHECK(sign_out(gc, a, 1) == -sign_out(gc, b, 1));
            CHECK(sign_out(gc, a, -1) == -sign_out(gc, b, -1));
          }
        }
      }
    }
  }

  TEST_CASE("enumeration refuses large hosts") {
    auto h = line_host(21);
    CHECK_THROWS_AS(enumerate_coin_shifts(named_partition(NamedPartition::kReflectTransmit, h)),
                    Error);
  }
}
