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

#include <cmath>
#include <memory>
#include <vector>

#include "qwm/analysis.hpp"
#include "qwm/error.hpp"
#include "qwm/experiment.hpp"
#include "qwm/oracles.hpp"
#include "qwm/random.hpp"
#include "qwm/walk.hpp"

using namespace qwm;

namespace {

std::shared_ptr<const RegularDigraph> line_host(std::size_t window, std::size_t depth = 1) {
  return std::make_shared<const RegularDigraph>(make_line_surrogate(window, depth));
}

double uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

WalkState random_state(std::size_t vertices, std::size_t coins, Rng& rng) {
  WalkState s(vertices, coins);
  for (auto& a : s.amplitudes()) a = {uniform(rng) - 0.5, uniform(rng) - 0.5};
  const double n = std::sqrt(s.norm_squared());
  for (auto& a : s.amplitudes()) a /= n;
  return s;
}

double max_diff(const WalkState& a, const WalkState& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
    worst = std::max(worst, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  return worst;
}

Vertex vertex_at(const RegularDigraph& h, std::vector<long> coords) {
  std::vector<Vertex> path;
  for (long x : coords) path.push_back(*h.base_vertex_at(x));
  return *h.find(path);
}

}  // namespace

TEST_SUITE("walk") {
  TEST_CASE("coin step") {
    Rng rng(7);
    const WalkState s = random_state(6, 2, rng);
    CHECK(max_diff(coin_step(s, CoinMatrix::identity(2)), s) == 0.0);

    WalkState basis(1, 2);
    basis.at(0, coin_from_sign(+1)) = 1.0;
    const WalkState h = coin_step(basis, CoinMatrix::hadamard());
    CHECK(std::abs(h.at(0, coin_from_sign(+1)) - M_SQRT1_2) < 1e-15);
    CHECK(std::abs(h.at(0, coin_from_sign(-1)) - M_SQRT1_2) < 1e-15);

    WalkState minus(1, 2);
    minus.at(0, coin_from_sign(-1)) = 1.0;
    const WalkState hm = coin_step(minus, CoinMatrix::hadamard());
    CHECK(std::abs(hm.at(0, coin_from_sign(+1)) - M_SQRT1_2) < 1e-15);
    CHECK(std::abs(hm.at(0, coin_from_sign(-1)) + M_SQRT1_2) < 1e-15);

    for (int i = 0; i < 200; ++i) {
      const WalkState r = random_state(10, 2, rng);
      CHECK(std::abs(coin_step(r, CoinMatrix::hadamard()).norm_squared() - 1.0) <
            kUnitaryTolerance);
    }
  }

  TEST_CASE("coin matrices must be unitary") {
    CHECK(CoinMatrix::hadamard().unitarity_residual() < 1e-15);
    CHECK_THROWS_AS(CoinMatrix(2, {1.0, 1.0, 0.0, 1.0}), Error);
  }

  TEST_CASE("shift operators") {
    const ShiftOp id = ShiftOp::identity(4, 2);
    Rng rng(3);
    const WalkState s = random_state(4, 2, rng);
    CHECK(max_diff(shift_step(s, id), s) == 0.0);
    CHECK_THROWS_AS(ShiftOp(2, 2, {0, 0, 1, 2}), Error);

    auto h = line_host(9);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const ShiftOp op = build_shift_operator(pi2, carried_coin_shift(pi2));
    CHECK(is_permutation_table(op.images()));
    const WalkState r = random_state(h->size(), 2, rng);
    CHECK(max_diff(shift_step(shift_step(r, op), op.inverse()), r) == 0.0);

    // Transmission: |(-1,0), -1> -> |(0,1), -1>; reflection: |(-1,0), +1> -> |(0,-1), +1>.
    WalkState b(h->size(), 2);
    b.at(vertex_at(*h, {-1, 0}), coin_from_sign(-1)) = 1.0;
    const WalkState moved = shift_step(b, op);
    CHECK(moved.at(vertex_at(*h, {0, 1}), coin_from_sign(-1)) == Amplitude(1.0));
    WalkState c(h->size(), 2);
    c.at(vertex_at(*h, {-1, 0}), coin_from_sign(+1)) = 1.0;
    CHECK(shift_step(c, op).at(vertex_at(*h, {0, -1}), coin_from_sign(+1)) == Amplitude(1.0));
  }

  TEST_CASE("a constant coin shift cannot build a shift") {
    auto h = line_host(9);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    try {
      build_shift_operator(pi2, CoinShift(2, std::vector<Coin>(h->size() * 2, 0)));
      FAIL("expected a constraint violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kConstraintViolation);
    }
  }

  TEST_CASE("evolve at t = 0 returns the initial state") {
    auto h = line_host(9);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const Walk w(pi2, carried_coin_shift(pi2), CoinMatrix::hadamard());
    const WalkState s = make_state(*h, symmetric_equivalence_state());
    const auto hist = evolve(w, s, 0);
    REQUIRE(hist.size() == 1);
    CHECK(max_diff(hist[0], s) == 0.0);
    CHECK(evolve(w, s, 3).back().time == 3);
  }

  TEST_CASE("oracle: identity coin moves the recycled walk straight") {
    const std::vector<RecycledCoinTerm> init = {{0, {1}, 1, 1.0}};
    const auto hist = recycled_coin_walk(11, 1, CoinMatrix::identity(2), init, 3);
    CHECK(hist[3].at(3) == doctest::Approx(1.0));
  }

  TEST_CASE("oracle: pure transmission and pure reflection") {
    const auto id = CoinMatrix::identity(2);
    const std::vector<ReflectTransmitTerm> go = {{0, -1, -1, 1.0}};
    const auto hist = reflect_transmit_walk(11, id, go, 3);
    CHECK(hist[3].at(3) == doctest::Approx(1.0));

    const std::vector<ReflectTransmitTerm> bounce = {{0, -1, 1, 1.0}};
    const auto b = reflect_transmit_walk(11, id, bounce, 4);
    for (std::size_t t = 0; t <= 4; ++t) CHECK(b[t].at(t % 2 == 0 ? 0 : -1) == doctest::Approx(1.0));
  }

  TEST_CASE("engine and oracles agree on random initial states") {
    CHECK(recycled_correspondence(1, 3, 30, 5) < 1e-12);
    CHECK(recycled_correspondence(2, 3, 30, 5) < 1e-12);
    CHECK(reflect_transmit_correspondence(3, 30, 5) < 1e-12);
  }

  TEST_CASE("engine reproduces the beta recurrence") {
    auto h = line_host(15);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const Walk w(pi2, carried_coin_shift(pi2), CoinMatrix::hadamard());
    WalkState s = make_state(*h, symmetric_equivalence_state());
    BetaField b = initial_beta_field(7);
    for (int t = 0; t < 2; ++t) {
      w.step(s);
      b = beta_recurrence_step(b);
    }
    const BetaField e = beta_from_state(s, *h);
    double worst = 0.0;
    for (long x = -5; x <= 5; ++x)
      for (long p : {x - 1, x + 1})
        for (int c : {1, -1}) worst = std::max(worst, std::abs(e.get(p, x, c) - b.get(p, x, c)));
    CHECK(worst < 1e-15);
  }

  TEST_CASE("norm is conserved over 200 steps") {
    auto h = line_host(min_line_window(200, 1));
    const Partition p = random_partition(h, 4);
    const Walk w(p, memory_coin_shift(p), CoinMatrix::hadamard());
    double drift = 0.0;
    evolve(w, make_state(*h, symmetric_equivalence_state()), 200,
           [&](const WalkState& s) { drift = std::max(drift, std::abs(s.norm_squared() - 1.0)); });
    CHECK(drift < 1e-12);
  }

  TEST_CASE("no weight reaches the window edge") {
    const std::size_t t = 20;
    auto h = line_host(min_line_window(t, 1));
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const Walk w(pi2, memory_coin_shift(pi2), CoinMatrix::hadamard());
    const WalkState s = make_state(*h, symmetric_equivalence_state());
    CHECK_NOTHROW(require_no_wrap(*h, s, t));
    CHECK_THROWS_AS(require_no_wrap(*h, s, t + 5), Error);
    const long half = static_cast<long>(h->base().size() - 1) / 2;
    evolve(w, s, t, [&](const WalkState& st) {
      const auto d = position_marginal(st, *h);
      CHECK(d.at(half) == 0.0);
      CHECK(d.at(-half) == 0.0);
    });
  }

  TEST_CASE("make_state rejects bad input") {
    auto h = line_host(9);
    const std::vector<BasisAmplitude> wrong_length = {{{0}, 0, 1.0}};
    CHECK_THROWS_AS(make_state(*h, wrong_length), Error);
    const std::vector<BasisAmplitude> not_a_walk = {{{0, 2}, 0, 1.0}};
    CHECK_THROWS_AS(make_state(*h, not_a_walk), Error);
    const std::vector<BasisAmplitude> outside = {{{10, 11}, 0, 1.0}};
    CHECK_THROWS_AS(make_state(*h, outside), Error);
    const std::vector<BasisAmplitude> unnormalized = {{{0, 1}, 0, 0.5}};
    CHECK_THROWS_AS(make_state(*h, unnormalized), Error);
    try {
      make_state(*h, unnormalized);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidSpec);
    }
  }
}
