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
#include <numeric>
#include <set>
#include <vector>

#include "qwm/analysis.hpp"
#include "qwm/error.hpp"
#include "qwm/random.hpp"

using namespace qwm;

namespace {

PositionDistribution dist(long min, std::vector<double> p) {
  PositionDistribution d;
  d.min_position = min;
  d.probabilities = std::move(p);
  return d;
}

std::shared_ptr<const RegularDigraph> line_host(std::size_t window) {
  return std::make_shared<const RegularDigraph>(make_line_surrogate(window, 1));
}

// Dicycle partition chosen site by site: bit x set means coin +1 continues
// straight through site x.
Partition partition_from_bits(std::shared_ptr<const RegularDigraph> h,
                              const std::vector<bool>& straight_by_site) {
  const std::size_t n = h->base().size();
  std::vector<Vertex> table(h->size() * 2);
  const Coin plus = coin_from_sign(+1), minus = coin_from_sign(-1);
  for (Vertex here = 0; here < n; ++here) {
    const Vertex left = (here + n - 1) % n, right = (here + 1) % n;
    const Vertex from_left = *h->find(std::vector<Vertex>{left, here});
    const Vertex from_right = *h->find(std::vector<Vertex>{right, here});
    const Vertex forward = *h->find(std::vector<Vertex>{here, right});
    const Vertex back = *h->find(std::vector<Vertex>{here, left});
    const bool s = straight_by_site[here];
    table[from_left * 2 + plus] = s ? forward : back;
    table[from_right * 2 + plus] = s ? back : forward;
    table[from_left * 2 + minus] = s ? back : forward;
    table[from_right * 2 + minus] = s ? forward : back;
  }
  return Partition(h, table);
}

std::vector<std::vector<PositionDistribution>> histories(const Partition& p, std::size_t t) {
  const Walk w(p, carried_coin_shift(p), CoinMatrix::hadamard());
  std::vector<std::vector<PositionDistribution>> out;
  for (const auto& terms : origin_initial_states()) {
    std::vector<PositionDistribution> h;
    evolve(w, make_state(p.host(), terms), t,
           [&](const WalkState& s) { h.push_back(position_marginal(s, p.host())); });
    out.push_back(std::move(h));
  }
  return out;
}

double worst_difference(const std::vector<std::vector<PositionDistribution>>& a,
                        const std::vector<std::vector<PositionDistribution>>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t t = 0; t < a[i].size(); ++t)
      worst = std::max(worst, max_abs_difference(a[i][t], b[i][t]));
  return worst;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("marginal statistics") {
    const auto d = dist(-1, {0.25, 0.5, 0.25});
    CHECK(d.total() == doctest::Approx(1.0));
    CHECK(mean_position(d) == doctest::Approx(0.0));
    CHECK(variance(d) == doctest::Approx(0.5));
    CHECK(d.at(5) == 0.0);

    const auto shifted = dist(2, {0.5, 0.5});
    CHECK(mean_position(shifted) == doctest::Approx(2.5));
    CHECK(variance(shifted) == doctest::Approx(0.25));
    CHECK(total_variation(d, shifted) == doctest::Approx(1.0));
    CHECK(max_abs_difference(d, d) == 0.0);
  }

  TEST_CASE("occupancy rate") {
    CHECK(occupancy_rate(dist(-1, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 3) == doctest::Approx(1.0));
    CHECK(occupancy_rate(dist(0, {1.0}), 5) == doctest::Approx(0.2));
    CHECK(occupancy_rate(dist(-2, {0.1, 0.1, 0.6, 0.1, 0.1}), 5) == doctest::Approx(0.2));
    CHECK_THROWS_AS(occupancy_rate(dist(0, {1.0}), 0), Error);
  }

  TEST_CASE("one Hadamard step from the origin has unit variance") {
    auto h = line_host(9);
    const Partition pi2 = named_partition(NamedPartition::kReflectTransmit, h);
    const Walk w(pi2, carried_coin_shift(pi2), CoinMatrix::hadamard());
    WalkState s = make_state(*h, symmetric_equivalence_state());
    w.step(s);
    const auto d = position_marginal(s, *h);
    CHECK(d.total() == doctest::Approx(1.0));
    CHECK(variance(d) == doctest::Approx(1.0));
  }

  TEST_CASE("scaling fits on synthetic series") {
    std::vector<double> ballistic(201), diffusive(201);
    for (std::size_t t = 0; t <= 200; ++t) {
      ballistic[t] = 0.3 * t * t + 0.5 * t + 1.0;
      diffusive[t] = 2.0 * t + 3.0;
    }
    const auto b = classify_scaling(ballistic, 50, 200);
    CHECK(b.verdict == ScalingVerdict::kBallistic);
    CHECK(b.k2 == doctest::Approx(0.3));
    CHECK(b.residual < 1e-8);
    const auto d = classify_scaling(diffusive, 50, 200);
    CHECK(d.verdict == ScalingVerdict::kDiffusive);
    CHECK(d.k1 == doctest::Approx(2.0));
    CHECK(variance_growth_ratio(ballistic, 200) == doctest::Approx(3.96).epsilon(0.01));
    CHECK(variance_growth_ratio(diffusive, 200) == doctest::Approx(1.985).epsilon(0.01));

    CHECK_THROWS_AS(classify_scaling(ballistic, 10, 200), Error);
    CHECK_THROWS_AS(classify_scaling(std::vector<double>(50, 1.0), 20, 60), Error);
  }

  TEST_CASE("beta field constraints") {
    CHECK(check_beta_constraint(BetaField(10)) == 0.0);
    BetaField b = initial_beta_field(110);
    CHECK(b.norm_squared() == doctest::Approx(1.0));
    double worst = check_beta_constraint(b);
    for (int t = 0; t < 100; ++t) {
      b = beta_recurrence_step(b);
      worst = std::max(worst, check_beta_constraint(b));
      CHECK(std::abs(b.norm_squared() - 1.0) < 1e-12);
    }
    CHECK(worst < 1e-12);

    Rng rng(11);
    BetaField r(5);
    for (long x = -5; x <= 5; ++x)
      for (long p : {x - 1, x + 1})
        for (int c : {1, -1})
          r.set(p, x, c, {static_cast<double>(rng() % 1000) / 1000.0, 0.0});
    CHECK(check_beta_constraint(r) > 1e-3);
  }

  TEST_CASE("alpha reconstructed from beta matches the memoryless walk") {
    BetaField b = initial_beta_field(110);
    AlphaField a = initial_alpha_field(110);
    const AlphaField a0 = alpha_from_beta(b);
    for (long x = -2; x <= 2; ++x)
      for (int c : {1, -1}) CHECK(std::abs(a0.get(x, c) - a.get(x, c)) < 1e-15);
    double worst = 0.0, tv = 0.0;
    for (int t = 1; t <= 100; ++t) {
      b = beta_recurrence_step(b);
      a = hadamard_walk_step(a);
      const AlphaField rec = alpha_from_beta(b);
      for (long x = -105; x <= 105; ++x)
        for (int c : {1, -1}) worst = std::max(worst, std::abs(rec.get(x, c) - a.get(x, c)));
      tv = std::max(tv, total_variation(b.marginal(), a.marginal()));
    }
    CHECK(worst < 1e-10);
    CHECK(tv < 1e-10);
  }

  TEST_CASE("walks with the same local partition near the origin agree") {
    const std::size_t t = 20;
    auto h = line_host(min_line_window(t, 1));
    const std::size_t n = h->base().size();
    const Vertex origin = *h->base_vertex_at(0);
    Rng rng(5);
    std::vector<bool> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng() & 1;
      b[i] = rng() & 1;
    }
    for (long x = -1; x <= 1; ++x) b[(origin + n + x) % n] = a[(origin + n + x) % n];
    const Partition pa = partition_from_bits(h, a), pb = partition_from_bits(h, b);
    REQUIRE(pa.is_dicycle());
    REQUIRE(pb.is_dicycle());
    CHECK(worst_difference(histories(pa, t), histories(pb, t)) < kCrossCheckTolerance);

    std::vector<bool> c = a;
    c[origin] = !c[origin];
    CHECK(worst_difference(histories(pa, t), histories(partition_from_bits(h, c), t)) > 1e-3);
  }

  TEST_CASE("support keeps the parity of t") {
    const std::size_t t = 15;
    auto h = line_host(min_line_window(t, 1));
    const Partition p = random_partition(h, 8);
    const Walk w(p, memory_coin_shift(p), CoinMatrix::hadamard());
    evolve(w, make_state(*h, symmetric_equivalence_state()), t, [&](const WalkState& s) {
      const auto d = position_marginal(s, *h);
      for (long x = d.min_position; x <= d.max_position(); ++x)
        if ((x + static_cast<long>(s.time)) % 2 != 0) CHECK(d.at(x) == 0.0);
    });
  }

  TEST_CASE("distinct dicycle walks are labelled by the partition near the origin") {
    std::vector<std::uint64_t> seeds(50);
    std::iota(seeds.begin(), seeds.end(), 1);
    const auto r = count_distinct_dicycle_walks(seeds, 30);
    CHECK(r.class_count <= 8);
    CHECK(r.class_count >= 2);
    CHECK(r.key_mismatches == 0);
    CHECK(std::set<unsigned>(r.key_of_seed.begin(), r.key_of_seed.end()).size() ==
          r.class_count);
    CHECK(count_distinct_dicycle_walks({}, 30).class_count == 0);
  }
}
