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
#include <span>
#include <string>
#include <vector>

#include "qwm/walk.hpp"

namespace qwm {

/// Probability of finding the walker at each display coordinate in
/// [min_position, min_position + size).
struct PositionDistribution {
  long min_position = 0;
  std::vector<double> probabilities;
  std::size_t time = 0;

  long max_position() const {
    return min_position + static_cast<long>(probabilities.size()) - 1;
  }
  /// P(x); zero outside the stored range.
  double at(long x) const;
  double total() const;
};

/// Sums |amplitude|^2 over every vertex whose current position is x and
/// every coin. Memory is traced out.
PositionDistribution position_marginal(const WalkState& s, const RegularDigraph& host);

double mean_position(const PositionDistribution& d);

/// sum p(x) x^2 - (sum p(x) x)^2.
double variance(const PositionDistribution& d);

/// Fraction of the `range` sites centered on the origin that carry
/// probability at least 1/range. Throws kInvalidArgument for range 0.
double occupancy_rate(const PositionDistribution& d, std::size_t range);

/// Largest |P(x) - Q(x)| over the union of both supports.
double max_abs_difference(const PositionDistribution& a, const PositionDistribution& b);

/// (1/2) sum |P(x) - Q(x)|.
double total_variation(const PositionDistribution& a, const PositionDistribution& b);

/// P(0, t) for every entry of the history.
std::vector<double> origin_probability_series(std::span<const PositionDistribution> history);

enum class ScalingVerdict { kBallistic, kDiffusive, kIndeterminate };

std::string to_string(ScalingVerdict v);

/// Thresholds used by classify_scaling.
struct ScalingThresholds {
  /// Ballistic when K2 t2^2 exceeds this multiple of |K1| t2.
  double ballistic_dominance = 4.0;
  /// Diffusive when K2 t2^2 is at most this fraction of K1 t2 (K1 > 0).
  double diffusive_quadratic_share = 0.25;
};

/// Least-squares fit of sigma^2(t) = K2 t^2 + K1 t + K0sq.
struct ScalingFit {
  double k2 = 0.0;
  double k1 = 0.0;
  double k0_squared = 0.0;
  double residual = 0.0;  // root-mean-square fit error
  ScalingVerdict verdict = ScalingVerdict::kIndeterminate;
};

/// Fits the variance series over t in [t_first, t_last]; variances[t] is the
/// variance at step t. Throws kInvalidArgument unless
/// t_last >= 2 * t_first >= 40 and the series covers t_last.
ScalingFit classify_scaling(std::span<const double> variances, std::size_t t_first,
                            std::size_t t_last, const ScalingThresholds& thresholds = {});

/// variance(t) / variance(t / 2).
double variance_growth_ratio(std::span<const double> variances, std::size_t t);

/// Memory-walk amplitudes beta_{p,x,c}: walker at x, previously at p = x -/+ 1,
/// coin c = +/-1. Stored over x in [-half_width, half_width].
class BetaField {
 public:
  explicit BetaField(long half_width);

  long half_width() const { return half_width_; }
  /// beta_{previous, current, coin}; zero when out of range or not adjacent.
  Amplitude get(long previous, long current, int coin) const;
  void set(long previous, long current, int coin, Amplitude value);
  double norm_squared() const;
  PositionDistribution marginal() const;

  std::size_t time = 0;

 private:
  std::size_t index(long previous, long current, int coin) const;
  bool contains(long previous, long current) const;

  long half_width_;
  std::vector<Amplitude> amps_;
};

/// Standard coined-walk amplitudes alpha_{x,c} over x in
/// [-half_width, half_width].
class AlphaField {
 public:
  explicit AlphaField(long half_width);

  long half_width() const { return half_width_; }
  Amplitude get(long x, int coin) const;
  void set(long x, int coin, Amplitude value);
  double norm_squared() const;
  PositionDistribution marginal() const;

  std::size_t time = 0;

 private:
  long half_width_;
  std::vector<Amplitude> amps_;
};

/// The four-term initial field 1/2, -1/2, -1/2, 1/2 on (-1,0) and (1,0).
BetaField initial_beta_field(long half_width);

/// One step of the reflect/transmit Hadamard memory walk written as a
/// recurrence on beta.
BetaField beta_recurrence_step(const BetaField& b);

/// Max over x of the two linear constraints
///   beta_{x,x+1,1} + beta_{x,x+1,-1} + beta_{x,x-1,1} + beta_{x,x-1,-1}
///   beta_{x+1,x,1} + beta_{x-1,x,1}
/// in magnitude.
double check_beta_constraint(const BetaField& b);

/// alpha_{x,1}  = (-1)^{(t+x)/2} e^{i pi/4} (-i beta_{x-1,x,1} - beta_{x-1,x,-1})
/// alpha_{x,-1} = (-1)^{(t+x)/2} e^{i pi/4} (-beta_{x+1,x,1} + i beta_{x+1,x,-1})
/// evaluated on the sublattice t + x even, with t = b.time. Throws
/// kInvalidArgument if b has weight on the odd sublattice.
AlphaField alpha_from_beta(const BetaField& b);

/// alpha_{0,1} = 1/sqrt2, alpha_{0,-1} = i/sqrt2.
AlphaField initial_alpha_field(long half_width);

/// One step of the Hadamard walk without memory, directly on alpha.
AlphaField hadamard_walk_step(const AlphaField& a);

/// Reads beta from a walk state on a depth-1 line surrogate.
BetaField beta_from_state(const WalkState& s, const RegularDigraph& host);

/// Result of grouping random dicycle factorizations (with the carried coin
/// shift) by the distribution histories they produce.
struct DistinctWalkCount {
  std::size_t class_count = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> class_of_seed;
  /// Partition restricted to the current positions -1, 0, 1: bit i is set
  /// when coin +1 continues straight at position i-1.
  std::vector<unsigned> key_of_seed;
  /// Classes whose seeds carry more than one key, or keys spread over more
  /// than one class.
  std::size_t key_mismatches = 0;
};

/// Simulates (random dicycle factorization(seed), carried coin shift) with a
/// Hadamard coin from a fixed set of initial states at the origin for t steps
/// and groups seeds whose position histories agree within
/// kCrossCheckTolerance for every initial state.
DistinctWalkCount count_distinct_dicycle_walks(std::span<const std::uint64_t> seeds,
                                               std::size_t t);

/// The initial states compared by count_distinct_dicycle_walks: the four
/// basis states at the origin plus two fixed superpositions.
std::vector<std::vector<BasisAmplitude>> origin_initial_states();

}  // namespace qwm
