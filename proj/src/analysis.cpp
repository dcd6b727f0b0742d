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

#include "qwm/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qwm/error.hpp"

namespace qwm {

double PositionDistribution::at(long x) const {
  if (x < min_position || x > max_position()) return 0.0;
  return probabilities[static_cast<std::size_t>(x - min_position)];
}

double PositionDistribution::total() const {
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  return sum;
}

PositionDistribution position_marginal(const WalkState& s, const RegularDigraph& host) {
  const RegularDigraph& base = host.base();
  long lo = 0, hi = 0;
  for (Vertex b = 0; b < base.size(); ++b) {
    lo = std::min(lo, base.base_coordinate(b));
    hi = std::max(hi, base.base_coordinate(b));
  }
  PositionDistribution d;
  d.min_position = lo;
  d.probabilities.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  d.time = s.time;
  for (Vertex v = 0; v < s.vertices(); ++v) {
    double p = 0.0;
    for (Coin c = 0; c < s.coins(); ++c) p += std::norm(s.at(v, c));
    d.probabilities[static_cast<std::size_t>(host.coordinate(v) - lo)] += p;
  }
  return d;
}

double mean_position(const PositionDistribution& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.probabilities.size(); ++i)
    m += d.probabilities[i] * static_cast<double>(d.min_position + static_cast<long>(i));
  return m;
}

double variance(const PositionDistribution& d) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
    const double x = static_cast<double>(d.min_position + static_cast<long>(i));
    m1 += d.probabilities[i] * x;
    m2 += d.probabilities[i] * x * x;
  }
  return m2 - m1 * m1;
}

double occupancy_rate(const PositionDistribution& d, std::size_t range) {
  if (range == 0) fail(ErrorKind::kInvalidArgument, "occupancy rate needs a range >= 1");
  const auto n = static_cast<long>(range);
  const long lo = -(n - 1) / 2;
  const double threshold = 1.0 / static_cast<double>(range);
  std::size_t count = 0;
  for (long x = lo; x < lo + n; ++x)
    // A hair of slack so exact ties such as a uniform 1/N survive rounding.
    if (d.at(x) >= threshold * (1.0 - 1e-12)) ++count;
  return static_cast<double>(count) / static_cast<double>(range);
}

double max_abs_difference(const PositionDistribution& a, const PositionDistribution& b) {
  const long lo = std::min(a.min_position, b.min_position);
  const long hi = std::max(a.max_position(), b.max_position());
  double worst = 0.0;
  for (long x = lo; x <= hi; ++x) worst = std::max(worst, std::abs(a.at(x) - b.at(x)));
  return worst;
}

double total_variation(const PositionDistribution& a, const PositionDistribution& b) {
  const long lo = std::min(a.min_position, b.min_position);
  const long hi = std::max(a.max_position(), b.max_position());
  double sum = 0.0;
  for (long x = lo; x <= hi; ++x) sum += std::abs(a.at(x) - b.at(x));
  return 0.5 * sum;
}

std::vector<double> origin_probability_series(std::span<const PositionDistribution> history) {
  std::vector<double> series;
  series.reserve(history.size());
  for (const auto& d : history) series.push_back(d.at(0));
  return series;
}

std::string to_string(ScalingVerdict v) {
  switch (v) {
    case ScalingVerdict::kBallistic: return "ballistic";
    case ScalingVerdict::kDiffusive: return "diffusive";
    case ScalingVerdict::kIndeterminate: return "indeterminate";
  }
  return "indeterminate";
}

ScalingFit classify_scaling(std::span<const double> variances, std::size_t t_first,
                            std::size_t t_last, const ScalingThresholds& thresholds) {
  if (t_first < 20 || t_last < 2 * t_first)
    fail(ErrorKind::kInvalidArgument, "scaling fit needs t_last >= 2 * t_first >= 40");
  if (variances.size() <= t_last)
    fail(ErrorKind::kInvalidArgument, "variance series too short for the fit window");

  const auto rows = static_cast<Eigen::Index>(t_last - t_first + 1);
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double t = static_cast<double>(t_first) + static_cast<double>(r);
    design(r, 0) = t * t;
    design(r, 1) = t;
    design(r, 2) = 1.0;
    rhs(r) = variances[t_first + static_cast<std::size_t>(r)];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);

  ScalingFit fit;
  fit.k2 = coef(0);
  fit.k1 = coef(1);
  fit.k0_squared = coef(2);
  fit.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(rows));

  const double t2 = static_cast<double>(t_last);
  const double quadratic = fit.k2 * t2 * t2;
  const double linear = fit.k1 * t2;
  if (fit.k2 > 0 && quadratic > thresholds.ballistic_dominance * std::abs(linear))
    fit.verdict = ScalingVerdict::kBallistic;
  else if (fit.k1 > 0 && std::abs(quadratic) <= thresholds.diffusive_quadratic_share * linear)
    fit.verdict = ScalingVerdict::kDiffusive;
  return fit;
}

double variance_growth_ratio(std::span<const double> variances, std::size_t t) {
  if (t < 2 || variances.size() <= t)
    fail(ErrorKind::kInvalidArgument, "variance series too short for the growth ratio");
  return variances[t] / variances[t / 2];
}

// --- BetaField -------------------------------------------------------------

namespace {

std::size_t coin_slot(int coin) {
  if (coin != 1 && coin != -1) fail(ErrorKind::kInvalidArgument, "coin must be +1 or -1");
  return coin > 0 ? 0 : 1;
}

const Amplitude kI{0.0, 1.0};

}  // namespace

BetaField::BetaField(long half_width)
    : half_width_(half_width),
      amps_(static_cast<std::size_t>(2 * half_width + 1) * 4, 0.0) {
  if (half_width < 1) fail(ErrorKind::kInvalidArgument, "field half width must be >= 1");
}

bool BetaField::contains(long previous, long current) const {
  return std::abs(previous - current) == 1 && current >= -half_width_ &&
         current <= half_width_;
}

std::size_t BetaField::index(long previous, long current, int coin) const {
  const std::size_t side = previous < current ? 0 : 1;
  return (static_cast<std::size_t>(current + half_width_) * 2 + side) * 2 + coin_slot(coin);
}

Amplitude BetaField::get(long previous, long current, int coin) const {
  if (!contains(previous, current)) return 0.0;
  return amps_[index(previous, current, coin)];
}

void BetaField::set(long previous, long current, int coin, Amplitude value) {
  if (!contains(previous, current))
    fail(ErrorKind::kInvalidArgument, "beta index outside the field");
  amps_[index(previous, current, coin)] = value;
}

double BetaField::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

PositionDistribution BetaField::marginal() const {
  PositionDistribution d;
  d.min_position = -half_width_;
  d.time = time;
  d.probabilities.assign(static_cast<std::size_t>(2 * half_width_ + 1), 0.0);
  for (long x = -half_width_; x <= half_width_; ++x) {
    double p = 0.0;
    for (long prev : {x - 1, x + 1})
      for (int c : {1, -1}) p += std::norm(get(prev, x, c));
    d.probabilities[static_cast<std::size_t>(x + half_width_)] = p;
  }
  return d;
}

AlphaField::AlphaField(long half_width)
    : half_width_(half_width), amps_(static_cast<std::size_t>(2 * half_width + 1) * 2, 0.0) {
  if (half_width < 1) fail(ErrorKind::kInvalidArgument, "field half width must be >= 1");
}

Amplitude AlphaField::get(long x, int coin) const {
  if (x < -half_width_ || x > half_width_) return 0.0;
  return amps_[static_cast<std::size_t>(x + half_width_) * 2 + coin_slot(coin)];
}

void AlphaField::set(long x, int coin, Amplitude value) {
  if (x < -half_width_ || x > half_width_)
    fail(ErrorKind::kInvalidArgument, "alpha index outside the field");
  amps_[static_cast<std::size_t>(x + half_width_) * 2 + coin_slot(coin)] = value;
}

double AlphaField::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

PositionDistribution AlphaField::marginal() const {
  PositionDistribution d;
  d.min_position = -half_width_;
  d.time = time;
  d.probabilities.assign(static_cast<std::size_t>(2 * half_width_ + 1), 0.0);
  for (long x = -half_width_; x <= half_width_; ++x)
    d.probabilities[static_cast<std::size_t>(x + half_width_)] =
        std::norm(get(x, 1)) + std::norm(get(x, -1));
  return d;
}

BetaField initial_beta_field(long half_width) {
  BetaField b(half_width);
  b.set(-1, 0, 1, 0.5);
  b.set(-1, 0, -1, -0.5);
  b.set(1, 0, 1, -0.5);
  b.set(1, 0, -1, 0.5);
  return b;
}

BetaField beta_recurrence_step(const BetaField& b) {
  const long h = b.half_width();
  const double r = 1.0 / std::numbers::sqrt2;
  BetaField next(h);
  next.time = b.time + 1;
  // Each line writes a distinct (previous, current, coin) slot; targets that
  // fall outside the field are dropped (the walk never reaches them).
  auto put = [&](long prev, long cur, int c, Amplitude v) {
    if (cur >= -h && cur <= h) next.set(prev, cur, c, v);
  };
  for (long x = -h - 1; x <= h + 1; ++x) {
    put(x, x + 1, 1, r * (b.get(x + 1, x, 1) + b.get(x + 1, x, -1)));
    put(x, x - 1, 1, r * (b.get(x - 1, x, 1) + b.get(x - 1, x, -1)));
    put(x, x - 1, -1, r * (b.get(x + 1, x, 1) - b.get(x + 1, x, -1)));
    put(x, x + 1, -1, r * (b.get(x - 1, x, 1) - b.get(x - 1, x, -1)));
  }
  return next;
}

double check_beta_constraint(const BetaField& b) {
  const long h = b.half_width();
  double worst = 0.0;
  for (long x = -h - 1; x <= h + 1; ++x) {
    const Amplitude leaving = b.get(x, x + 1, 1) + b.get(x, x + 1, -1) +
                              b.get(x, x - 1, 1) + b.get(x, x - 1, -1);
    const Amplitude arriving = b.get(x + 1, x, 1) + b.get(x - 1, x, 1);
    worst = std::max({worst, std::abs(leaving), std::abs(arriving)});
  }
  return worst;
}

AlphaField alpha_from_beta(const BetaField& b) {
  const long h = b.half_width();
  const auto t = static_cast<long>(b.time);
  const Amplitude phase = std::polar(1.0, std::numbers::pi / 4);
  AlphaField a(h);
  a.time = b.time;
  for (long x = -h; x <= h; ++x) {
    if (((t + x) % 2 + 2) % 2 != 0) {
      for (long prev : {x - 1, x + 1})
        for (int c : {1, -1})
          if (b.get(prev, x, c) != Amplitude{})
            fail(ErrorKind::kInvalidArgument,
                 "beta field has weight off the even sublattice t + x");
      continue;
    }
    const double sign = (((t + x) / 2) % 2 == 0) ? 1.0 : -1.0;
    a.set(x, 1, sign * phase * (-kI * b.get(x - 1, x, 1) - b.get(x - 1, x, -1)));
    a.set(x, -1, sign * phase * (-b.get(x + 1, x, 1) + kI * b.get(x + 1, x, -1)));
  }
  return a;
}

AlphaField initial_alpha_field(long half_width) {
  AlphaField a(half_width);
  a.set(0, 1, 1.0 / std::numbers::sqrt2);
  a.set(0, -1, kI / std::numbers::sqrt2);
  return a;
}

AlphaField hadamard_walk_step(const AlphaField& a) {
  const long h = a.half_width();
  const double r = 1.0 / std::numbers::sqrt2;
  AlphaField next(h);
  next.time = a.time + 1;
  for (long x = -h; x <= h; ++x) {
    next.set(x, 1, r * (a.get(x - 1, 1) + a.get(x - 1, -1)));
    next.set(x, -1, r * (a.get(x + 1, 1) - a.get(x + 1, -1)));
  }
  return next;
}

BetaField beta_from_state(const WalkState& s, const RegularDigraph& host) {
  if (host.family() != GraphFamily::kBidirectedCycle || host.depth() != 1 ||
      host.degree() != 2)
    fail(ErrorKind::kInvalidArgument, "beta fields live on depth-1 line surrogates");
  const long h = (static_cast<long>(host.base().size()) - 1) / 2;
  BetaField b(h);
  b.time = s.time;
  for (Vertex v = 0; v < host.size(); ++v) {
    const long prev = host.base_coordinate(host.path(v)[0]);
    const long cur = host.coordinate(v);
    for (Coin c = 0; c < 2; ++c) {
      const Amplitude a = s.at(v, c);
      if (std::abs(prev - cur) != 1) {
        // Arc closing the cycle; empty unless the walk wrapped.
        if (a != Amplitude{})
          fail(ErrorKind::kNumerical, "amplitude reached the window edge");
        continue;
      }
      b.set(prev, cur, coin_sign(c), a);
    }
  }
  return b;
}

// --- distinct dicycle walks -------------------------------------------------

std::vector<std::vector<BasisAmplitude>> origin_initial_states() {
  std::vector<std::vector<BasisAmplitude>> states;
  for (long prev : {-1L, 1L})
    for (int c : {1, -1}) states.push_back({{{prev, 0}, coin_from_sign(c), 1.0}});
  states.push_back(symmetric_equivalence_state());
  // Generic complex superposition of the four basis states.
  std::vector<BasisAmplitude> generic = {
      {{-1, 0}, coin_from_sign(1), {0.3, 0.1}},
      {{-1, 0}, coin_from_sign(-1), {-0.2, 0.5}},
      {{1, 0}, coin_from_sign(1), {0.4, -0.3}},
      {{1, 0}, coin_from_sign(-1), {0.1, 0.6}},
  };
  double norm = 0.0;
  for (const auto& term : generic) norm += std::norm(term.amplitude);
  for (auto& term : generic) term.amplitude /= std::sqrt(norm);
  states.push_back(std::move(generic));
  return states;
}

DistinctWalkCount count_distinct_dicycle_walks(std::span<const std::uint64_t> seeds,
                                               std::size_t t) {
  DistinctWalkCount result;
  result.seeds.assign(seeds.begin(), seeds.end());
  if (seeds.empty()) return result;

  const std::size_t window = min_line_window(t, 1);
  auto host = std::make_shared<const RegularDigraph>(make_line_surrogate(window, 1));
  const auto initial_states = origin_initial_states();
  const std::size_t n = window;

  using History = std::vector<PositionDistribution>;
  std::vector<std::vector<History>> representatives;  // per class, per initial state

  for (std::uint64_t seed : seeds) {
    const Partition p = random_dicycle_factorization(host, seed);
    const Walk walk(p, carried_coin_shift(p), CoinMatrix::hadamard());

    unsigned key = 0;
    for (long x = -1; x <= 1; ++x) {
      const Vertex here = *host->base_vertex_at(x);
      const Vertex from_left = *host->find(std::vector<Vertex>{(here + n - 1) % n, here});
      const Vertex straight = *host->find(std::vector<Vertex>{here, (here + 1) % n});
      if (p.successor(coin_from_sign(+1), from_left) == straight) key |= 1u << (x + 1);
    }
    result.key_of_seed.push_back(key);

    std::vector<History> histories;
    for (const auto& terms : initial_states) {
      History h;
      evolve(walk, make_state(*host, terms), t,
             [&](const WalkState& s) { h.push_back(position_marginal(s, *host)); });
      histories.push_back(std::move(h));
    }

    std::size_t cls = representatives.size();
    for (std::size_t k = 0; k < representatives.size() && cls == representatives.size(); ++k) {
      bool same = true;
      for (std::size_t i = 0; i < histories.size() && same; ++i)
        for (std::size_t s = 0; s <= t && same; ++s)
          same = max_abs_difference(histories[i][s], representatives[k][i][s]) <=
                 kCrossCheckTolerance;
      if (same) cls = k;
    }
    if (cls == representatives.size()) representatives.push_back(std::move(histories));
    result.class_of_seed.push_back(cls);
  }
  result.class_count = representatives.size();

  std::map<std::size_t, std::vector<unsigned>> keys_by_class;
  std::map<unsigned, std::vector<std::size_t>> classes_by_key;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    keys_by_class[result.class_of_seed[i]].push_back(result.key_of_seed[i]);
    classes_by_key[result.key_of_seed[i]].push_back(result.class_of_seed[i]);
  }
  auto spread = [](auto values) {
    std::sort(values.begin(), values.end());
    return std::unique(values.begin(), values.end()) - values.begin() > 1;
  };
  for (const auto& [cls, keys] : keys_by_class) result.key_mismatches += spread(keys);
  for (const auto& [key, classes] : classes_by_key) result.key_mismatches += spread(classes);
  return result;
}

}  // namespace qwm
