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

#include "qwm/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "qwm/error.hpp"

namespace qwm {

CoinMatrix::CoinMatrix(std::size_t m, std::vector<Amplitude> entries)
    : m_(m), a_(std::move(entries)) {
  if (m_ == 0 || a_.size() != m_ * m_)
    fail(ErrorKind::kInvalidArgument, "coin matrix must be m x m with m >= 1");
  const double residual = unitarity_residual();
  if (!(residual <= kUnitaryTolerance))
    fail(ErrorKind::kInvalidArgument,
         "coin matrix is not unitary (residual " + std::to_string(residual) + ")");
}

CoinMatrix CoinMatrix::hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return CoinMatrix(2, {r, r, r, -r});
}

CoinMatrix CoinMatrix::identity(std::size_t m) {
  std::vector<Amplitude> a(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) a[i * m + i] = 1.0;
  return CoinMatrix(m, std::move(a));
}

double CoinMatrix::unitarity_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) {
      Amplitude sum = 0.0;
      for (std::size_t k = 0; k < m_; ++k) sum += std::conj(a_[k * m_ + i]) * a_[k * m_ + j];
      worst = std::max(worst, std::abs(sum - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

WalkState::WalkState(std::size_t vertices, std::size_t coins)
    : vertices_(vertices), coins_(coins), amps_(vertices * coins, 0.0) {}

double WalkState::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return sum;
}

bool is_permutation_table(std::span<const std::size_t> image) {
  std::vector<char> hit(image.size(), 0);
  for (std::size_t i : image) {
    if (i >= image.size() || hit[i]) return false;
    hit[i] = 1;
  }
  return true;
}

ShiftOp::ShiftOp(std::size_t vertices, std::size_t coins, std::vector<std::size_t> image)
    : vertices_(vertices), coins_(coins), image_(std::move(image)) {
  if (image_.size() != vertices_ * coins_)
    fail(ErrorKind::kInvalidArgument, "shift table has the wrong size");
  if (!is_permutation_table(image_))
    fail(ErrorKind::kConstraintViolation, "shift table is not a permutation");
}

ShiftOp ShiftOp::identity(std::size_t vertices, std::size_t coins) {
  std::vector<std::size_t> image(vertices * coins);
  std::iota(image.begin(), image.end(), std::size_t{0});
  return ShiftOp(vertices, coins, std::move(image));
}

ShiftOp ShiftOp::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return ShiftOp(vertices_, coins_, std::move(inv));
}

ShiftOp build_shift_operator(const Partition& p, const CoinShift& gc) {
  const CoinShiftReport report = validate_coin_shift(p, gc);
  if (!report.valid) {
    std::string msg = "coin shift violates the unitarity constraint at " +
                      std::to_string(report.violations.size()) + " target vertices:";
    const std::size_t shown = std::min<std::size_t>(report.violations.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) msg += " " + std::to_string(report.violations[i]);
    if (shown < report.violations.size()) msg += " ...";
    fail(ErrorKind::kConstraintViolation, msg);
  }
  const std::size_t n = p.host().size();
  const std::size_t m = p.coins();
  std::vector<std::size_t> image(n * m);
  for (Vertex v = 0; v < n; ++v)
    for (Coin k = 0; k < m; ++k) image[v * m + k] = p.successor(k, v) * m + gc(v, k);
  return ShiftOp(n, m, std::move(image));
}

namespace {

void apply_coin(std::span<const Amplitude> in, std::span<Amplitude> out, const CoinMatrix& a) {
  const std::size_t m = a.size();
  for (std::size_t base = 0; base < in.size(); base += m)
    for (std::size_t j = 0; j < m; ++j) {
      Amplitude sum = 0.0;
      for (std::size_t c = 0; c < m; ++c) sum += a(c, j) * in[base + c];
      out[base + j] = sum;
    }
}

void apply_shift(std::span<const Amplitude> in, std::span<Amplitude> out, const ShiftOp& op) {
  const auto images = op.images();
  for (std::size_t i = 0; i < in.size(); ++i) out[images[i]] = in[i];
}

}  // namespace

WalkState coin_step(const WalkState& s, const CoinMatrix& a) {
  if (a.size() != s.coins()) fail(ErrorKind::kInvalidArgument, "coin dimension mismatch");
  WalkState next(s.vertices(), s.coins());
  apply_coin(s.amplitudes(), next.amplitudes(), a);
  next.time = s.time;
  return next;
}

WalkState shift_step(const WalkState& s, const ShiftOp& op) {
  if (op.vertices() != s.vertices() || op.coins() != s.coins())
    fail(ErrorKind::kInvalidArgument, "shift operator built on a different host");
  WalkState next(s.vertices(), s.coins());
  apply_shift(s.amplitudes(), next.amplitudes(), op);
  next.time = s.time + 1;
  return next;
}

Walk::Walk(const Partition& p, const CoinShift& gc, CoinMatrix coin)
    : host_(p.host_ptr()), shift_(build_shift_operator(p, gc)), coin_(std::move(coin)) {
  if (coin_.size() != p.coins())
    fail(ErrorKind::kInvalidArgument, "coin matrix size does not match the host degree");
}

void Walk::step(WalkState& s) const {
  if (s.vertices() != shift_.vertices() || s.coins() != shift_.coins())
    fail(ErrorKind::kInvalidArgument, "state lives on a different host");
  scratch_.resize(s.amplitudes().size());
  apply_coin(s.amplitudes(), scratch_, coin_);
  apply_shift(scratch_, s.amplitudes(), shift_);
  ++s.time;
}

void evolve(const Walk& walk, WalkState state, std::size_t t_max,
            const std::function<void(const WalkState&)>& observe) {
  observe(state);
  for (std::size_t t = 0; t < t_max; ++t) {
    walk.step(state);
    observe(state);
  }
}

std::vector<WalkState> evolve(const Walk& walk, WalkState state, std::size_t t_max) {
  std::vector<WalkState> history;
  history.reserve(t_max + 1);
  evolve(walk, std::move(state), t_max, [&](const WalkState& s) { history.push_back(s); });
  return history;
}

WalkState make_state(const RegularDigraph& host, std::span<const BasisAmplitude> terms) {
  WalkState s(host.size(), host.degree());
  std::vector<Vertex> path;
  for (const auto& term : terms) {
    if (term.path.size() != host.depth() + 1)
      fail(ErrorKind::kInvalidSpec, "initial path has length " +
                                        std::to_string(term.path.size()) + ", expected " +
                                        std::to_string(host.depth() + 1));
    if (term.coin >= host.degree())
      fail(ErrorKind::kInvalidSpec, "initial coin label out of range");
    path.clear();
    for (long x : term.path) {
      const auto b = host.base_vertex_at(x);
      if (!b) fail(ErrorKind::kInvalidSpec, "initial position " + std::to_string(x) +
                                                " is outside the graph");
      path.push_back(*b);
    }
    const auto v = host.find(path);
    if (!v) fail(ErrorKind::kInvalidSpec, "initial path is not a walk on the base graph");
    s.at(*v, term.coin) += term.amplitude;
  }
  const double norm = s.norm_squared();
  if (std::abs(norm - 1.0) > kUnitaryTolerance)
    fail(ErrorKind::kInvalidSpec,
         "initial state has squared norm " + std::to_string(norm) + ", expected 1");
  return s;
}

void require_no_wrap(const RegularDigraph& host, const WalkState& initial,
                     std::size_t t_max) {
  if (host.family() != GraphFamily::kBidirectedCycle) return;
  const auto n = static_cast<long>(host.base().size());
  const long half = (n - 1) / 2;
  long reach = 0;
  for (Vertex v = 0; v < initial.vertices(); ++v) {
    bool occupied = false;
    for (Coin c = 0; c < initial.coins(); ++c) occupied |= initial.at(v, c) != Amplitude{};
    if (!occupied) continue;
    for (Vertex b : host.path(v)) reach = std::max(reach, std::abs(host.base_coordinate(b)));
  }
  // Path entries drift at most one site per step; keep the edge sites empty.
  if (reach + static_cast<long>(t_max) > half - 1)
    fail(ErrorKind::kInvalidSpec,
         "window of " + std::to_string(n) + " sites is too small for " +
             std::to_string(t_max) + " steps without wrapping; need at least " +
             std::to_string(2 * (reach + static_cast<long>(t_max)) + 3));
}

std::vector<BasisAmplitude> symmetric_equivalence_state() {
  return {
      {{-1, 0}, coin_from_sign(+1), 0.5},
      {{-1, 0}, coin_from_sign(-1), -0.5},
      {{1, 0}, coin_from_sign(+1), -0.5},
      {{1, 0}, coin_from_sign(-1), 0.5},
  };
}

}  // namespace qwm
