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

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qwm/coin_shift.hpp"
#include "qwm/partition.hpp"

namespace qwm {

using Amplitude = std::complex<double>;

/// Residual allowed for unitarity and norm checks.
inline constexpr double kUnitaryTolerance = 1e-12;
/// Allowed entrywise difference between two independent simulation routes.
inline constexpr double kCrossCheckTolerance = 1e-10;

/// m x m unitary coin, row-major. The coin step sends |v,c> to
/// sum_j A(c,j) |v,j>.
class CoinMatrix {
 public:
  /// Throws kInvalidArgument if the matrix is not unitary within
  /// kUnitaryTolerance.
  CoinMatrix(std::size_t m, std::vector<Amplitude> entries);

  static CoinMatrix hadamard();
  static CoinMatrix identity(std::size_t m);

  std::size_t size() const { return m_; }
  Amplitude operator()(std::size_t row, std::size_t col) const { return a_[row * m_ + col]; }
  std::span<const Amplitude> entries() const { return a_; }

  /// max |(A^dagger A - I)_{ij}|.
  double unitarity_residual() const;

 private:
  std::size_t m_;
  std::vector<Amplitude> a_;
};

/// Amplitudes over V x {coins}, entry v*m + c.
class WalkState {
 public:
  WalkState(std::size_t vertices, std::size_t coins);

  std::size_t vertices() const { return vertices_; }
  std::size_t coins() const { return coins_; }

  Amplitude& at(Vertex v, Coin c) { return amps_[v * coins_ + c]; }
  Amplitude at(Vertex v, Coin c) const { return amps_[v * coins_ + c]; }

  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }

  double norm_squared() const;

  std::size_t time = 0;

 private:
  std::size_t vertices_;
  std::size_t coins_;
  std::vector<Amplitude> amps_;
};

/// Permutation of the basis V x {coins}: index v*m + k maps to
/// f_{C_k}(v)*m + gc(v, k).
class ShiftOp {
 public:
  /// Throws kConstraintViolation if `image` is not a bijection.
  ShiftOp(std::size_t vertices, std::size_t coins, std::vector<std::size_t> image);

  static ShiftOp identity(std::size_t vertices, std::size_t coins);

  std::size_t vertices() const { return vertices_; }
  std::size_t coins() const { return coins_; }
  std::size_t image(std::size_t index) const { return image_[index]; }
  std::span<const std::size_t> images() const { return image_; }

  ShiftOp inverse() const;

 private:
  std::size_t vertices_;
  std::size_t coins_;
  std::vector<std::size_t> image_;
};

/// True iff `image` hits every index of [0, image.size()) exactly once.
bool is_permutation_table(std::span<const std::size_t> image);

/// Assembles S from a partition and a coin shift. Throws kConstraintViolation
/// listing the violating target vertices when gc breaks the unitarity
/// constraint.
ShiftOp build_shift_operator(const Partition& p, const CoinShift& gc);

WalkState coin_step(const WalkState& s, const CoinMatrix& a);
WalkState shift_step(const WalkState& s, const ShiftOp& op);

/// One coined walk U = S * C on a line digraph.
class Walk {
 public:
  Walk(const Partition& p, const CoinShift& gc, CoinMatrix coin);

  const RegularDigraph& host() const { return *host_; }
  const std::shared_ptr<const RegularDigraph>& host_ptr() const { return host_; }
  const ShiftOp& shift() const { return shift_; }
  const CoinMatrix& coin() const { return coin_; }

  /// Applies U in place (coin first, then shift); advances s.time.
  void step(WalkState& s) const;

 private:
  std::shared_ptr<const RegularDigraph> host_;
  ShiftOp shift_;
  CoinMatrix coin_;
  mutable std::vector<Amplitude> scratch_;
};

/// Runs t_max steps, calling `observe` on the initial state and after each
/// step (t_max + 1 calls).
void evolve(const Walk& walk, WalkState state, std::size_t t_max,
            const std::function<void(const WalkState&)>& observe);

/// Full history of t_max + 1 states.
std::vector<WalkState> evolve(const Walk& walk, WalkState state, std::size_t t_max);

/// One basis component of an initial state: base-graph path given in display
/// coordinates (oldest first), a coin label and an amplitude.
struct BasisAmplitude {
  std::vector<long> path;
  Coin coin = 0;
  Amplitude amplitude;
};

/// Builds a state on `host`. Throws kInvalidSpec when a path is not a vertex
/// of the host or the norm differs from 1 by more than kUnitaryTolerance.
WalkState make_state(const RegularDigraph& host, std::span<const BasisAmplitude> terms);

/// Throws kInvalidSpec if a walk started in `initial` on a line surrogate
/// could reach the window edges within t_max steps.
void require_no_wrap(const RegularDigraph& host, const WalkState& initial,
                     std::size_t t_max);

/// 1/2|(-1,0),+1> - 1/2|(-1,0),-1> - 1/2|(1,0),+1> + 1/2|(1,0),-1>; the
/// memory-walk state whose marginal reproduces the symmetric Hadamard walk.
std::vector<BasisAmplitude> symmetric_equivalence_state();

}  // namespace qwm
