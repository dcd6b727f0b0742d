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

// Experiment descriptions, their JSON form, and the four runners behind the
// command-line tool. Every runner validates its whole input before the first
// step and writes nothing on failure.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwm/analysis.hpp"

namespace qwm {

enum class PartitionKind { kPi1, kPi2, kRandom, kRandomDicycle };
enum class CoinShiftKind { kGc1, kGc2, kTable };

struct CoinShiftEntry {
  Vertex vertex = 0;
  int in = 1;   // +/-1
  int out = 1;  // +/-1
};

struct ExperimentSpec {
  enum class Family { kLine, kCycle };
  Family family = Family::kLine;
  /// Number of base sites. 0 picks the smallest no-wrap window for t_max.
  std::size_t window = 0;
  std::size_t depth = 1;
  PartitionKind partition = PartitionKind::kPi2;
  /// Seed for random partitions. Falls back to `seed` when unset.
  std::optional<std::uint64_t> partition_seed;
  CoinShiftKind coin_shift = CoinShiftKind::kGc2;
  std::vector<CoinShiftEntry> coin_shift_table;
  /// Empty means Hadamard.
  std::vector<Amplitude> coin;
  /// Name of a preset, or empty when `initial_state` is explicit.
  std::string initial_preset = "origin-symmetric";
  std::vector<BasisAmplitude> initial_state;
  std::size_t t_max = 100;
  std::vector<std::string> outputs = {"distribution", "variance", "occrate",
                                      "origin-series", "scaling-fit"};
  std::uint64_t seed = 1;
};

/// Parses and checks the field shapes. Throws kInvalidSpec naming the
/// offending field.
ExperimentSpec parse_spec(std::string_view json_text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Canonical JSON; parse_spec(spec_to_json(s)) reproduces s.
std::string spec_to_json(const ExperimentSpec& spec);

/// Fills in the window, expands the preset into explicit amplitudes and the
/// partition seed, so the result runs identically without any defaults.
ExperimentSpec resolve_spec(ExperimentSpec spec);

std::string to_string(PartitionKind k);
std::string to_string(CoinShiftKind k);

/// Presets: "origin-symmetric" and "equivalence".
std::vector<BasisAmplitude> preset_state(std::string_view name, std::size_t depth);

/// Everything needed to step a walk, built from a resolved spec. Building
/// validates the whole spec, so nothing is simulated on bad input.
struct PreparedWalk {
  std::shared_ptr<const RegularDigraph> host;
  Partition partition;
  CoinShift coin_shift;
  Walk walk;
  WalkState initial;
};
PreparedWalk prepare_walk(const ExperimentSpec& resolved);

struct SeriesSet {
  std::vector<double> variance;
  std::vector<double> occupancy;  // OccRate(2t+1, t)
  std::vector<double> origin;     // P(0, t)
  double max_norm_drift = 0.0;
};

/// Runs a resolved spec and collects the statistic series. When `history`
/// is non-null it receives P(x, t) for every t.
SeriesSet run_series(const ExperimentSpec& resolved,
                     std::vector<PositionDistribution>* history = nullptr);

/// Mean of P(0, t) over even t in [first, last].
double late_origin_average(std::span<const double> origin, std::size_t first, std::size_t last);

// ---------------------------------------------------------------- runners

struct SimulateResult {
  ExperimentSpec resolved;
  SeriesSet series;
};
/// Writes distribution.csv (t,x,p) and summary.json to out_dir.
SimulateResult run_simulate(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

struct WalkClass {
  std::string name;
  PartitionKind partition;
  CoinShiftKind coin_shift;
  bool seeded() const {
    return partition == PartitionKind::kRandom || partition == PartitionKind::kRandomDicycle;
  }
};

/// pi1/gc1, pi2/gc1, pi2/gc2, pi4/gc2, pi3/gc1, pi4/gc1.
std::vector<WalkClass> six_walk_classes();

struct ClassSummary {
  WalkClass walk_class;
  std::vector<std::uint64_t> seeds;  // empty for unseeded classes
  std::vector<SeriesSet> per_seed;   // one entry for unseeded classes
  std::vector<double> mean_variance;
  double variance_ratio = 0.0;  // mean_variance[T] / mean_variance[T/2]
  std::string ratio_verdict;    // ballistic | diffusive | neither
  std::optional<ScalingFit> fit;
  /// Worst seed at t = T/4, T/2, T.
  double occupancy_quarter = 0.0;
  double occupancy_half = 0.0;
  double occupancy_end = 0.0;
  double late_origin = 0.0;  // seed mean
};

struct SweepResult {
  ExperimentSpec template_spec;
  std::vector<ClassSummary> classes;
};

/// Runs every class over the seeds with at most `workers` threads. Results
/// are merged in (class, seed) order, so the output does not depend on the
/// worker count. Writes sweep.csv and sweep.json when out_dir is non-empty.
SweepResult run_sweep(const ExperimentSpec& template_spec, const std::vector<WalkClass>& classes,
                      const std::vector<std::uint64_t>& seeds, std::size_t workers,
                      const std::filesystem::path& out_dir);

/// Parses the optional "classes" array of a sweep config; returns the six
/// default classes when absent.
std::vector<WalkClass> parse_walk_classes(std::string_view json_text);

// ------------------------------------------------------------ equivalence

/// Largest |P_engine - P_oracle| over t <= t_max for `states` random initial
/// states near the origin, engine (pi1, gc1) against the recycled-coin
/// oracle at the given depth.
double recycled_correspondence(std::size_t depth, std::size_t states, std::size_t t_max,
                               std::uint64_t seed);
/// Same for (pi2, gc2) against the reflect/transmit oracle.
double reflect_transmit_correspondence(std::size_t states, std::size_t t_max, std::uint64_t seed);

struct MemoryFreeResiduals {
  double beta_constraint = 0.0;  // worst constraint residual
  double alpha = 0.0;            // worst |alpha(beta) - alpha_direct|
  double total_variation = 0.0;  // worst TV between the two marginals
  double engine_beta = 0.0;      // worst |engine amplitude - beta|
  double norm_drift = 0.0;
};
/// Runs the beta recurrence, the reconstruction of alpha, the direct
/// memoryless walk and the engine (pi2, gc2) side by side for t <= t_max.
MemoryFreeResiduals memory_free_equivalence(std::size_t t_max);

struct EquivalenceReport {
  std::size_t t_max = 0;
  MemoryFreeResiduals residuals;
  double recycled_d1 = 0.0;
  double recycled_d2 = 0.0;
  double reflect_transmit = 0.0;
  /// Negative control: a perturbed initial field.
  double control_constraint = 0.0;
  bool control_applicable = true;
  bool passed = false;
};
EquivalenceReport run_equivalence(std::size_t t_max, const std::filesystem::path& out_dir);

// -------------------------------------------------------------- enumerate

struct BruteForceCount {
  std::size_t tables = 0;
  std::size_t bijective = 0;
  /// Tables where validate_coin_shift disagrees with shift bijectivity.
  std::size_t disagreements = 0;
};
/// Tries every table of coin labels and checks the assembled shift for
/// bijectivity directly. Throws kSize past 2^20 tables.
BruteForceCount brute_force_coin_shifts(const Partition& p);

struct EnumerationCase {
  std::string partition;
  bool is_dicycle = false;
  std::size_t enumerated = 0;
  BruteForceCount brute_force;
  bool has_gc1 = false;
  bool has_gc2 = false;
};

struct EnumerateReport {
  std::size_t t = 0;
  DistinctWalkCount walks;
  std::vector<EnumerationCase> cases;
  bool passed = false;
};
/// Distinct-walk count over the seeds plus coin-shift enumeration on the
/// 6-vertex line digraph of the 3-cycle.
EnumerateReport run_enumerate(const std::vector<std::uint64_t>& seeds, std::size_t t,
                              const std::filesystem::path& out_dir);

}  // namespace qwm
