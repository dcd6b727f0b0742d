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

#include "qwm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qwm/constants.hpp"
#include "qwm/error.hpp"
#include "qwm/oracles.hpp"
#include "qwm/random.hpp"

namespace qwm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_spec(const std::string& what) { fail(ErrorKind::kInvalidSpec, what); }

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) bad_spec(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::uint64_t as_count(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad_spec("field '" + field + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

int as_coin(const json& j, const std::string& field) {
  if (!j.is_number_integer() || (j.get<int>() != 1 && j.get<int>() != -1))
    bad_spec("field '" + field + "' must be +1 or -1");
  return j.get<int>();
}

Amplitude as_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad_spec("field '" + field + "' must be a [real, imaginary] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(Amplitude a) { return json::array({a.real(), a.imag()}); }

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      bad_spec("unknown field '" + key + "' in " + where);
  }
}

PartitionKind partition_kind(const std::string& s) {
  if (s == "pi1") return PartitionKind::kPi1;
  if (s == "pi2") return PartitionKind::kPi2;
  if (s == "random" || s == "pi3") return PartitionKind::kRandom;
  if (s == "random-dicycle" || s == "pi4") return PartitionKind::kRandomDicycle;
  bad_spec("unknown partition kind '" + s + "' (pi1, pi2, random, random-dicycle)");
}

CoinShiftKind coin_shift_kind(const std::string& s) {
  if (s == "gc1") return CoinShiftKind::kGc1;
  if (s == "gc2") return CoinShiftKind::kGc2;
  if (s == "table") return CoinShiftKind::kTable;
  bad_spec("unknown coin shift kind '" + s + "' (gc1, gc2, table)");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

bool wants(const ExperimentSpec& s, std::string_view output) {
  return std::find(s.outputs.begin(), s.outputs.end(), output) != s.outputs.end();
}

constexpr std::string_view kKnownOutputs[] = {"distribution", "variance",  "occrate",
                                              "origin-series", "scaling-fit", "graph",
                                              "partition",    "coin-shift"};

long state_reach(const std::vector<BasisAmplitude>& terms) {
  long reach = 0;
  for (const auto& t : terms)
    for (long x : t.path) reach = std::max(reach, std::abs(x));
  return reach;
}

std::shared_ptr<const RegularDigraph> build_host(const ExperimentSpec& s) {
  if (s.family == ExperimentSpec::Family::kLine)
    return std::make_shared<const RegularDigraph>(make_line_surrogate(s.window, s.depth));
  const RegularDigraph cycle = make_bidirected_cycle(s.window);
  Factorization rotations(2, Permutation(s.window));
  for (Vertex x = 0; x < s.window; ++x) {
    rotations[0][x] = (x + 1) % s.window;
    rotations[1][x] = (x + s.window - 1) % s.window;
  }
  return std::make_shared<const RegularDigraph>(iterate_line_digraph(cycle, s.depth, rotations));
}

Partition build_partition(PartitionKind kind, std::shared_ptr<const RegularDigraph> host,
                          std::uint64_t seed) {
  switch (kind) {
    case PartitionKind::kPi1: return named_partition(NamedPartition::kRecycledCoin, host);
    case PartitionKind::kPi2: return named_partition(NamedPartition::kReflectTransmit, host);
    case PartitionKind::kRandom: return random_partition(host, seed);
    case PartitionKind::kRandomDicycle: return random_dicycle_factorization(host, seed);
  }
  bad_spec("unknown partition kind");
}

CoinShift build_coin_shift(const ExperimentSpec& s, const Partition& p) {
  switch (s.coin_shift) {
    case CoinShiftKind::kGc1: return memory_coin_shift(p);
    case CoinShiftKind::kGc2: return carried_coin_shift(p);
    case CoinShiftKind::kTable: {
      const std::size_t n = p.host().size();
      std::vector<Coin> table(n * 2, 0);
      std::vector<char> seen(n * 2, 0);
      for (const auto& e : s.coin_shift_table) {
        if (e.vertex >= n)
          bad_spec("coin shift table vertex " + std::to_string(e.vertex) + " out of range");
        const std::size_t i = e.vertex * 2 + coin_from_sign(e.in);
        if (seen[i]) bad_spec("coin shift table repeats an entry");
        seen[i] = 1;
        table[i] = coin_from_sign(e.out);
      }
      if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        bad_spec("coin shift table must list every (vertex, coin) pair");
      return CoinShift(2, std::move(table));
    }
  }
  bad_spec("unknown coin shift kind");
}

CoinMatrix build_coin(const ExperimentSpec& s) {
  if (s.coin.empty()) return CoinMatrix::hadamard();
  try {
    return CoinMatrix(2, s.coin);
  } catch (const Error& e) {
    bad_spec(std::string("coin: ") + e.what());
  }
}

json graph_json(const RegularDigraph& g) {
  json arcs = json::array();
  for (const auto& [u, v] : g.arcs()) arcs.push_back({u, v});
  json paths = json::array();
  for (Vertex v = 0; v < g.size(); ++v) {
    json p = json::array();
    for (Vertex b : g.path(v)) p.push_back(g.base_coordinate(b));
    paths.push_back(std::move(p));
  }
  return {{"n", g.size()}, {"m", g.degree()}, {"depth", g.depth()}, {"arcs", std::move(arcs)},
          {"paths", std::move(paths)}};
}

json partition_json(const Partition& p, std::optional<std::uint64_t> seed) {
  json vertices = json::array();
  for (Vertex v = 0; v < p.host().size(); ++v) {
    json succ = json::array();
    for (Coin k = 0; k < p.coins(); ++k) succ.push_back({coin_sign(k), p.successor(k, v)});
    vertices.push_back({{"vertex", v}, {"successors", std::move(succ)}});
  }
  const auto& r = p.report();
  return {{"seed", seed ? json(*seed) : json(nullptr)},
          {"cover_ok", r.cover_ok},
          {"outdeg_ok", r.outdeg_ok},
          {"is_dicycle", r.is_dicycle},
          {"vertices", std::move(vertices)}};
}

json coin_shift_json(const CoinShift& gc) {
  json triples = json::array();
  for (Vertex v = 0; v < gc.vertex_count(); ++v)
    for (Coin k = 0; k < gc.coins(); ++k) triples.push_back({v, coin_sign(k), coin_sign(gc(v, k))});
  return triples;
}

json spec_object(const ExperimentSpec& s) {
  json j;
  j["graph"] = {{"family", s.family == ExperimentSpec::Family::kLine ? "line" : "cycle"},
                {"window", s.window}};
  j["depth"] = s.depth;
  j["partition"] = {{"kind", to_string(s.partition)}};
  if (s.partition_seed) j["partition"]["seed"] = *s.partition_seed;
  j["coin_shift"] = {{"kind", to_string(s.coin_shift)}};
  if (s.coin_shift == CoinShiftKind::kTable) {
    json entries = json::array();
    for (const auto& e : s.coin_shift_table) entries.push_back({e.vertex, e.in, e.out});
    j["coin_shift"]["entries"] = std::move(entries);
  }
  if (s.coin.empty()) {
    j["coin"] = "hadamard";
  } else {
    j["coin"] = {{complex_json(s.coin[0]), complex_json(s.coin[1])},
                 {complex_json(s.coin[2]), complex_json(s.coin[3])}};
  }
  if (!s.initial_preset.empty()) {
    j["initial_state"] = s.initial_preset;
  } else {
    json terms = json::array();
    for (const auto& t : s.initial_state)
      terms.push_back({{"path", t.path},
                       {"coin", coin_sign(t.coin)},
                       {"amplitude", complex_json(t.amplitude)}});
    j["initial_state"] = std::move(terms);
  }
  j["t_max"] = s.t_max;
  j["outputs"] = s.outputs;
  j["seed"] = s.seed;
  return j;
}

ExperimentSpec spec_from_object(const json& j) {
  if (!j.is_object()) bad_spec("experiment spec must be a JSON object");
  check_keys(j,
             {"graph", "depth", "partition", "coin_shift", "coin", "initial_state", "t_max",
              "outputs", "seed", "classes", "description"},
             "spec");
  ExperimentSpec s;
  if (j.contains("graph")) {
    const json& g = j.at("graph");
    if (!g.is_object()) bad_spec("field 'graph' must be an object");
    check_keys(g, {"family", "window"}, "graph");
    if (g.contains("family")) {
      const auto f = g.at("family").get<std::string>();
      if (f == "line") s.family = ExperimentSpec::Family::kLine;
      else if (f == "cycle") s.family = ExperimentSpec::Family::kCycle;
      else bad_spec("unknown graph family '" + f + "' (line, cycle)");
    }
    if (g.contains("window")) s.window = as_count(g.at("window"), "graph.window");
  }
  if (j.contains("depth")) s.depth = as_count(j.at("depth"), "depth");
  if (j.contains("partition")) {
    const json& p = j.at("partition");
    if (p.is_string()) {
      s.partition = partition_kind(p.get<std::string>());
    } else {
      if (!p.is_object()) bad_spec("field 'partition' must be a string or an object");
      check_keys(p, {"kind", "seed"}, "partition");
      if (!require(p, "kind").is_string()) bad_spec("field 'partition.kind' must be a string");
      s.partition = partition_kind(p.at("kind").get<std::string>());
      if (p.contains("seed")) s.partition_seed = as_count(p.at("seed"), "partition.seed");
    }
  }
  if (j.contains("coin_shift")) {
    const json& c = j.at("coin_shift");
    if (c.is_string()) {
      s.coin_shift = coin_shift_kind(c.get<std::string>());
    } else {
      if (!c.is_object()) bad_spec("field 'coin_shift' must be a string or an object");
      check_keys(c, {"kind", "entries"}, "coin_shift");
      if (!require(c, "kind").is_string()) bad_spec("field 'coin_shift.kind' must be a string");
      s.coin_shift = coin_shift_kind(c.at("kind").get<std::string>());
      if (s.coin_shift == CoinShiftKind::kTable) {
        const json& entries = require(c, "entries");
        if (!entries.is_array()) bad_spec("field 'coin_shift.entries' must be an array");
        for (const auto& e : entries) {
          if (!e.is_array() || e.size() != 3)
            bad_spec("coin shift entries are [vertex, in-coin, out-coin] triples");
          s.coin_shift_table.push_back({static_cast<Vertex>(as_count(e[0], "coin_shift.entries")),
                                        as_coin(e[1], "coin_shift.entries"),
                                        as_coin(e[2], "coin_shift.entries")});
        }
      }
    }
    if (s.coin_shift == CoinShiftKind::kTable && s.coin_shift_table.empty())
      bad_spec("coin shift 'table' needs 'entries'");
  }
  if (j.contains("coin")) {
    const json& c = j.at("coin");
    if (c.is_string()) {
      if (c.get<std::string>() != "hadamard") bad_spec("coin must be \"hadamard\" or a matrix");
    } else {
      if (!c.is_array() || c.size() != 2) bad_spec("coin matrix must have 2 rows");
      for (const auto& row : c) {
        if (!row.is_array() || row.size() != 2) bad_spec("coin matrix must have 2 columns");
        for (const auto& e : row) s.coin.push_back(as_complex(e, "coin"));
      }
    }
  }
  if (j.contains("initial_state")) {
    const json& init = j.at("initial_state");
    if (init.is_string()) {
      s.initial_preset = init.get<std::string>();
    } else {
      if (!init.is_array() || init.empty())
        bad_spec("field 'initial_state' must be a preset name or a non-empty list");
      s.initial_preset.clear();
      for (const auto& term : init) {
        if (!term.is_object()) bad_spec("initial_state entries must be objects");
        check_keys(term, {"path", "coin", "amplitude"}, "initial_state entry");
        BasisAmplitude b;
        const json& path = require(term, "path");
        if (!path.is_array() || path.empty()) bad_spec("initial_state path must be a list");
        for (const auto& x : path) {
          if (!x.is_number_integer()) bad_spec("initial_state path entries must be integers");
          b.path.push_back(x.get<long>());
        }
        b.coin = coin_from_sign(as_coin(require(term, "coin"), "initial_state.coin"));
        b.amplitude = as_complex(require(term, "amplitude"), "initial_state.amplitude");
        s.initial_state.push_back(std::move(b));
      }
    }
  }
  if (j.contains("t_max")) s.t_max = as_count(j.at("t_max"), "t_max");
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (!o.is_array()) bad_spec("field 'outputs' must be a list");
    s.outputs.clear();
    for (const auto& e : o) {
      if (!e.is_string()) bad_spec("outputs must be strings");
      const auto name = e.get<std::string>();
      if (std::find(std::begin(kKnownOutputs), std::end(kKnownOutputs), name) ==
          std::end(kKnownOutputs))
        bad_spec("unknown output '" + name + "'");
      s.outputs.push_back(name);
    }
  }
  if (j.contains("seed")) s.seed = as_count(j.at("seed"), "seed");
  return s;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    bad_spec(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string to_string(PartitionKind k) {
  switch (k) {
    case PartitionKind::kPi1: return "pi1";
    case PartitionKind::kPi2: return "pi2";
    case PartitionKind::kRandom: return "random";
    case PartitionKind::kRandomDicycle: return "random-dicycle";
  }
  return "?";
}

std::string to_string(CoinShiftKind k) {
  switch (k) {
    case CoinShiftKind::kGc1: return "gc1";
    case CoinShiftKind::kGc2: return "gc2";
    case CoinShiftKind::kTable: return "table";
  }
  return "?";
}

ExperimentSpec parse_spec(std::string_view json_text) {
  try {
    return spec_from_object(parse_json(json_text));
  } catch (const json::exception& e) {
    bad_spec(std::string("bad field type: ") + e.what());
  }
}

ExperimentSpec load_spec(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_spec("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str());
}

std::string spec_to_json(const ExperimentSpec& spec) { return spec_object(spec).dump(2) + "\n"; }

std::vector<BasisAmplitude> preset_state(std::string_view name, std::size_t depth) {
  if (depth == 0) bad_spec("presets need memory depth >= 1");
  // Straight arrivals at the origin from the left and from the right.
  std::vector<long> from_left(depth + 1), from_right(depth + 1);
  for (std::size_t i = 0; i <= depth; ++i) {
    from_left[i] = -static_cast<long>(depth - i);
    from_right[i] = static_cast<long>(depth - i);
  }
  const Coin plus = coin_from_sign(1), minus = coin_from_sign(-1);
  if (name == "origin-symmetric") {
    const Amplitude i{0.0, 0.5};
    return {{from_left, plus, 0.5}, {from_left, minus, i},
            {from_right, plus, i},  {from_right, minus, 0.5}};
  }
  if (name == "equivalence") {
    if (depth != 1) bad_spec("preset 'equivalence' is defined for depth 1 only");
    return symmetric_equivalence_state();
  }
  bad_spec("unknown initial_state preset '" + std::string(name) +
           "' (origin-symmetric, equivalence)");
}

ExperimentSpec resolve_spec(ExperimentSpec s) {
  if (s.depth == 0) bad_spec("memory depth must be >= 1");
  if (s.depth > 8) bad_spec("memory depth above 8 is not supported");
  if (!s.initial_preset.empty()) {
    s.initial_state = preset_state(s.initial_preset, s.depth);
    s.initial_preset.clear();
  }
  if (s.initial_state.empty()) bad_spec("initial_state is empty");
  if (s.family == ExperimentSpec::Family::kLine) {
    const auto reach = static_cast<std::size_t>(state_reach(s.initial_state));
    const std::size_t needed = std::max(min_line_window(s.t_max, s.depth), 2 * (s.t_max + reach) + 3);
    if (s.window == 0) s.window = needed;
    else if (s.window % 2 == 0) bad_spec("line window must be odd");
    else if (s.window < needed)
      bad_spec("line window " + std::to_string(s.window) + " is too small for t_max " +
               std::to_string(s.t_max) + " without wrapping; need at least " +
               std::to_string(needed));
  } else if (s.window < 3) {
    bad_spec("cycle family needs graph.window >= 3");
  }
  if ((s.partition == PartitionKind::kRandom || s.partition == PartitionKind::kRandomDicycle) &&
      !s.partition_seed)
    s.partition_seed = s.seed;
  if (s.partition != PartitionKind::kRandom && s.partition != PartitionKind::kRandomDicycle)
    s.partition_seed.reset();
  return s;
}

PreparedWalk prepare_walk(const ExperimentSpec& s) {
  if (s.window == 0 || !s.initial_preset.empty()) bad_spec("spec must be resolved first");
  const CoinMatrix coin = build_coin(s);
  std::shared_ptr<const RegularDigraph> host;
  try {
    host = build_host(s);
  } catch (const Error& e) {
    bad_spec(std::string("graph: ") + e.what());
  }
  Partition partition = [&] {
    try {
      return build_partition(s.partition, host, s.partition_seed.value_or(s.seed));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConstraintViolation) throw;
      bad_spec(std::string("partition: ") + e.what());
    }
  }();
  CoinShift gc = [&] {
    try {
      return build_coin_shift(s, partition);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConstraintViolation || e.kind() == ErrorKind::kInvalidSpec)
        throw;
      bad_spec(std::string("coin shift: ") + e.what());
    }
  }();
  Walk walk(partition, gc, coin);  // validates the unitarity constraint
  WalkState initial = make_state(*host, s.initial_state);
  if (s.family == ExperimentSpec::Family::kLine) require_no_wrap(*host, initial, s.t_max);
  return {std::move(host), std::move(partition), std::move(gc), std::move(walk),
          std::move(initial)};
}

SeriesSet run_series(const ExperimentSpec& s, std::vector<PositionDistribution>* history) {
  PreparedWalk w = prepare_walk(s);
  SeriesSet out;
  out.variance.reserve(s.t_max + 1);
  evolve(w.walk, std::move(w.initial), s.t_max, [&](const WalkState& state) {
    PositionDistribution d = position_marginal(state, *w.host);
    out.variance.push_back(variance(d));
    out.occupancy.push_back(occupancy_rate(d, 2 * state.time + 1));
    out.origin.push_back(d.at(0));
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(state.norm_squared() - 1.0));
    if (history) history->push_back(std::move(d));
  });
  if (out.max_norm_drift > kUnitaryTolerance)
    fail(ErrorKind::kNumerical, "norm drifted by " + format_double(out.max_norm_drift));
  return out;
}

double late_origin_average(std::span<const double> origin, std::size_t first, std::size_t last) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = first + (first % 2); t <= last && t < origin.size(); t += 2) {
    sum += origin[t];
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

// ------------------------------------------------------------- simulate

SimulateResult run_simulate(const ExperimentSpec& spec, const fs::path& out_dir) {
  SimulateResult result;
  result.resolved = resolve_spec(spec);
  const ExperimentSpec& s = result.resolved;
  std::vector<PositionDistribution> history;
  result.series = run_series(s, wants(s, "distribution") ? &history : nullptr);
  if (out_dir.empty()) return result;

  ensure_dir(out_dir);
  if (wants(s, "distribution")) {
    std::string csv = "t,x,p\n";
    for (const auto& d : history)
      for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
        if (d.probabilities[i] == 0.0) continue;
        csv += std::to_string(d.time) + "," +
               std::to_string(d.min_position + static_cast<long>(i)) + "," +
               format_double(d.probabilities[i]) + "\n";
      }
    write_text(out_dir / "distribution.csv", csv);
  }

  json summary;
  summary["spec"] = spec_object(s);
  summary["seeds"] = {{"run", s.seed},
                      {"partition", s.partition_seed ? json(*s.partition_seed) : json(nullptr)}};
  const auto& series = result.series;
  if (wants(s, "variance")) {
    summary["variance"] = series.variance;
    if (s.t_max >= 2 && series.variance[s.t_max / 2] > 0.0)
      summary["variance_ratio"] = series.variance[s.t_max] / series.variance[s.t_max / 2];
  }
  if (wants(s, "occrate")) summary["occupancy_rate"] = series.occupancy;
  if (wants(s, "origin-series")) {
    summary["origin_probability"] = series.origin;
    summary["late_origin_average"] =
        late_origin_average(series.origin, s.t_max - s.t_max / 4, s.t_max);
  }
  if (wants(s, "scaling-fit")) {
    if (s.t_max >= 40) {
      const ScalingFit fit = classify_scaling(series.variance, s.t_max / 2, s.t_max);
      summary["scaling_fit"] = {{"k2", fit.k2},
                                {"k1", fit.k1},
                                {"k0_squared", fit.k0_squared},
                                {"residual", fit.residual},
                                {"verdict", to_string(fit.verdict)},
                                {"t_first", s.t_max / 2},
                                {"t_last", s.t_max}};
    } else {
      summary["scaling_fit"] = nullptr;
    }
  }
  summary["max_norm_drift"] = series.max_norm_drift;
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");

  if (wants(s, "graph") || wants(s, "partition") || wants(s, "coin-shift")) {
    const PreparedWalk w = prepare_walk(s);
    if (wants(s, "graph")) write_text(out_dir / "graph.json", graph_json(*w.host).dump() + "\n");
    if (wants(s, "partition"))
      write_text(out_dir / "partition.json",
                 partition_json(w.partition, s.partition_seed).dump() + "\n");
    if (wants(s, "coin-shift"))
      write_text(out_dir / "coin_shift.json", coin_shift_json(w.coin_shift).dump() + "\n");
  }
  return result;
}

// ---------------------------------------------------------------- sweep

std::vector<WalkClass> six_walk_classes() {
  return {
      {"pi1/gc1", PartitionKind::kPi1, CoinShiftKind::kGc1},
      {"pi2/gc1", PartitionKind::kPi2, CoinShiftKind::kGc1},
      {"pi2/gc2", PartitionKind::kPi2, CoinShiftKind::kGc2},
      {"pi4/gc2", PartitionKind::kRandomDicycle, CoinShiftKind::kGc2},
      {"pi3/gc1", PartitionKind::kRandom, CoinShiftKind::kGc1},
      {"pi4/gc1", PartitionKind::kRandomDicycle, CoinShiftKind::kGc1},
  };
}

std::vector<WalkClass> parse_walk_classes(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object() || !j.contains("classes")) return six_walk_classes();
  const json& arr = j.at("classes");
  if (!arr.is_array() || arr.empty()) bad_spec("field 'classes' must be a non-empty list");
  std::vector<WalkClass> classes;
  for (const auto& c : arr) {
    if (!c.is_object()) bad_spec("classes entries must be objects");
    check_keys(c, {"name", "partition", "coin_shift"}, "classes entry");
    WalkClass w;
    w.partition = partition_kind(require(c, "partition").get<std::string>());
    w.coin_shift = coin_shift_kind(require(c, "coin_shift").get<std::string>());
    if (w.coin_shift == CoinShiftKind::kTable)
      bad_spec("sweep classes support gc1 and gc2 only");
    w.name = c.contains("name") ? c.at("name").get<std::string>()
                                : to_string(w.partition) + "/" + to_string(w.coin_shift);
    classes.push_back(std::move(w));
  }
  return classes;
}

namespace {

ExperimentSpec class_spec(const ExperimentSpec& base, const WalkClass& c, std::uint64_t seed) {
  ExperimentSpec s = base;
  s.partition = c.partition;
  s.coin_shift = c.coin_shift;
  s.coin_shift_table.clear();
  s.partition_seed.reset();
  s.seed = seed;
  return resolve_spec(std::move(s));
}

std::string ratio_verdict(double ratio) {
  using namespace calibration;
  if (ratio >= kBallisticRatioLow && ratio <= kBallisticRatioHigh) return "ballistic";
  if (ratio >= kDiffusiveRatioLow && ratio <= kDiffusiveRatioHigh) return "diffusive";
  return "neither";
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& template_spec, const std::vector<WalkClass>& classes,
                      const std::vector<std::uint64_t>& seeds, std::size_t workers,
                      const fs::path& out_dir) {
  SweepResult result;
  result.template_spec = resolve_spec(template_spec);
  const std::size_t T = result.template_spec.t_max;
  const std::vector<std::uint64_t> run_seeds =
      seeds.empty() ? std::vector<std::uint64_t>{template_spec.seed} : seeds;

  struct Job {
    std::size_t cls;
    std::size_t slot;
    ExperimentSpec spec;
  };
  std::vector<Job> jobs;
  result.classes.resize(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto& summary = result.classes[c];
    summary.walk_class = classes[c];
    if (classes[c].seeded()) summary.seeds = run_seeds;
    const std::size_t runs = classes[c].seeded() ? run_seeds.size() : 1;
    summary.per_seed.resize(runs);
    for (std::size_t i = 0; i < runs; ++i) {
      jobs.push_back({c, i, class_spec(template_spec, classes[c],
                                       classes[c].seeded() ? run_seeds[i] : template_spec.seed)});
      // Validate every job before any thread starts.
      (void)prepare_walk(jobs.back().spec);
    }
  }

  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        result.classes[jobs[j].cls].per_seed[jobs[j].slot] = run_series(jobs[j].spec);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  {
    const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (auto& summary : result.classes) {
    const auto& runs = summary.per_seed;
    const double n = static_cast<double>(runs.size());
    summary.mean_variance.assign(T + 1, 0.0);
    summary.occupancy_quarter = summary.occupancy_half = summary.occupancy_end = 1.0;
    for (const auto& r : runs) {
      for (std::size_t t = 0; t <= T; ++t) summary.mean_variance[t] += r.variance[t] / n;
      summary.occupancy_quarter = std::min(summary.occupancy_quarter, r.occupancy[T / 4]);
      summary.occupancy_half = std::min(summary.occupancy_half, r.occupancy[T / 2]);
      summary.occupancy_end = std::min(summary.occupancy_end, r.occupancy[T]);
      summary.late_origin += late_origin_average(r.origin, T - T / 4, T) / n;
    }
    if (T >= 2 && summary.mean_variance[T / 2] > 0.0)
      summary.variance_ratio = summary.mean_variance[T] / summary.mean_variance[T / 2];
    summary.ratio_verdict = ratio_verdict(summary.variance_ratio);
    if (T >= 40) summary.fit = classify_scaling(summary.mean_variance, T / 2, T);
  }
  if (out_dir.empty()) return result;

  ensure_dir(out_dir);
  std::string csv =
      "class,seeded,runs,variance_ratio,ratio_verdict,fit_verdict,k2,k1,"
      "occupancy_quarter,occupancy_half,occupancy_end,late_origin\n";
  json classes_json = json::array();
  for (const auto& c : result.classes) {
    const std::string fit_verdict = c.fit ? to_string(c.fit->verdict) : "none";
    csv += c.walk_class.name + "," + (c.walk_class.seeded() ? "yes" : "no") + "," +
           std::to_string(c.per_seed.size()) + "," + format_double(c.variance_ratio) + "," +
           c.ratio_verdict + "," + fit_verdict + "," + format_double(c.fit ? c.fit->k2 : 0.0) +
           "," + format_double(c.fit ? c.fit->k1 : 0.0) + "," +
           format_double(c.occupancy_quarter) + "," + format_double(c.occupancy_half) + "," +
           format_double(c.occupancy_end) + "," + format_double(c.late_origin) + "\n";
    json runs = json::array();
    for (std::size_t i = 0; i < c.per_seed.size(); ++i) {
      const auto& r = c.per_seed[i];
      runs.push_back({{"seed", c.seeds.empty() ? json(nullptr) : json(c.seeds[i])},
                      {"variance", r.variance},
                      {"occupancy_rate", r.occupancy},
                      {"origin_probability", r.origin}});
    }
    json fit = nullptr;
    if (c.fit)
      fit = {{"k2", c.fit->k2}, {"k1", c.fit->k1}, {"k0_squared", c.fit->k0_squared},
             {"residual", c.fit->residual}, {"verdict", to_string(c.fit->verdict)}};
    classes_json.push_back({{"name", c.walk_class.name},
                            {"partition", to_string(c.walk_class.partition)},
                            {"coin_shift", to_string(c.walk_class.coin_shift)},
                            {"seeds", c.seeds},
                            {"variance_ratio", c.variance_ratio},
                            {"ratio_verdict", c.ratio_verdict},
                            {"scaling_fit", fit},
                            {"mean_variance", c.mean_variance},
                            {"occupancy_min", {c.occupancy_quarter, c.occupancy_half,
                                               c.occupancy_end}},
                            {"late_origin_average", c.late_origin},
                            {"runs", std::move(runs)}});
  }
  write_text(out_dir / "sweep.csv", csv);
  json doc = {{"template", spec_object(result.template_spec)},
              {"seeds", run_seeds},
              {"classes", std::move(classes_json)}};
  write_text(out_dir / "sweep.json", doc.dump(1) + "\n");
  return result;
}

// ---------------------------------------------------------- equivalence

namespace {

double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Amplitude random_amplitude(Rng& rng) {
  const double re = unit_uniform(rng) - 0.5;
  return {re, unit_uniform(rng) - 0.5};
}

template <class Term>
void normalize(std::vector<Term>& terms) {
  double norm = 0.0;
  for (const auto& t : terms) norm += std::norm(t.amplitude);
  for (auto& t : terms) t.amplitude /= std::sqrt(norm);
}

constexpr long kStateReach = 2;

}  // namespace

double recycled_correspondence(std::size_t depth, std::size_t states, std::size_t t_max,
                               std::uint64_t seed) {
  const std::size_t window = min_line_window(t_max + kStateReach, depth);
  auto host = std::make_shared<const RegularDigraph>(make_line_surrogate(window, depth));
  const Partition p = named_partition(NamedPartition::kRecycledCoin, host);
  const Walk walk(p, memory_coin_shift(p), CoinMatrix::hadamard());
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < states; ++k) {
    std::vector<RecycledCoinTerm> terms;
    for (long x = -kStateReach; x <= kStateReach; ++x)
      for (std::size_t mem = 0; mem < (std::size_t{1} << depth); ++mem)
        for (int c : {1, -1}) {
          RecycledCoinTerm t{x, {}, c, random_amplitude(rng)};
          for (std::size_t i = 0; i < depth; ++i) t.memory.push_back((mem >> i) & 1 ? -1 : 1);
          terms.push_back(std::move(t));
        }
    normalize(terms);
    const auto oracle = recycled_coin_walk(window, depth, CoinMatrix::hadamard(), terms, t_max);
    std::vector<BasisAmplitude> basis;
    for (const auto& t : terms) basis.push_back(to_path_basis(t));
    evolve(walk, make_state(*host, basis), t_max, [&](const WalkState& s) {
      worst = std::max(worst, max_abs_difference(position_marginal(s, *host), oracle[s.time]));
    });
  }
  return worst;
}

double reflect_transmit_correspondence(std::size_t states, std::size_t t_max,
                                       std::uint64_t seed) {
  const std::size_t window = min_line_window(t_max + kStateReach, 1);
  auto host = std::make_shared<const RegularDigraph>(make_line_surrogate(window, 1));
  const Partition p = named_partition(NamedPartition::kReflectTransmit, host);
  const Walk walk(p, carried_coin_shift(p), CoinMatrix::hadamard());
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < states; ++k) {
    std::vector<ReflectTransmitTerm> terms;
    for (long x = -kStateReach; x <= kStateReach; ++x)
      for (long prev : {x - 1, x + 1})
        for (int c : {1, -1}) terms.push_back({x, prev, c, random_amplitude(rng)});
    normalize(terms);
    const auto oracle = reflect_transmit_walk(window, CoinMatrix::hadamard(), terms, t_max);
    std::vector<BasisAmplitude> basis;
    for (const auto& t : terms) basis.push_back(to_path_basis(t));
    evolve(walk, make_state(*host, basis), t_max, [&](const WalkState& s) {
      worst = std::max(worst, max_abs_difference(position_marginal(s, *host), oracle[s.time]));
    });
  }
  return worst;
}

MemoryFreeResiduals memory_free_equivalence(std::size_t t_max) {
  MemoryFreeResiduals r;
  const std::size_t window = min_line_window(t_max, 1);
  const long h = static_cast<long>(window - 1) / 2;
  auto host = std::make_shared<const RegularDigraph>(make_line_surrogate(window, 1));
  const Partition p = named_partition(NamedPartition::kReflectTransmit, host);
  const Walk walk(p, carried_coin_shift(p), CoinMatrix::hadamard());

  BetaField beta = initial_beta_field(h);
  AlphaField alpha = initial_alpha_field(h);
  WalkState state = make_state(*host, symmetric_equivalence_state());
  for (std::size_t t = 0; t <= t_max; ++t) {
    if (t > 0) {
      beta = beta_recurrence_step(beta);
      alpha = hadamard_walk_step(alpha);
      walk.step(state);
    }
    r.beta_constraint = std::max(r.beta_constraint, check_beta_constraint(beta));
    const AlphaField rebuilt = alpha_from_beta(beta);
    const BetaField engine = beta_from_state(state, *host);
    for (long x = -h; x <= h; ++x) {
      for (int c : {1, -1}) {
        r.alpha = std::max(r.alpha, std::abs(rebuilt.get(x, c) - alpha.get(x, c)));
        for (long prev : {x - 1, x + 1})
          r.engine_beta = std::max(r.engine_beta, std::abs(engine.get(prev, x, c) -
                                                           beta.get(prev, x, c)));
      }
    }
    r.total_variation =
        std::max(r.total_variation, total_variation(beta.marginal(), alpha.marginal()));
    r.total_variation = std::max(
        r.total_variation, total_variation(position_marginal(state, *host), alpha.marginal()));
    r.norm_drift = std::max({r.norm_drift, std::abs(beta.norm_squared() - 1.0),
                             std::abs(state.norm_squared() - 1.0)});
  }
  return r;
}

EquivalenceReport run_equivalence(std::size_t t_max, const fs::path& out_dir) {
  EquivalenceReport rep;
  rep.t_max = t_max;
  rep.residuals = memory_free_equivalence(t_max);
  rep.recycled_d1 = recycled_correspondence(1, 10, t_max, 11);
  rep.recycled_d2 = recycled_correspondence(2, 10, t_max, 12);
  rep.reflect_transmit = reflect_transmit_correspondence(10, t_max, 13);

  // Flipping one sign keeps the norm but breaks the pattern the
  // correspondence relies on.
  BetaField control = initial_beta_field(static_cast<long>(t_max) + 2);
  control.set(1, 0, -1, -0.5);
  for (std::size_t t = 0; t <= t_max; ++t) {
    rep.control_constraint = std::max(rep.control_constraint, check_beta_constraint(control));
    control = beta_recurrence_step(control);
  }
  rep.control_applicable = rep.control_constraint <= kUnitaryTolerance;

  const auto& r = rep.residuals;
  rep.passed = r.beta_constraint < kUnitaryTolerance && r.engine_beta < kUnitaryTolerance &&
               r.alpha < kCrossCheckTolerance && r.total_variation < kCrossCheckTolerance &&
               r.norm_drift < kUnitaryTolerance && rep.recycled_d1 < kUnitaryTolerance &&
               rep.recycled_d2 < kUnitaryTolerance && rep.reflect_transmit < kUnitaryTolerance &&
               !rep.control_applicable;
  if (out_dir.empty()) return rep;

  ensure_dir(out_dir);
  json doc = {
      {"t_max", t_max},
      {"memory_free",
       {{"beta_constraint_max", r.beta_constraint},
        {"alpha_max_abs_error", r.alpha},
        {"total_variation_max", r.total_variation},
        {"engine_beta_max_abs_error", r.engine_beta},
        {"norm_drift_max", r.norm_drift}}},
      {"correspondence",
       {{"recycled_depth1_max_abs_error", rep.recycled_d1},
        {"recycled_depth2_max_abs_error", rep.recycled_d2},
        {"reflect_transmit_max_abs_error", rep.reflect_transmit},
        {"random_states", 10}}},
      {"negative_control",
       {{"constraint_residual_max", rep.control_constraint},
        {"equivalence_applicable", rep.control_applicable}}},
      {"tolerances", {{"exact", kUnitaryTolerance}, {"cross_check", kCrossCheckTolerance}}},
      {"passed", rep.passed}};
  write_text(out_dir / "equivalence.json", doc.dump(2) + "\n");
  return rep;
}

// ------------------------------------------------------------ enumerate

BruteForceCount brute_force_coin_shifts(const Partition& p) {
  const std::size_t n = p.host().size();
  const std::size_t m = p.coins();
  const std::size_t entries = n * m;
  double total = std::pow(static_cast<double>(m), static_cast<double>(entries));
  if (total > static_cast<double>(1u << 20))
    fail(ErrorKind::kSize, "brute force over " + std::to_string(entries) + " entries is too large");
  BruteForceCount out;
  out.tables = static_cast<std::size_t>(total);
  std::vector<Coin> table(entries);
  std::vector<std::size_t> image(entries);
  for (std::size_t code = 0; code < out.tables; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < entries; ++i) {
      table[i] = rest % m;
      rest /= m;
    }
    for (Vertex v = 0; v < n; ++v)
      for (Coin k = 0; k < m; ++k) image[v * m + k] = p.successor(k, v) * m + table[v * m + k];
    const bool bijective = is_permutation_table(image);
    out.bijective += bijective;
    out.disagreements += bijective != validate_coin_shift(p, CoinShift(m, table)).valid;
  }
  return out;
}

EnumerateReport run_enumerate(const std::vector<std::uint64_t>& seeds, std::size_t t,
                              const fs::path& out_dir) {
  EnumerateReport rep;
  rep.t = t;
  rep.walks = count_distinct_dicycle_walks(seeds, t);

  auto host = std::make_shared<const RegularDigraph>(make_line_surrogate(3, 1));
  const std::pair<std::string, Partition> partitions[] = {
      {"pi1", named_partition(NamedPartition::kRecycledCoin, host)},
      {"pi2", named_partition(NamedPartition::kReflectTransmit, host)},
      {"random(seed=1)", random_partition(host, 1)},
      {"random-dicycle(seed=1)", random_dicycle_factorization(host, 1)},
  };
  bool ok = rep.walks.class_count <= 8 && rep.walks.key_mismatches == 0;
  for (const auto& [name, p] : partitions) {
    EnumerationCase c;
    c.partition = name;
    c.is_dicycle = p.is_dicycle();
    const auto all = enumerate_coin_shifts(p);
    c.enumerated = all.size();
    c.brute_force = brute_force_coin_shifts(p);
    c.has_gc1 = std::find(all.begin(), all.end(), memory_coin_shift(p)) != all.end();
    if (c.is_dicycle)
      c.has_gc2 = std::find(all.begin(), all.end(), carried_coin_shift(p)) != all.end();
    ok = ok && c.enumerated == c.brute_force.bijective && c.brute_force.disagreements == 0 &&
         c.has_gc1 && (c.has_gc2 || !c.is_dicycle);
    rep.cases.push_back(std::move(c));
  }
  rep.passed = ok;
  if (out_dir.empty()) return rep;

  ensure_dir(out_dir);
  json cases = json::array();
  for (const auto& c : rep.cases)
    cases.push_back({{"partition", c.partition},
                     {"is_dicycle", c.is_dicycle},
                     {"enumerated", c.enumerated},
                     {"brute_force_tables", c.brute_force.tables},
                     {"brute_force_bijective", c.brute_force.bijective},
                     {"validator_disagreements", c.brute_force.disagreements},
                     {"contains_gc1", c.has_gc1},
                     {"contains_gc2", c.has_gc2}});
  json walks = json::array();
  for (std::size_t i = 0; i < rep.walks.seeds.size(); ++i)
    walks.push_back({{"seed", rep.walks.seeds[i]},
                     {"class", rep.walks.class_of_seed[i]},
                     {"key", rep.walks.key_of_seed[i]}});
  json doc = {{"t", t},
              {"distinct_walks",
               {{"class_count", rep.walks.class_count},
                {"key_mismatches", rep.walks.key_mismatches},
                {"seeds", std::move(walks)}}},
              {"coin_shift_enumeration",
               {{"host", "line digraph of the bidirected 3-cycle (6 vertices)"},
                {"cases", std::move(cases)}}},
              {"passed", rep.passed}};
  write_text(out_dir / "enumerate.json", doc.dump(2) + "\n");
  return rep;
}

}  // namespace qwm
