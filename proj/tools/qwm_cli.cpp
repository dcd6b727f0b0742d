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

// qwm: command-line front end over the C library interface.
//
//   qwm simulate    --config spec.json --out DIR [--t-max N] [--seeds LIST]
//   qwm sweep       [--config sweep.json] --out DIR [--seeds 1-20] [--workers N]
//   qwm equivalence --out DIR [--t-max 100]
//   qwm enumerate   --out DIR [--seeds 1-50] [--t-max 30]
//
// Exit status: 0 success, 2 invalid spec, 3 constraint violation,
// 4 numerical check failure, 1 anything else.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qwm/qwm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitSpec = 2;
constexpr int kExitConstraint = 3;
constexpr int kExitNumerical = 4;

int exit_code(qwm_status s) {
  switch (s) {
    case QWM_OK: return kExitOk;
    case QWM_ERR_INVALID_ARGUMENT:
    case QWM_ERR_SPEC:
    case QWM_ERR_SIZE: return kExitSpec;
    case QWM_ERR_CONSTRAINT: return kExitConstraint;
    case QWM_ERR_NUMERICAL: return kExitNumerical;
    default: return kExitOther;
  }
}

int report(qwm_status s, const char* what) {
  if (s != QWM_OK)
    std::fprintf(stderr, "qwm %s: %s: %s\n", what, qwm_status_name(s), qwm_last_error());
  return exit_code(s);
}

std::uint64_t parse_u64(const std::string& text, const std::string& item) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) throw std::invalid_argument(item);
  return v;
}

// "1,2,5-9" -> {1,2,5,6,7,8,9}; an empty string gives an empty list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse_u64(item, item));
      continue;
    }
    const std::uint64_t lo = parse_u64(item.substr(0, dash), item);
    const std::uint64_t hi = parse_u64(item.substr(dash + 1), item);
    if (hi < lo || hi - lo > 1'000'000) throw std::invalid_argument(item);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::string> seeds;
  std::optional<std::size_t> t_max;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, Options& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "experiment spec (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--seeds", o.seeds, "seed list, e.g. 1-20 or 3,5,8");
  cmd->add_option("--t-max", o.t_max, "number of steps");
  cmd->add_option("--workers", o.workers, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
}

struct SpecHandle {
  qwm_spec* spec = nullptr;
  ~SpecHandle() { qwm_spec_free(spec); }
};

int run_simulate(const Options& o) {
  SpecHandle h;
  if (qwm_status s = qwm_spec_from_file(o.config.c_str(), &h.spec)) return report(s, "simulate");
  if (o.t_max) qwm_spec_set_t_max(h.spec, *o.t_max);
  const auto seeds = o.seeds ? parse_seeds(*o.seeds) : std::vector<std::uint64_t>{};
  if (seeds.size() <= 1) {
    if (!seeds.empty()) qwm_spec_set_seed(h.spec, seeds[0]);
    return report(qwm_run_simulate(h.spec, o.out.c_str()), "simulate");
  }
  // Validate everything before writing anything.
  for (std::uint64_t seed : seeds) {
    qwm_spec_set_seed(h.spec, seed);
    qwm_walk* walk = nullptr;
    if (qwm_status s = qwm_walk_create(h.spec, &walk)) return report(s, "simulate");
    qwm_walk_free(walk);
  }
  for (std::uint64_t seed : seeds) {
    qwm_spec_set_seed(h.spec, seed);
    const std::string dir = o.out + "/seed-" + std::to_string(seed);
    if (qwm_status s = qwm_run_simulate(h.spec, dir.c_str())) return report(s, "simulate");
  }
  return kExitOk;
}

int run_sweep(const Options& o) {
  SpecHandle h;
  if (!o.config.empty())
    if (qwm_status s = qwm_spec_from_file(o.config.c_str(), &h.spec)) return report(s, "sweep");
  if (o.t_max) {
    if (!h.spec)
      if (qwm_status s = qwm_spec_from_json("{\"t_max\": 200}", &h.spec)) return report(s, "sweep");
    qwm_spec_set_t_max(h.spec, *o.t_max);
  }
  const auto seeds = parse_seeds(o.seeds.value_or("1-20"));
  std::printf("sweep: %zu seeds, %zu workers\n", seeds.size(), o.workers);
  const qwm_status s = qwm_run_sweep(h.spec, seeds.data(), seeds.size(), o.workers, o.out.c_str());
  if (s == QWM_OK) {
    std::FILE* f = std::fopen((o.out + "/sweep.csv").c_str(), "r");
    if (f) {
      char line[512];
      while (std::fgets(line, sizeof line, f)) std::fputs(line, stdout);
      std::fclose(f);
    }
  }
  return report(s, "sweep");
}

int run_equivalence(const Options& o) {
  int passed = 0;
  const qwm_status s = qwm_run_equivalence(o.t_max.value_or(100), o.out.c_str(), &passed);
  if (s != QWM_OK) return report(s, "equivalence");
  std::printf("equivalence: %s (details in %s/equivalence.json)\n", passed ? "pass" : "FAIL",
              o.out.c_str());
  return passed ? kExitOk : kExitNumerical;
}

int run_enumerate(const Options& o) {
  const auto seeds = parse_seeds(o.seeds.value_or("1-50"));
  int passed = 0;
  const qwm_status s =
      qwm_run_enumerate(seeds.data(), seeds.size(), o.t_max.value_or(30), o.out.c_str(), &passed);
  if (s != QWM_OK) return report(s, "enumerate");
  std::printf("enumerate: %s (details in %s/enumerate.json)\n", passed ? "pass" : "FAIL",
              o.out.c_str());
  return passed ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum walks with memory on regular graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qwm_version());

  Options sim, sweep, eq, en;
  auto* c_sim = app.add_subcommand("simulate", "run one experiment spec");
  add_common(c_sim, sim, true);
  auto* c_sweep = app.add_subcommand("sweep", "compare walk classes over seeds");
  add_common(c_sweep, sweep, false);
  auto* c_eq = app.add_subcommand("equivalence", "memory/memoryless equivalence checks");
  add_common(c_eq, eq, false);
  auto* c_en = app.add_subcommand("enumerate", "distinct-walk count and coin-shift enumeration");
  add_common(c_en, en, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSpec;
  }

  try {
    if (*c_sim) return run_simulate(sim);
    if (*c_sweep) return run_sweep(sweep);
    if (*c_eq) return run_equivalence(eq);
    if (*c_en) return run_enumerate(en);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "qwm: bad seed list entry '%s'\n", e.what());
    return kExitSpec;
  }
  return kExitOther;
}
