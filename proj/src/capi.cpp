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

#include "qwm/qwm.h"

#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "qwm/error.hpp"
#include "qwm/experiment.hpp"

struct qwm_spec {
  qwm::ExperimentSpec spec;
  std::string source;  // original JSON, kept for sweep class lists
};

struct qwm_walk {
  qwm::PreparedWalk prepared;
  qwm::WalkState state;
  // Step budget on the line surrogate; no limit on a genuine cycle.
  std::optional<std::size_t> horizon;
};

namespace {

thread_local std::string last_error;

qwm_status status_of(qwm::ErrorKind kind) {
  switch (kind) {
    case qwm::ErrorKind::kInvalidArgument: return QWM_ERR_INVALID_ARGUMENT;
    case qwm::ErrorKind::kInvalidGraph:
    case qwm::ErrorKind::kInvalidSpec:
    case qwm::ErrorKind::kUnsupported: return QWM_ERR_SPEC;
    case qwm::ErrorKind::kConstraintViolation: return QWM_ERR_CONSTRAINT;
    case qwm::ErrorKind::kNumerical: return QWM_ERR_NUMERICAL;
    case qwm::ErrorKind::kSize: return QWM_ERR_SIZE;
    case qwm::ErrorKind::kIo: return QWM_ERR_IO;
  }
  return QWM_ERR_INTERNAL;
}

template <class F>
qwm_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return QWM_OK;
  } catch (const qwm::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return QWM_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) qwm::fail(qwm::ErrorKind::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::filesystem::path out_path(const char* dir) { return dir ? dir : ""; }

}  // namespace

extern "C" {

const char* qwm_version(void) { return "0.1.0"; }

const char* qwm_last_error(void) { return last_error.c_str(); }

const char* qwm_status_name(qwm_status status) {
  switch (status) {
    case QWM_OK: return "ok";
    case QWM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QWM_ERR_SPEC: return "spec validation failure";
    case QWM_ERR_CONSTRAINT: return "constraint violation";
    case QWM_ERR_NUMERICAL: return "numerical check failure";
    case QWM_ERR_SIZE: return "input too large";
    case QWM_ERR_IO: return "i/o error";
    case QWM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qwm_string_free(char* s) { delete[] s; }

qwm_status qwm_spec_from_json(const char* json_text, qwm_spec** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = nullptr;
    *out = new qwm_spec{qwm::parse_spec(json_text), json_text};
  });
}

qwm_status qwm_spec_from_file(const char* path, qwm_spec** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) qwm::fail(qwm::ErrorKind::kInvalidSpec, std::string("cannot read config ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    *out = new qwm_spec{qwm::parse_spec(text.str()), text.str()};
  });
}

qwm_status qwm_spec_resolved_json(const qwm_spec* spec, char** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = copy_string(qwm::spec_to_json(qwm::resolve_spec(spec->spec)));
  });
}

qwm_status qwm_spec_set_t_max(qwm_spec* spec, size_t t_max) {
  return guarded([&] {
    require(spec, "null spec");
    spec->spec.t_max = t_max;
    // A window sized for the old horizon no longer applies.
    if (spec->spec.family == qwm::ExperimentSpec::Family::kLine) spec->spec.window = 0;
  });
}

qwm_status qwm_spec_set_seed(qwm_spec* spec, uint64_t seed) {
  return guarded([&] {
    require(spec, "null spec");
    spec->spec.seed = seed;
    spec->spec.partition_seed = seed;
  });
}

void qwm_spec_free(qwm_spec* spec) { delete spec; }

qwm_status qwm_walk_create(const qwm_spec* spec, qwm_walk** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = nullptr;
    const qwm::ExperimentSpec resolved = qwm::resolve_spec(spec->spec);
    qwm::PreparedWalk prepared = qwm::prepare_walk(resolved);
    qwm::WalkState state = prepared.initial;
    std::optional<std::size_t> horizon;
    if (resolved.family == qwm::ExperimentSpec::Family::kLine) horizon = resolved.t_max;
    *out = new qwm_walk{std::move(prepared), std::move(state), horizon};
  });
}

qwm_status qwm_walk_step(qwm_walk* walk, size_t steps) {
  return guarded([&] {
    require(walk, "null walk");
    if (walk->horizon && walk->state.time + steps > *walk->horizon)
      qwm::fail(qwm::ErrorKind::kInvalidSpec,
                "stepping past t_max = " + std::to_string(*walk->horizon) +
                    " would wrap around the line window");
    for (size_t i = 0; i < steps; ++i) walk->prepared.walk.step(walk->state);
  });
}

qwm_status qwm_walk_time(const qwm_walk* walk, size_t* out) {
  return guarded([&] {
    require(walk && out, "null argument");
    *out = walk->state.time;
  });
}

qwm_status qwm_walk_norm(const qwm_walk* walk, double* out) {
  return guarded([&] {
    require(walk && out, "null argument");
    *out = walk->state.norm_squared();
  });
}

qwm_status qwm_walk_distribution(const qwm_walk* walk, double* probabilities, size_t capacity,
                                 long* min_position, size_t* count) {
  return guarded([&] {
    require(walk && count, "null argument");
    const qwm::PositionDistribution d =
        qwm::position_marginal(walk->state, *walk->prepared.host);
    *count = d.probabilities.size();
    if (min_position) *min_position = d.min_position;
    if (!probabilities) return;
    require(capacity >= d.probabilities.size(), "buffer too small");
    std::memcpy(probabilities, d.probabilities.data(), d.probabilities.size() * sizeof(double));
  });
}

void qwm_walk_free(qwm_walk* walk) { delete walk; }

qwm_status qwm_run_simulate(const qwm_spec* spec, const char* out_dir) {
  return guarded([&] {
    require(spec && out_dir, "null argument");
    qwm::run_simulate(spec->spec, out_path(out_dir));
  });
}

qwm_status qwm_run_sweep(const qwm_spec* spec, const uint64_t* seeds, size_t n_seeds,
                         size_t workers, const char* out_dir) {
  return guarded([&] {
    require(out_dir && (seeds || n_seeds == 0), "null argument");
    qwm::ExperimentSpec tmpl;
    tmpl.t_max = 200;
    std::vector<qwm::WalkClass> classes = qwm::six_walk_classes();
    if (spec) {
      tmpl = spec->spec;
      classes = qwm::parse_walk_classes(spec->source);
    }
    qwm::run_sweep(tmpl, classes, std::vector<uint64_t>(seeds, seeds + n_seeds), workers,
                   out_path(out_dir));
  });
}

qwm_status qwm_run_equivalence(size_t t_max, const char* out_dir, int* passed) {
  return guarded([&] {
    require(out_dir && passed, "null argument");
    *passed = qwm::run_equivalence(t_max, out_path(out_dir)).passed ? 1 : 0;
  });
}

qwm_status qwm_run_enumerate(const uint64_t* seeds, size_t n_seeds, size_t t,
                             const char* out_dir, int* passed) {
  return guarded([&] {
    require(out_dir && passed && (seeds || n_seeds == 0), "null argument");
    *passed = qwm::run_enumerate(std::vector<uint64_t>(seeds, seeds + n_seeds), t,
                                 out_path(out_dir))
                      .passed
                  ? 1
                  : 0;
  });
}

}  // extern "C"
