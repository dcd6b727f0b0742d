/*
 * Copyright 2026 The qwm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the quantum-walk-with-memory library.
 *
 * Every function returns a qwm_status. On failure, qwm_last_error() returns a
 * message for the calling thread that stays valid until the next call into
 * the library from that thread. Strings handed out by the library are
 * released with qwm_string_free. Handles are not thread-safe; distinct
 * handles may be used from distinct threads.
 */

#ifndef QWM_QWM_H_
#define QWM_QWM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QWM_BUILDING_LIBRARY)
#define QWM_API __attribute__((visibility("default")))
#else
#define QWM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwm_status {
  QWM_OK = 0,
  QWM_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad size */
  QWM_ERR_SPEC = 2,             /* experiment spec failed validation */
  QWM_ERR_CONSTRAINT = 3,       /* coin shift breaks the unitarity constraint */
  QWM_ERR_NUMERICAL = 4,        /* a numerical self-check failed */
  QWM_ERR_SIZE = 5,             /* input too large for an exhaustive routine */
  QWM_ERR_IO = 6,
  QWM_ERR_INTERNAL = 7
} qwm_status;

typedef struct qwm_spec qwm_spec;
typedef struct qwm_walk qwm_walk;

QWM_API const char* qwm_version(void);
QWM_API const char* qwm_last_error(void);
QWM_API const char* qwm_status_name(qwm_status status);
QWM_API void qwm_string_free(char* s);

/* ---- experiment specs (JSON documents) ---- */
QWM_API qwm_status qwm_spec_from_json(const char* json_text, qwm_spec** out);
QWM_API qwm_status qwm_spec_from_file(const char* path, qwm_spec** out);
/* Fully resolved canonical JSON (window, seeds and initial amplitudes filled). */
QWM_API qwm_status qwm_spec_resolved_json(const qwm_spec* spec, char** out);
QWM_API qwm_status qwm_spec_set_t_max(qwm_spec* spec, size_t t_max);
QWM_API qwm_status qwm_spec_set_seed(qwm_spec* spec, uint64_t seed);
QWM_API void qwm_spec_free(qwm_spec* spec);

/* ---- stepping a single walk ---- */
QWM_API qwm_status qwm_walk_create(const qwm_spec* spec, qwm_walk** out);
QWM_API qwm_status qwm_walk_step(qwm_walk* walk, size_t steps);
QWM_API qwm_status qwm_walk_time(const qwm_walk* walk, size_t* out);
QWM_API qwm_status qwm_walk_norm(const qwm_walk* walk, double* out);
/* Position distribution: *count entries starting at *min_position. Call with
 * probabilities == NULL to query the count. */
QWM_API qwm_status qwm_walk_distribution(const qwm_walk* walk, double* probabilities,
                                         size_t capacity, long* min_position, size_t* count);
QWM_API void qwm_walk_free(qwm_walk* walk);

/* ---- runners (write files under out_dir) ---- */
QWM_API qwm_status qwm_run_simulate(const qwm_spec* spec, const char* out_dir);
/* spec may be NULL for the default template; classes come from the spec's
 * "classes" array or default to the six standard walk classes. */
QWM_API qwm_status qwm_run_sweep(const qwm_spec* spec, const uint64_t* seeds, size_t n_seeds,
                                 size_t workers, const char* out_dir);
/* *passed receives 1 when every residual is within tolerance. */
QWM_API qwm_status qwm_run_equivalence(size_t t_max, const char* out_dir, int* passed);
QWM_API qwm_status qwm_run_enumerate(const uint64_t* seeds, size_t n_seeds, size_t t,
                                     const char* out_dir, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* QWM_QWM_H_ */
