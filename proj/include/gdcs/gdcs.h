// Copyright 2026 The GDCS Authors
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

/*
 * C interface to the gdcs library. Objects are opaque handles created and
 * released by the functions below. Every call returns a gdcs_status; on
 * failure gdcs_last_error() describes the problem for the calling thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with gdcs_string_free.
 */
#ifndef GDCS_GDCS_H_
#define GDCS_GDCS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(GDCS_BUILDING_LIBRARY)
#define GDCS_API __attribute__((visibility("default")))
#else
#define GDCS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gdcs_status {
  GDCS_OK = 0,
  GDCS_INVALID_ARGUMENT = 1,
  GDCS_SHAPE_MISMATCH = 2,
  GDCS_AMBIGUOUS_SOLUTION = 3,
  GDCS_NOT_BRACKETED = 4,
  GDCS_SOLVER_FAILURE = 5,
  GDCS_PARSE_ERROR = 6,
  GDCS_IO_ERROR = 7,
  GDCS_INTERNAL_ERROR = 99
} gdcs_status;

typedef struct gdcs_ensemble gdcs_ensemble;
typedef struct gdcs_measurements gdcs_measurements;

GDCS_API const char* gdcs_version(void);
GDCS_API const char* gdcs_last_error(void);
GDCS_API const char* gdcs_status_name(gdcs_status status);
GDCS_API void gdcs_string_free(char* s);

/* Ensembles. `config_json` uses the experiment config schema; only the
 * signal fields (length, sensors, full_common, partials, innovation) matter,
 * and a sweep is not required. */
GDCS_API gdcs_status gdcs_ensemble_generate(const char* config_json, uint64_t seed,
                                            gdcs_ensemble** out);
GDCS_API gdcs_status gdcs_ensemble_from_json(const char* json, gdcs_ensemble** out);
GDCS_API gdcs_status gdcs_ensemble_to_json(const gdcs_ensemble* ensemble, char** out);
GDCS_API gdcs_status gdcs_ensemble_shape(const gdcs_ensemble* ensemble, int* sensors,
                                         int* length);
/* Copies x_j into `out`, which holds `capacity` doubles (at least length). */
GDCS_API gdcs_status gdcs_ensemble_signal(const gdcs_ensemble* ensemble, int sensor, double* out,
                                          size_t capacity);
GDCS_API void gdcs_ensemble_free(gdcs_ensemble* ensemble);

/* Measurements: Gaussian Phi_j with counts[j] rows, observations Y. */
GDCS_API gdcs_status gdcs_sense(const gdcs_ensemble* ensemble, const int* counts, size_t sensors,
                                uint64_t seed, gdcs_measurements** out);
GDCS_API gdcs_status gdcs_measurements_from_json(const char* json, gdcs_measurements** out);
GDCS_API gdcs_status gdcs_measurements_to_json(const gdcs_measurements* measurements,
                                               char** out);
GDCS_API gdcs_status gdcs_measurements_counts(const gdcs_measurements* measurements, int* counts,
                                              size_t capacity, size_t* sensors);
GDCS_API void gdcs_measurements_free(gdcs_measurements* measurements);

/* Feasibility table for the ensemble's supports as JSON. `counts` may be
 * NULL, in which case the minimal uniform tuple is evaluated. */
GDCS_API gdcs_status gdcs_bound_report(const gdcs_ensemble* ensemble, const int* counts,
                                       size_t sensors, int unknown_p_margin, char** out_json);

/* Recovery. `mode` is separate, dcs, gdcs-oracle or gdcs-search.
 * `options_json` may be NULL or an object with optional "solver" settings and
 * "structure" (list of sensor lists, required for gdcs-oracle unless `truth`
 * is given). `truth` may be NULL; when given, the relative error is
 * reported. The result is a JSON document. */
GDCS_API gdcs_status gdcs_recover(const gdcs_measurements* measurements, const char* mode,
                                  const char* options_json, const gdcs_ensemble* truth,
                                  char** out_json);

/* Runs a sweep; `config_json` must carry a seed. Returns the CSV table. */
GDCS_API gdcs_status gdcs_experiment_run(const char* config_json, char** out_csv);

/* Validates a config and returns it with every default filled in. */
GDCS_API gdcs_status gdcs_experiment_config(const char* config_json, char** out_json);

/* Renders a CSV table as an SVG document. `title` may be NULL. */
GDCS_API gdcs_status gdcs_plot_svg(const char* csv, const char* title, char** out_svg);

#ifdef __cplusplus
}
#endif

#endif /* GDCS_GDCS_H_ */
