// Copyright 2026 The reident Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the reident library. All functions are thread-safe except
 * where a handle is shared and freed concurrently. Errors are reported by
 * status code; reid_last_error() holds the message for the calling thread. */

#ifndef REIDENT_REIDENT_H_
#define REIDENT_REIDENT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(REIDENT_BUILDING_LIBRARY)
#define REID_API __attribute__((visibility("default")))
#else
#define REID_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum reid_status {
  REID_OK = 0,
  REID_ERR_INGEST = 1,   /* dataset missing, malformed or invalid */
  REID_ERR_CONFIG = 2,   /* bad parameters or configuration */
  REID_ERR_EVAL = 3,     /* preprocessing, alignment or evaluation failed */
  REID_ERR_ARGUMENT = 4, /* null pointer or out-of-range index */
  REID_ERR_INTERNAL = 5
} reid_status;

typedef struct reid_dataset reid_dataset;

REID_API const char* reid_version(void);

/* Message of the last failed call on this thread; "" if none. */
REID_API const char* reid_last_error(void);

/* Reads <dir>/manifest.json and the per-subject CSVs. */
REID_API reid_status reid_dataset_load(const char* dir, reid_dataset** out);
REID_API reid_status reid_dataset_synthesize(uint32_t n_subjects,
                                             double duration_s, uint64_t seed,
                                             double separability,
                                             reid_dataset** out);
REID_API reid_status reid_dataset_write(const reid_dataset* dataset,
                                        const char* dir);
REID_API size_t reid_dataset_size(const reid_dataset* dataset);
/* The returned string lives as long as the dataset. */
REID_API reid_status reid_dataset_subject_id(const reid_dataset* dataset,
                                             size_t index, const char** out);
/* Number of schema violations across all subjects. */
REID_API reid_status reid_dataset_validate(const reid_dataset* dataset,
                                           size_t* n_problems);
REID_API void reid_dataset_free(reid_dataset* dataset);

/* step_pattern: "symmetric1" or "symmetric2". band < 0 disables the
 * Sakoe-Chiba constraint. */
REID_API reid_status reid_dtw_distance(const double* x, size_t n,
                                       const double* y, size_t m,
                                       const char* step_pattern,
                                       int path_normalized, int64_t band,
                                       double* out);

/* Runs attack, sweep, optimize, heatmap, synth or validate with a JSON run
 * configuration. When result_json is non-null it receives a JSON document
 * (free with reid_string_free): the resolved config, or for validate the
 * list of problems, in which case a non-empty list yields REID_ERR_INGEST.
 * Progress goes to stderr when verbose is non-zero. */
REID_API reid_status reid_run(const char* command, const char* config_json,
                              int verbose, char** result_json);
REID_API void reid_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* REIDENT_REIDENT_H_ */
