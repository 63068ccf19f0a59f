/*
 * Copyright (c) 2026 The dissynth authors
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


#ifndef DISSYNTH_DISSYNTH_H
#define DISSYNTH_DISSYNTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DISSYNTH_API __declspec(dllexport)
#else
#define DISSYNTH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the command line tool. */
typedef enum dissynth_status {
  DISSYNTH_OK = 0,
  DISSYNTH_ERROR = 1,      /* I/O, parse or validation failure */
  DISSYNTH_INFEASIBLE = 2,
  DISSYNTH_HYPOTHESIS = 3, /* a required hypothesis does not hold */
  DISSYNTH_UNDECIDED = 4
} dissynth_status;

typedef struct dissynth_problem dissynth_problem;
typedef struct dissynth_result dissynth_result;

DISSYNTH_API const char* dissynth_version(void);

/* Message for the last failing call on this thread; never NULL. */
DISSYNTH_API const char* dissynth_last_error(void);

/* Strings returned through char** are owned by the caller. */
DISSYNTH_API void dissynth_string_free(char* s);

DISSYNTH_API dissynth_status dissynth_problem_parse(const char* json,
                                                    dissynth_problem** out);
DISSYNTH_API dissynth_status dissynth_problem_load(const char* path,
                                                   dissynth_problem** out);
DISSYNTH_API dissynth_status dissynth_problem_to_json(const dissynth_problem* p,
                                                      char** json);
/* Seed stored in the problem file. */
DISSYNTH_API uint64_t dissynth_problem_seed(const dissynth_problem* p);
DISSYNTH_API void dissynth_problem_free(dissynth_problem* p);

/*
 * Runs synthesis. mode is "known", "unknown" or NULL for the mode in the
 * file. A result is produced for every verdict, including hypothesis
 * failures; it is NULL only when DISSYNTH_ERROR is returned.
 */
DISSYNTH_API dissynth_status dissynth_synthesize(const dissynth_problem* p,
                                                 const char* mode,
                                                 dissynth_result** out);

/*
 * Samples consistent systems and checks the closed loop; stores the report
 * in the result. Returns DISSYNTH_OK when it passes, DISSYNTH_INFEASIBLE
 * when some sample violates the inequality.
 */
DISSYNTH_API dissynth_status dissynth_verify(const dissynth_problem* p,
                                             dissynth_result* r, int samples,
                                             uint64_t seed, double tol);

DISSYNTH_API dissynth_status dissynth_result_parse(const char* json,
                                                   dissynth_result** out);
DISSYNTH_API dissynth_status dissynth_result_load(const char* path,
                                                  dissynth_result** out);
DISSYNTH_API dissynth_status dissynth_result_to_json(const dissynth_result* r,
                                                     char** json);
/* Status a synthesis result maps to (the one dissynth_synthesize returned). */
DISSYNTH_API dissynth_status dissynth_result_status(const dissynth_result* r);
/* name is "K" or "P"; copies row-major when capacity suffices. */
DISSYNTH_API dissynth_status dissynth_result_matrix(const dissynth_result* r,
                                                    const char* name,
                                                    double* data,
                                                    size_t capacity,
                                                    size_t* rows, size_t* cols);
/* name is "alpha", "epsilon", "feasibilityMargin" or "recheckMinEig". */
DISSYNTH_API dissynth_status dissynth_result_scalar(const dissynth_result* r,
                                                    const char* name,
                                                    double* value);
/* Human readable summary. */
DISSYNTH_API dissynth_status dissynth_result_summary(const dissynth_result* r,
                                                     char** text);
DISSYNTH_API void dissynth_result_free(dissynth_result* r);

/* JSON in, JSON out. The status is the verdict of the command. */
DISSYNTH_API dissynth_status dissynth_generate(const char* config_json,
                                               const uint64_t* seed,
                                               char** problem_json);
DISSYNTH_API dissynth_status dissynth_analyze(const char* model_json,
                                              char** report_json);
DISSYNTH_API dissynth_status dissynth_slemma(const char* query_json,
                                             char** report_json);

#ifdef __cplusplus
}
#endif

#endif
