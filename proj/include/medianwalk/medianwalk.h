#ifndef MEDIANWALK_H
#define MEDIANWALK_H

/* C interface to libmedianwalk. Functions return an mw_status; on failure the
 * message and offending key/detail are available from mw_last_error() and
 * mw_last_error_detail() on the calling thread. Strings returned through
 * char** outputs are owned by the caller and released with mw_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(MW_BUILDING_LIBRARY)
#define MW_API __attribute__((visibility("default")))
#else
#define MW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mw_status {
  MW_OK = 0,
  MW_INVALID_ARGUMENT = 1,
  MW_NOT_CONNECTED = 2,
  MW_NOT_MEDIAN = 3,
  MW_NOT_BIPARTITE = 4,
  MW_VERTEX_OUT_OF_RANGE = 5,
  MW_SIZE_BUDGET_EXCEEDED = 6,
  MW_WALL_OUT_OF_RANGE = 7,
  MW_INTEGRITY_FAILURE = 8,
  MW_NOT_FOUND = 9,
  MW_CHAIN_INVALID = 10,
  MW_DISCONNECTED = 11,
  MW_UNKNOWN_GENERATOR = 12,
  MW_DEFINING_GRAPH_MISMATCH = 13,
  MW_PIECE_MISMATCH = 14,
  MW_RADIUS_ZERO = 15,
  MW_BUDGET_EXCEEDED = 16,
  MW_PROB_SUM_INVALID = 17,
  MW_NOT_GENERATING = 18,
  MW_TOO_FEW_TRIALS = 19,
  MW_PARSE_ERROR = 20,
  MW_SCHEMA_VIOLATION = 21,
  MW_FILE_MISSING = 22,
  MW_IO_ERROR = 23,
  MW_INTERNAL = 99
} mw_status;

typedef struct mw_complex mw_complex;
typedef struct mw_graph mw_graph;
typedef struct mw_element mw_element;

MW_API const char* mw_version(void);
MW_API const char* mw_last_error(void);
MW_API const char* mw_last_error_detail(void);
MW_API void mw_string_free(char* s);

/* Finite median complexes. */
MW_API mw_status mw_complex_generate(const char* family, size_t max_vertices, mw_complex** out);
MW_API mw_status mw_complex_from_json(const char* text, mw_complex** out);
MW_API mw_status mw_complex_to_json(const mw_complex* c, char** out);
MW_API void mw_complex_free(mw_complex* c);
MW_API size_t mw_complex_vertex_count(const mw_complex* c);
MW_API size_t mw_complex_wall_count(const mw_complex* c);
MW_API mw_status mw_complex_distance(const mw_complex* c, uint32_t x, uint32_t y, uint32_t* out);
MW_API mw_status mw_complex_median(const mw_complex* c, uint32_t x, uint32_t y, uint32_t z, uint32_t* out);

/* Right-angled Artin groups. */
MW_API mw_status mw_graph_named(const char* spec, mw_graph** out);
MW_API mw_status mw_graph_from_json(const char* text, mw_graph** out);
MW_API void mw_graph_free(mw_graph* g);
MW_API size_t mw_graph_generator_count(const mw_graph* g);

MW_API mw_status mw_element_parse(const mw_graph* g, const char* word, mw_element** out);
MW_API void mw_element_free(mw_element* e);
MW_API size_t mw_element_length(const mw_element* e);
MW_API mw_status mw_element_to_string(const mw_element* e, char** out);
MW_API mw_status mw_element_mul(const mw_element* a, const mw_element* b, mw_element** out);
MW_API mw_status mw_element_inv(const mw_element* a, mw_element** out);
MW_API mw_status mw_element_dist(const mw_element* a, const mw_element* b, uint64_t* out);
MW_API mw_status mw_element_median(const mw_element* x, const mw_element* y, const mw_element* z, mw_element** out);
/* *found is 1 when a witness exists; *power is the power used. */
MW_API mw_status mw_rank1_witness(const mw_element* e, size_t max_power, size_t radius, int* found, size_t* power);

/* Harness commands. `command` is one of "suite", "complex-gen",
 * "complex-verify", "walk-run", "report-show". `suite` names the config
 * schema; `config_path` may be NULL for defaults; `input_path` is the complex
 * file for complex-verify or the file to render for report-show. On MW_OK,
 * *exit_code is the process exit code (0 pass, 1 violations) and *output is
 * the result JSON (or the rendered report). Errors map to exit codes with
 * mw_exit_code_for. */
typedef struct mw_overrides {
  int has_seed;
  uint64_t seed;
  int has_trials;
  uint64_t trials;
  int has_radius;
  uint64_t radius;
  const char* out;    /* NULL: not given */
  const char* family; /* complex gen */
  const char* graph;  /* walk run, clt run */
} mw_overrides;

MW_API mw_status mw_harness_run(const char* command, const char* suite, const char* config_path, const char* input_path,
                         const mw_overrides* overrides, int* exit_code, char** output);
MW_API int mw_exit_code_for(mw_status status);

#ifdef __cplusplus
}
#endif

#endif
