/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "medianwalk/medianwalk.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static void complexes(void) {
  mw_complex* c = NULL;
  uint32_t v = 0;
  char* text = NULL;
  mw_complex* back = NULL;

  EXPECT(mw_complex_generate("hypercube(3)", 0, &c) == MW_OK);
  EXPECT(mw_complex_vertex_count(c) == 8);
  EXPECT(mw_complex_wall_count(c) == 3);
  EXPECT(mw_complex_distance(c, 0, 7, &v) == MW_OK && v == 3);
  EXPECT(mw_complex_median(c, 0, 3, 5, &v) == MW_OK && v == 1);
  EXPECT(mw_complex_distance(c, 0, 99, &v) == MW_VERTEX_OUT_OF_RANGE);
  EXPECT(strlen(mw_last_error()) > 0);

  EXPECT(mw_complex_to_json(c, &text) == MW_OK);
  EXPECT(mw_complex_from_json(text, &back) == MW_OK);
  EXPECT(mw_complex_vertex_count(back) == 8);
  mw_string_free(text);
  mw_complex_free(back);
  mw_complex_free(c);

  EXPECT(mw_complex_from_json("{\"vertices\": 3, \"edges\": [[0,1],[1,2],[2,0]]}", &c) == MW_NOT_BIPARTITE);
  EXPECT(mw_complex_from_json("{oops", &c) == MW_PARSE_ERROR);
  EXPECT(mw_complex_generate("blob(3)", 0, &c) != MW_OK);
  EXPECT(mw_complex_generate(NULL, 0, &c) == MW_INVALID_ARGUMENT);
}

static void groups(void) {
  mw_graph* g = NULL;
  mw_element *a = NULL, *b = NULL, *ab = NULL, *inv = NULL, *m = NULL;
  char* s = NULL;
  uint64_t d = 0;
  int found = 0;
  size_t power = 0;

  EXPECT(mw_graph_named("Z2", &g) == MW_OK);
  EXPECT(mw_graph_generator_count(g) == 2);
  EXPECT(mw_element_parse(g, "b a", &a) == MW_OK);
  EXPECT(mw_element_to_string(a, &s) == MW_OK && strcmp(s, "a b") == 0);
  mw_string_free(s);
  EXPECT(mw_element_parse(g, "a a B", &b) == MW_OK);
  EXPECT(mw_element_dist(a, b, &d) == MW_OK && d == 3);
  EXPECT(mw_element_mul(a, b, &ab) == MW_OK && mw_element_length(ab) == 3);
  EXPECT(mw_element_inv(a, &inv) == MW_OK && mw_element_length(inv) == 2);
  EXPECT(mw_element_median(a, b, inv, &m) == MW_OK);
  EXPECT(mw_rank1_witness(a, 20, 8, &found, &power) == MW_OK && found == 0);
  EXPECT(mw_element_parse(g, "q", &m) == MW_UNKNOWN_GENERATOR);
  mw_element_free(a);
  mw_element_free(b);
  mw_element_free(ab);
  mw_element_free(inv);
  mw_element_free(m);
  mw_graph_free(g);

  EXPECT(mw_graph_named("F2", &g) == MW_OK);
  EXPECT(mw_element_parse(g, "a", &a) == MW_OK);
  EXPECT(mw_rank1_witness(a, 20, 8, &found, &power) == MW_OK && found == 1 && power >= 1);
  mw_element_free(a);
  mw_graph_free(g);
  EXPECT(mw_graph_from_json("{\"generators\": [\"x\", \"y\"], \"edges\": [[\"x\", \"y\"]]}", &g) == MW_OK);
  EXPECT(mw_graph_generator_count(g) == 2);
  mw_graph_free(g);
}

static void harness(const char* dir) {
  char out[512], config[600], complex_path[600];
  int code = -1;
  char* result = NULL;
  mw_overrides ov;
  FILE* f;

  memset(&ov, 0, sizeof ov);
  snprintf(out, sizeof out, "%s/capi-out", dir);
  ov.out = out;
  ov.family = "grid(2,3)";
  EXPECT(mw_harness_run("complex-gen", "complex", NULL, NULL, &ov, &code, &result) == MW_OK);
  EXPECT(code == 0);
  EXPECT(result && strstr(result, "\"vertices\": 6"));
  mw_string_free(result);
  result = NULL;

  snprintf(complex_path, sizeof complex_path, "%s/complex/complex.json", out);
  ov.has_trials = 1;
  ov.trials = 20;
  EXPECT(mw_harness_run("complex-verify", "complex", NULL, complex_path, &ov, &code, &result) == MW_OK);
  EXPECT(code == 0);
  mw_string_free(result);
  result = NULL;

  snprintf(config, sizeof config, "%s/bad.json", dir);
  f = fopen(config, "w");
  fputs("{\"suite\": \"walk\", \"momment\": 2}", f);
  fclose(f);
  {
    mw_status st = mw_harness_run("walk-run", "walk", config, NULL, &ov, &code, &result);
    EXPECT(st == MW_SCHEMA_VIOLATION);
    EXPECT(strcmp(mw_last_error_detail(), "momment") == 0);
    EXPECT(mw_exit_code_for(st) == 2);
  }
  EXPECT(mw_harness_run("walk-run", "walk", "/nonexistent/cfg.json", NULL, &ov, &code, &result) == MW_FILE_MISSING);
  EXPECT(mw_harness_run("bogus", "walk", NULL, NULL, &ov, &code, &result) == MW_INVALID_ARGUMENT);

  f = fopen(config, "w");
  fputs("{\"graph\": \"C5\", \"n\": 50, \"trials\": 4}", f);
  fclose(f);
  EXPECT(mw_harness_run("walk-run", "walk", config, NULL, &ov, &code, &result) == MW_OK);
  EXPECT(code == 0);
  mw_string_free(result);
  result = NULL;

  snprintf(config, sizeof config, "%s/registry.jsonl", out);
  EXPECT(mw_harness_run("report-show", NULL, NULL, config, NULL, &code, &result) == MW_OK);
  EXPECT(result && strstr(result, "walk run exit=0"));
  mw_string_free(result);

  EXPECT(mw_exit_code_for(MW_OK) == 0);
  EXPECT(mw_exit_code_for(MW_INTERNAL) == 3);
  EXPECT(mw_exit_code_for(MW_PARSE_ERROR) == 2);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  complexes();
  groups();
  harness(dir);
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("C API: all checks passed\n");
  return 0;
}
