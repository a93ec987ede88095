#include <cstdlib>
#include <cstring>
#include <string>

#include "medianwalk/harness.hpp"
#include "medianwalk/median_core.hpp"
#include "medianwalk/medianwalk.h"
#include "medianwalk/raag.hpp"

struct mw_complex {
  mw::core::FiniteMedianComplex c;
};
struct mw_graph {
  mw::raag::GraphPtr g;
};
struct mw_element {
  mw::raag::Element e;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_detail;

mw_status record(mw_status s, std::string msg, std::string detail = {}) {
  g_error = std::move(msg);
  g_detail = std::move(detail);
  return s;
}

template <class F>
mw_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    g_detail.clear();
    return MW_OK;
  } catch (const mw::Error& e) {
    return record(static_cast<mw_status>(e.code()), e.what(), e.detail());
  } catch (const nlohmann::json::exception& e) {
    return record(MW_PARSE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return record(MW_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(MW_INTERNAL, e.what());
  } catch (...) {
    return record(MW_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw mw::Error(mw::ErrorCode::InvalidArgument, std::string(what) + " is null", what);
}

}  // namespace

extern "C" {

const char* mw_version(void) { return "1.0.0"; }
const char* mw_last_error(void) { return g_error.c_str(); }
const char* mw_last_error_detail(void) { return g_detail.c_str(); }
void mw_string_free(char* s) { std::free(s); }

mw_status mw_complex_generate(const char* family, size_t max_vertices, mw_complex** out) {
  return guard([&] {
    need(family, "family");
    need(out, "out");
    mw::core::FamilyOptions fo;
    if (max_vertices) fo.max_vertices = max_vertices;
    *out = new mw_complex{mw::core::generate_family(mw::core::FamilySpec::parse(family), fo)};
  });
}

mw_status mw_complex_from_json(const char* text, mw_complex** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw mw::Error(mw::ErrorCode::ParseError, e.what());
    }
    *out = new mw_complex{mw::core::complex_from_json(j)};
  });
}

mw_status mw_complex_to_json(const mw_complex* c, char** out) {
  return guard([&] {
    need(c, "complex");
    need(out, "out");
    *out = dup(mw::harness::emit_json(mw::core::complex_to_json(c->c)));
  });
}

void mw_complex_free(mw_complex* c) { delete c; }
size_t mw_complex_vertex_count(const mw_complex* c) { return c ? c->c.vertex_count() : 0; }
size_t mw_complex_wall_count(const mw_complex* c) { return c ? c->c.wall_count() : 0; }

mw_status mw_complex_distance(const mw_complex* c, uint32_t x, uint32_t y, uint32_t* out) {
  return guard([&] {
    need(c, "complex");
    need(out, "out");
    *out = c->c.distance(x, y);
  });
}

mw_status mw_complex_median(const mw_complex* c, uint32_t x, uint32_t y, uint32_t z, uint32_t* out) {
  return guard([&] {
    need(c, "complex");
    need(out, "out");
    *out = mw::core::median(c->c, x, y, z);
  });
}

mw_status mw_graph_named(const char* spec, mw_graph** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new mw_graph{mw::raag::DefiningGraph::named(spec)};
  });
}

mw_status mw_graph_from_json(const char* text, mw_graph** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw mw::Error(mw::ErrorCode::ParseError, e.what());
    }
    *out = new mw_graph{mw::raag::DefiningGraph::from_json(j)};
  });
}

void mw_graph_free(mw_graph* g) { delete g; }
size_t mw_graph_generator_count(const mw_graph* g) { return g ? g->g->size() : 0; }

mw_status mw_element_parse(const mw_graph* g, const char* word, mw_element** out) {
  return guard([&] {
    need(g, "graph");
    need(word, "word");
    need(out, "out");
    *out = new mw_element{mw::raag::Element::parse(g->g, word)};
  });
}

void mw_element_free(mw_element* e) { delete e; }
size_t mw_element_length(const mw_element* e) { return e ? e->e.length() : 0; }

mw_status mw_element_to_string(const mw_element* e, char** out) {
  return guard([&] {
    need(e, "element");
    need(out, "out");
    *out = dup(e->e.to_string());
  });
}

mw_status mw_element_mul(const mw_element* a, const mw_element* b, mw_element** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new mw_element{mw::raag::mul(a->e, b->e)};
  });
}

mw_status mw_element_inv(const mw_element* a, mw_element** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    *out = new mw_element{mw::raag::inv(a->e)};
  });
}

mw_status mw_element_dist(const mw_element* a, const mw_element* b, uint64_t* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = mw::raag::dist(a->e, b->e);
  });
}

mw_status mw_element_median(const mw_element* x, const mw_element* y, const mw_element* z, mw_element** out) {
  return guard([&] {
    need(x, "x");
    need(y, "y");
    need(z, "z");
    need(out, "out");
    *out = new mw_element{mw::raag::median_raag(x->e, y->e, z->e)};
  });
}

mw_status mw_rank1_witness(const mw_element* e, size_t max_power, size_t radius, int* found, size_t* power) {
  return guard([&] {
    need(e, "element");
    need(found, "found");
    const auto w = mw::raag::find_rank1_witness(e->e, max_power, radius);
    *found = w ? 1 : 0;
    if (power) *power = w ? w->power : 0;
  });
}

mw_status mw_harness_run(const char* command, const char* suite, const char* config_path, const char* input_path,
                         const mw_overrides* overrides, int* exit_code, char** output) {
  return guard([&] {
    need(command, "command");
    need(exit_code, "exit_code");
    namespace h = mw::harness;
    const std::string cmd = command;
    if (cmd == "report-show") {
      need(input_path, "input_path");
      const auto text = h::report_show(input_path);
      *exit_code = h::kOk;
      if (output) *output = dup(text);
      return;
    }
    h::Overrides ov;
    if (overrides) {
      if (overrides->has_seed) ov.seed = overrides->seed;
      if (overrides->has_trials) ov.trials = overrides->trials;
      if (overrides->has_radius) ov.radius = overrides->radius;
      if (overrides->out) ov.out = std::string(overrides->out);
      if (overrides->family) ov.family = std::string(overrides->family);
      if (overrides->graph) ov.graph = std::string(overrides->graph);
    }
    const std::string s = suite ? suite : "";
    h::Config c = config_path ? h::load_config(config_path, s) : h::make_config(nlohmann::json::object(), s);
    c = h::apply_overrides(c, ov);
    const auto dir = h::output_dir(c, ov);
    h::Outcome o;
    if (cmd == "suite") {
      o = h::run_suite(c, dir);
    } else if (cmd == "complex-gen") {
      o = h::complex_gen(c, dir);
    } else if (cmd == "complex-verify") {
      need(input_path, "input_path");
      o = h::complex_verify(input_path, c, dir);
    } else if (cmd == "walk-run") {
      o = h::walk_run(c, dir);
    } else {
      throw mw::Error(mw::ErrorCode::InvalidArgument, "unknown command '" + cmd + "'", cmd);
    }
    *exit_code = o.exit_code;
    if (output) *output = dup(h::emit_json(o.result));
  });
}

int mw_exit_code_for(mw_status status) {
  if (status == MW_OK) return 0;
  return mw::harness::exit_code_for(static_cast<mw::ErrorCode>(status));
}

}  // extern "C"
