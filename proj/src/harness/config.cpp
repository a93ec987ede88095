#include <cstdlib>
#include <fstream>
#include <sstream>

#include "medianwalk/harness.hpp"

namespace mw::harness {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaViolation:
    case ErrorCode::FileMissing:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotConnected:
    case ErrorCode::NotMedian:
    case ErrorCode::NotBipartite:
    case ErrorCode::SizeBudgetExceeded:
    case ErrorCode::UnknownGenerator:
    case ErrorCode::ProbSumInvalid:
    case ErrorCode::NotGenerating:
    case ErrorCode::TooFewTrials:
    case ErrorCode::VertexOutOfRange:
    case ErrorCode::DefiningGraphMismatch:
      return kConfigError;
    default:
      return kInternal;
  }
}

json default_config(const std::string& suite) {
  const json common = {{"suite", suite}, {"seed", 1}, {"output", ""}};
  json j = common;
  if (suite == "lemmas") {
    j.update({{"complexes", 200},
              {"families", json::array()},
              {"max_vertices", 1024},
              {"median_triples", 1000},
              {"box_samples", 100000},
              {"instances", 1000},
              {"projection_A", 6}});
  } else if (suite == "raag-consistency") {
    j.update({{"graphs", {"F2", "Z2", "C5"}},
              {"instances", 1000},
              {"max_len", 5},
              {"certified_pairs", 10000},
              {"radius", 8},
              {"identities", 10000},
              {"rank1_max_power", 20},
              {"rank1_max_len", 6},
              {"rank1_candidates", 300}});
  } else if (suite == "clt") {
    j.update({{"graph", "F2"},
              {"measure", {{"kind", "srw"}}},
              {"allow_degenerate", false},
              {"n", 10000},
              {"trials", 2000},
              {"radius", 8},
              {"ks_variance", nullptr},
              {"psi",
               {{"enabled", true}, {"T", 100}, {"samples", 1000}, {"backward_samples", 300}, {"bootstrap", 200}}},
              {"deviation", {{"epsilons", {0.1, 0.05}}, {"a_values", {0.6}}, {"probe_length", 0}}},
              {"boite",
               {{"enabled", false}, {"eps", 0.1}, {"A", 0.4}, {"stride", 100}, {"n0", 0}, {"trials", 20}}},
              {"expect",
               {{"lambda_range", nullptr},
                {"sigma2_direct_range", nullptr},
                {"sigma2_formula_target", nullptr},
                {"sigma2_formula_rel", 0.2},
                {"formula_direct_overlap", false},
                {"nondegenerate", false},
                {"normality", false},
                {"s_slope_positive", false}}}});
  } else if (suite == "s-growth") {
    j.update({{"graph", "F2"},
              {"measure", {{"kind", "srw"}}},
              {"allow_degenerate", false},
              {"n", 10000},
              {"trials", 100},
              {"radius", 8},
              {"expect", {{"slope_positive", false}, {"slope_matches_drift", false}}}});
  } else if (suite == "walk") {
    j.update({{"graph", "F2"},
              {"measure", {{"kind", "srw"}}},
              {"allow_degenerate", false},
              {"n", 1000},
              {"trials", 100},
              {"radius", 8}});
  } else if (suite == "complex") {
    j.update({{"family", "grid(3,3)"},
              {"max_vertices", 4096},
              {"box_samples", 100000},
              {"instances", 1000},
              {"projection_A", 6}});
  } else if (suite == "full") {
    j.update({{"lemmas", json::object()},
              {"raag-consistency", json::object()},
              {"clt", json::array({json::object()})},
              {"s-growth", json::array({json::object()})}});
  } else {
    throw Error(ErrorCode::SchemaViolation, "unknown suite '" + suite + "'", "suite");
  }
  return j;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, "config key '" + key + "': " + what, key);
}

bool is_range_key(const std::string& k) {
  return k.size() > 6 && k.compare(k.size() - 6, 6, "_range") == 0;
}

// Fills defaults and checks every user key against the default's type.
json validate(const json& user, const json& defaults, const std::string& path) {
  if (!user.is_object()) bad(path.empty() ? "<root>" : path, "must be an object");
  json out = defaults;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!defaults.contains(it.key())) bad(key, "unknown key");
    const json& d = defaults[it.key()];
    const json& v = it.value();
    if (it.key() == "graph") {
      if (!v.is_string() && !v.is_object()) bad(key, "expected a graph name or {generators, edges}");
    } else if (it.key() == "measure") {
      if (!v.is_object()) bad(key, "expected an object");
    } else if (d.is_null()) {
      if (is_range_key(it.key())) {
        if (!v.is_null() && !(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()))
          bad(key, "expected null or [lo, hi]");
      } else if (!v.is_null() && !v.is_number()) {
        bad(key, "expected a number or null");
      }
    } else if (d.is_number_unsigned() || d.is_number_integer()) {
      if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)))
        bad(key, "expected a non-negative integer");
    } else if (d.is_number()) {
      if (!v.is_number()) bad(key, "expected a number");
    } else if (d.is_boolean()) {
      if (!v.is_boolean()) bad(key, "expected a boolean");
    } else if (d.is_string()) {
      if (!v.is_string()) bad(key, "expected a string");
    } else if (d.is_array()) {
      if (!v.is_array()) bad(key, "expected an array");
      if (!d.empty())
        for (const auto& e : v)
          if ((d[0].is_number() && !e.is_number()) || (d[0].is_string() && !e.is_string() && !e.is_object()) ||
              (d[0].is_object() && !e.is_object()))
            bad(key, "unexpected element type");
    } else if (d.is_object()) {
      if (!v.is_object()) bad(key, "expected an object");
      // An empty default marks a nested suite, validated by its own schema.
      if (d.empty()) {
        out[it.key()] = v;
        continue;
      }
      out[it.key()] = validate(v, d, key);
      continue;
    }
    out[it.key()] = v;
  }
  return out;
}

raag::GraphPtr graph_of(const json& g) {
  if (g.is_string()) return raag::DefiningGraph::named(g.get<std::string>());
  return raag::DefiningGraph::from_json(g);
}

json validate_suite(const json& user, const std::string& suite);

void check_walk_keys(const json& j) {
  raag::GraphPtr g;
  try {
    g = graph_of(j["graph"]);
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("config key 'graph': ") + e.what(), "graph");
  }
  try {
    walk::validate_measure(walk::StepMeasure::from_json(g, j["measure"]), j.value("radius", 8),
                           j["allow_degenerate"].get<bool>());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaViolation) throw Error(e.code(), e.what(), "measure." + e.detail());
    throw Error(ErrorCode::SchemaViolation, std::string("config key 'measure': ") + e.what(), "measure");
  }
}

json validate_nested(const json& user, const std::string& suite, const std::string& prefix) {
  try {
    return validate_suite(user, suite);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SchemaViolation) throw;
    const std::string key = prefix + "." + e.detail();
    const std::string msg = std::string(e.what()).substr(std::string(error_code_name(e.code())).size() + 2);
    throw Error(e.code(), "in '" + prefix + "': " + msg, key);
  }
}

json validate_suite(const json& user, const std::string& suite) {
  json j = validate(user, default_config(suite), "");
  if (j["suite"] != suite) bad("suite", "expected '" + suite + "'");
  if (suite == "clt" || suite == "s-growth" || suite == "walk") check_walk_keys(j);
  if (suite == "clt" && j["trials"].get<std::uint64_t>() < 2) bad("trials", "need at least 2 trials");
  if (suite == "full") {
    for (const char* sub : {"lemmas", "raag-consistency"}) {
      json s = j[sub];
      if (!s.contains("suite")) s["suite"] = sub;
      if (!s.contains("seed")) s["seed"] = j["seed"];
      j[sub] = validate_nested(s, sub, sub);
    }
    for (const char* sub : {"clt", "s-growth"}) {
      json arr = json::array();
      for (auto s : j[sub]) {
        if (!s.contains("suite")) s["suite"] = sub;
        if (!s.contains("seed")) s["seed"] = j["seed"];
        arr.push_back(validate_nested(s, sub, std::string(sub) + "[" + std::to_string(arr.size()) + "]"));
      }
      j[sub] = arr;
    }
  }
  return j;
}

}  // namespace

Config make_config(json j, const std::string& suite, const std::string& origin) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, "config must be a JSON object", "<root>");
  std::string s = suite;
  if (j.contains("suite")) {
    if (!j["suite"].is_string()) bad("suite", "expected a string");
    if (!s.empty() && j["suite"] != s) bad("suite", "expected '" + s + "'");
    s = j["suite"].get<std::string>();
  }
  if (s.empty()) bad("suite", "missing");
  Config c;
  c.suite = s;
  c.origin = origin;
  c.data = validate_suite(j, s);
  c.hash = sha256_hex(c.data.dump());
  return c;
}

Config load_config(const std::string& path, const std::string& suite) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileMissing, "cannot open config '" + path + "'", path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "config '" + path + "' is not valid JSON: " + e.what(), path);
  }
  return make_config(std::move(j), suite, path);
}

namespace {

void override_into(json& j, const Overrides& o) {
  if (o.seed) j["seed"] = *o.seed;
  if (o.trials) {
    if (j.contains("trials")) j["trials"] = *o.trials;
    else if (j.contains("instances")) j["instances"] = *o.trials;
  }
  if (o.radius && j.contains("radius")) j["radius"] = *o.radius;
  if (o.family && j.contains("family")) j["family"] = *o.family;
  if (o.graph && j.contains("graph")) j["graph"] = *o.graph;
  for (const char* sub : {"lemmas", "raag-consistency"})
    if (j.contains(sub) && j[sub].is_object()) override_into(j[sub], o);
  for (const char* sub : {"clt", "s-growth"})
    if (j.contains(sub) && j[sub].is_array())
      for (auto& s : j[sub]) override_into(s, o);
}

}  // namespace

Config apply_overrides(const Config& c, const Overrides& o) {
  json j = c.data;
  override_into(j, o);
  return make_config(std::move(j), c.suite, c.origin);
}

std::string output_dir(const Config& c, const Overrides& o) {
  if (o.out && !o.out->empty()) return *o.out;
  if (const char* env = std::getenv("MEDIANWALK_OUT"); env && *env) return env;
  const std::string cfg = c.data.value("output", std::string());
  if (!cfg.empty()) return cfg;
  return "medianwalk-out";
}

std::vector<std::string> default_families(std::size_t count, std::uint64_t seed) {
  std::vector<std::string> out;
  Rng rng = substream(seed, 0x66616d);
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return lo + uniform_index(rng, hi - lo + 1); };
  auto s = [](auto... xs) {
    std::string r;
    ((r += (r.empty() ? "" : ",") + std::to_string(xs)), ...);
    return r;
  };
  for (std::size_t i = 0; out.size() < count; ++i) {
    switch (i % 8) {
      case 0: out.push_back("tree(" + s(pick(1, 1u << 30), pick(2, 300)) + ")"); break;
      case 1: out.push_back("path(" + s(pick(1, 40)) + ")"); break;
      case 2: out.push_back("binary_tree(" + s(pick(1, 6)) + ")"); break;
      case 3: out.push_back("grid(" + s(pick(2, 12), pick(2, 12)) + ")"); break;
      case 4: out.push_back("hypercube(" + s(pick(1, 6)) + ")"); break;
      case 5:
        out.push_back("product(tree(" + s(pick(1, 1u << 30), pick(2, 30)) + "),path(" + s(pick(1, 6)) + "))");
        break;
      case 6:
        out.push_back("product(path(" + s(pick(1, 5)) + "),path(" + s(pick(1, 5)) + "),path(" +
                      s(pick(1, 4)) + "))");
        break;
      default: {
        const auto dim = pick(3, 10);
        out.push_back("median_closure(" + s(pick(1, 1u << 30), dim, pick(2, std::min<std::uint64_t>(12, 1u << dim))) +
                      ")");
      }
    }
  }
  return out;
}

}  // namespace mw::harness
