#pragma once

// Configuration, suites, byte-stable emission and the run registry.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medianwalk/walk.hpp"

namespace mw::harness {

enum Exit : int { kOk = 0, kViolations = 1, kConfigError = 2, kInternal = 3 };

// Exit code for an error escaping a command: configuration and input problems
// map to 2, everything else to 3.
int exit_code_for(ErrorCode code);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> radius;
  std::optional<std::string> out;
  std::optional<std::string> family;  // complex gen
  std::optional<std::string> graph;   // walk and clt configs
};

struct Config {
  std::string suite;  // lemmas, raag-consistency, clt, s-growth, full, walk, complex
  nlohmann::json data;  // validated, defaults filled in
  std::string hash;     // SHA-256 of the canonical dump of `data`
  std::string origin;   // file path or "<inline>"
};

// Throws FileMissing, ParseError or SchemaViolation (detail = offending key).
// `suite` selects the schema when the document has no "suite" key.
Config load_config(const std::string& path, const std::string& suite = {});
Config make_config(nlohmann::json j, const std::string& suite, const std::string& origin = "<inline>");
// Re-validates and rehashes.
Config apply_overrides(const Config& c, const Overrides& o);

// --out, then MEDIANWALK_OUT, then the config's "output", then "medianwalk-out".
std::string output_dir(const Config& c, const Overrides& o);

// Default configurations (also the documented schemas' defaults).
nlohmann::json default_config(const std::string& suite);

// The deterministic family list used by the lemma suite.
std::vector<std::string> default_families(std::size_t count, std::uint64_t seed);

struct Outcome {
  int exit_code = kOk;
  nlohmann::json result;               // written as result.json
  std::vector<std::string> artifacts;  // paths relative to the output directory
  std::vector<std::string> failures;   // human-readable failed assertions
};

// Runs a suite and writes its artifacts under `out_dir/<suite>/`. Appends one
// manifest line to `out_dir/registry.jsonl`. Never throws for assertion
// failures; configuration errors propagate as mw::Error.
Outcome run_suite(const Config& c, const std::string& out_dir);

// Individual commands used by the CLI.
Outcome complex_gen(const Config& c, const std::string& out_dir);
Outcome complex_verify(const std::string& complex_path, const Config& c, const std::string& out_dir);
Outcome walk_run(const Config& c, const std::string& out_dir);

// Rendering of a result or registry file for `report show`.
std::string report_show(const std::string& path);

// ---- emission ---------------------------------------------------------------

// Sorted keys, two-space indent, reals at 12 significant digits, trailing newline.
std::string emit_json(const nlohmann::json& j);
// trial,n,d,s_lower,clt_stat; one row per trial at the horizon.
std::string emit_csv(const walk::WalkRun& run, const std::vector<double>& clt);
// Throws IoError.
void write_file(const std::string& path, const std::string& bytes);

struct Manifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string build;
  std::string started;
  std::string finished;
  int exit_code = 0;
  std::vector<std::string> artifacts;
};
void append_manifest(const std::string& out_dir, const Manifest& m);
std::string build_id();
std::string timestamp();  // UTC, ISO 8601

// Walk-based report assembled from a config (used by the clt suite).
walk::CLTReport clt_report(const Config& c, walk::WalkRun* run_out = nullptr,
                           nlohmann::json* extra = nullptr);

}  // namespace mw::harness
