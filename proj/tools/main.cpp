#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "medianwalk/medianwalk.h"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed, trials, radius;
  std::string out;
  std::string family, graph;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON configuration file");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--trials", c.trials, "Trials (or instances for verification suites)");
  app->add_option("--radius", c.radius, "Search radius");
  app->add_option("--out", c.out, "Output directory (overrides MEDIANWALK_OUT)");
  app->add_flag("-q,--quiet", c.quiet, "Do not print the result JSON");
}

int run(const char* command, const std::string& suite, const Common& c, const std::string& input, bool print) {
  mw_overrides ov{};
  if (c.seed) ov.has_seed = 1, ov.seed = *c.seed;
  if (c.trials) ov.has_trials = 1, ov.trials = *c.trials;
  if (c.radius) ov.has_radius = 1, ov.radius = *c.radius;
  ov.out = c.out.empty() ? nullptr : c.out.c_str();
  ov.family = c.family.empty() ? nullptr : c.family.c_str();
  ov.graph = c.graph.empty() ? nullptr : c.graph.c_str();
  int exit_code = 3;
  char* output = nullptr;
  const mw_status st = mw_harness_run(command, suite.empty() ? nullptr : suite.c_str(),
                                      c.config.empty() ? nullptr : c.config.c_str(),
                                      input.empty() ? nullptr : input.c_str(), &ov, &exit_code, &output);
  if (st != MW_OK) {
    std::fprintf(stderr, "error: %s", mw_last_error());
    if (*mw_last_error_detail()) std::fprintf(stderr, " [%s]", mw_last_error_detail());
    std::fprintf(stderr, "\n");
    return mw_exit_code_for(st);
  }
  if (output && print) std::fputs(output, stdout);
  mw_string_free(output);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medianwalk: median complexes, right-angled Artin groups and random walks"};
  app.set_version_flag("--version", std::string(mw_version()));
  app.require_subcommand(1);

  Common c;
  std::string input, suite;
  int code = 3;

  auto* complex = app.add_subcommand("complex", "Finite median complexes")->require_subcommand(1);
  auto* gen = complex->add_subcommand("gen", "Generate a complex from a family spec");
  add_common(gen, c);
  gen->add_option("--family", c.family, "Family spec, e.g. grid(3,3)");
  gen->callback([&] { code = run("complex-gen", "complex", c, "", !c.quiet); });
  auto* verify = complex->add_subcommand("verify", "Load a complex file and run the lemma checks on it");
  add_common(verify, c);
  verify->add_option("file", input, "Complex JSON file")->required();
  verify->callback([&] { code = run("complex-verify", "complex", c, input, !c.quiet); });

  auto* raag = app.add_subcommand("raag", "Right-angled Artin groups")->require_subcommand(1);
  auto* check = raag->add_subcommand("check", "Algebra vs hull oracles, certificates, rank-1, identities");
  add_common(check, c);
  check->callback([&] { code = run("suite", "raag-consistency", c, "", !c.quiet); });

  auto* walk = app.add_subcommand("walk", "Random walks")->require_subcommand(1);
  auto* wrun = walk->add_subcommand("run", "Simulate a walk and write samples.csv");
  add_common(wrun, c);
  wrun->add_option("--graph", c.graph, "Defining graph (F2, Z2, C5, free(k), cycle(k), ...)");
  wrun->callback([&] { code = run("walk-run", "walk", c, "", !c.quiet); });

  auto* clt = app.add_subcommand("clt", "Central limit experiment")->require_subcommand(1);
  auto* crun = clt->add_subcommand("run", "Drift, variance estimators, KS test and growth");
  add_common(crun, c);
  crun->add_option("--graph", c.graph, "Defining graph");
  crun->callback([&] { code = run("suite", "clt", c, "", !c.quiet); });

  auto* sr = app.add_subcommand("suite", "Run a named suite")->require_subcommand(1);
  auto* srun = sr->add_subcommand("run", "lemmas, raag-consistency, clt, s-growth or full");
  add_common(srun, c);
  srun->add_option("name", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"lemmas", "raag-consistency", "clt", "s-growth", "full"}));
  srun->callback([&] { code = run("suite", suite, c, "", !c.quiet); });

  auto* report = app.add_subcommand("report", "Inspect outputs")->require_subcommand(1);
  auto* show = report->add_subcommand("show", "Render a result.json or registry.jsonl");
  show->add_option("file", input, "File to render")->required();
  show->callback([&] { code = run("report-show", "", c, input, true); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  } catch (...) {
    std::fprintf(stderr, "internal error\n");
    return 3;
  }
  return code;
}
