#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "medianwalk/harness.hpp"
#include "medianwalk/wallgeom.hpp"

namespace mw::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kWitnessCap = 8;

raag::GraphPtr graph_of(const json& g) {
  if (g.is_string()) return raag::DefiningGraph::named(g.get<std::string>());
  return raag::DefiningGraph::from_json(g);
}

std::string graph_label(const json& g) { return g.is_string() ? g.get<std::string>() : g.dump(); }

std::uint64_t u64(const json& j, const char* key) { return j.at(key).get<std::uint64_t>(); }

walk::StepMeasure measure_of(const json& c, const raag::GraphPtr& g) {
  return walk::validate_measure(walk::StepMeasure::from_json(g, c["measure"]), u64(c, "radius"),
                                c["allow_degenerate"].get<bool>());
}

struct Writer {
  std::string root;  // out_dir/<name>
  std::string rel;   // <name>
  Outcome* outcome;

  void put(const std::string& file, const std::string& bytes) {
    write_file((fs::path(root) / file).string(), bytes);
    outcome->artifacts.push_back(rel + "/" + file);
  }
};

void fail(Outcome& o, const std::string& what) {
  o.failures.push_back(what);
  o.exit_code = kViolations;
}

// ---- lemma checks on one complex ------------------------------------------------------

struct LemmaTotals {
  std::uint64_t median_triples = 0, median_disagreements = 0;
  std::uint64_t box_cases = 0, box_hypothesis = 0, box_violations = 0, box_exhaustive = 0, box_sampled = 0;
  std::uint64_t ss_pairs = 0, ss_violations = 0, ss_converse = 0;
  std::uint64_t projection_cases = 0, projection_violations = 0;
  std::uint64_t chain_cases = 0, chain_violations = 0;
  json witnesses = json::array();

  void witness(json w) {
    if (witnesses.size() < kWitnessCap) witnesses.push_back(std::move(w));
  }
  std::uint64_t violations() const {
    return median_disagreements + box_violations + ss_violations + projection_violations + chain_violations;
  }
  json to_json() const {
    return {{"median", {{"triples", median_triples}, {"disagreements", median_disagreements}}},
            {"box_lemma",
             {{"cases", box_cases},
              {"hypothesis_cases", box_hypothesis},
              {"violations", box_violations},
              {"exhaustive_complexes", box_exhaustive},
              {"sampled_complexes", box_sampled}}},
            {"remark_ss",
             {{"pairs", ss_pairs}, {"violations", ss_violations}, {"converse_examples", ss_converse}}},
            {"projection_lemma", {{"cases", projection_cases}, {"violations", projection_violations}}},
            {"chain_gromov", {{"cases", chain_cases}, {"violations", chain_violations}}},
            {"witnesses", witnesses}};
  }
};

void check_medians(const core::FiniteMedianComplex& c, std::size_t triples, std::uint64_t seed,
                   const std::string& label, LemmaTotals& t) {
  Rng rng = substream(seed, 0x6d6564);
  const auto n = c.vertex_count();
  for (std::size_t i = 0; i < triples; ++i) {
    const auto x = static_cast<core::Vertex>(uniform_index(rng, n));
    const auto y = static_cast<core::Vertex>(uniform_index(rng, n));
    const auto z = static_cast<core::Vertex>(uniform_index(rng, n));
    ++t.median_triples;
    const auto a = core::median(c, x, y, z), b = core::median_by_intervals(c, x, y, z);
    if (a != b) {
      ++t.median_disagreements;
      t.witness({{"check", "median"}, {"complex", label}, {"triple", {x, y, z}}, {"majority", a}, {"intervals", b}});
    }
  }
}

void check_geometry(const wallgeom::WallGeometry& geo, const json& c, std::uint64_t seed, const std::string& label,
                    std::size_t projection_trials, LemmaTotals& t) {
  auto box = wallgeom::verify_box_lemma(geo, wallgeom::BoxMode::Auto, u64(c, "box_samples"), seed);
  t.box_cases += box.report.cases_checked;
  t.box_hypothesis += box.hypothesis_cases;
  t.box_violations += box.report.violations;
  ++(geo.complex().vertex_count() <= 64 ? t.box_exhaustive : t.box_sampled);
  if (box.counterexample) t.witness({{"check", "box_lemma"}, {"complex", label}, {"o_x_y_z", *box.counterexample}});

  auto ss = wallgeom::verify_remark_ss(geo);
  t.ss_pairs += ss.pairs_checked;
  t.ss_violations += ss.report.violations;
  t.ss_converse += ss.converse.size();
  if (ss.counterexample)
    t.witness({{"check", "remark_ss"}, {"complex", label}, {"walls", {ss.counterexample->first, ss.counterexample->second}}});

  if (projection_trials) {
    auto pr = wallgeom::verify_projection_lemma(geo, projection_trials,
                                                static_cast<std::uint32_t>(u64(c, "projection_A")), seed);
    t.projection_cases += pr.cases_checked;
    t.projection_violations += pr.violations;
    for (const auto& w : pr.witnesses) t.witness({{"check", "projection_lemma"}, {"complex", label}, {"data", w}});
  }
}

// One chain instance: a maximal strongly separated set between random vertices.
bool chain_instance(const wallgeom::WallGeometry& geo, Rng& rng, const std::string& label, LemmaTotals& t) {
  const auto n = geo.complex().vertex_count();
  const auto x = static_cast<core::Vertex>(uniform_index(rng, n));
  const auto y = static_cast<core::Vertex>(uniform_index(rng, n));
  const auto set = wallgeom::max_ss_set(geo, x, y);
  if (set.chain.size() < 2) return false;
  ++t.chain_cases;
  try {
    auto r = wallgeom::verify_chain_gromov(geo, set.chain);
    if (r.violations) {
      t.chain_violations += r.violations;
      t.witness({{"check", "chain_gromov"}, {"complex", label}, {"chain", set.chain}});
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ChainInvalid) throw;
    ++t.chain_violations;
    t.witness({{"check", "chain_gromov"}, {"complex", label}, {"chain", set.chain}, {"error", e.what()}});
  }
  return true;
}

json finish(Outcome& o, json result, const Config& c) {
  result["suite"] = c.suite;
  result["config_hash"] = c.hash;
  result["seed"] = c.data["seed"];
  result["build"] = build_id();
  result["failures"] = o.failures;
  result["pass"] = o.failures.empty();
  return result;
}

// ---- suites ---------------------------------------------------------------------------

Outcome lemmas_suite(const Config& cfg, Writer& w) {
  Outcome& o = *w.outcome;
  const auto& c = cfg.data;
  const std::uint64_t seed = u64(c, "seed");
  std::vector<std::string> specs;
  for (const auto& f : c["families"]) specs.push_back(f.get<std::string>());
  if (specs.empty()) specs = default_families(u64(c, "complexes"), seed);

  core::FamilyOptions fo;
  fo.max_vertices = u64(c, "max_vertices");
  std::vector<std::unique_ptr<core::FiniteMedianComplex>> complexes;
  std::vector<std::unique_ptr<wallgeom::WallGeometry>> geos;
  json listing = json::array();
  for (const auto& s : specs) {
    try {
      complexes.push_back(std::make_unique<core::FiniteMedianComplex>(
          core::generate_family(core::FamilySpec::parse(s), fo)));
    } catch (const Error& e) {
      throw Error(e.code(), "family '" + s + "': " + e.what(), "families");
    }
    geos.push_back(std::make_unique<wallgeom::WallGeometry>(*complexes.back()));
    listing.push_back({{"family", s},
                       {"vertices", complexes.back()->vertex_count()},
                       {"walls", complexes.back()->wall_count()},
                       {"hash", complexes.back()->hash()}});
  }

  LemmaTotals t;
  const std::size_t N = complexes.size(), instances = u64(c, "instances");
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t proj = instances / N + (i < instances % N ? 1 : 0);
    check_medians(*complexes[i], u64(c, "median_triples"), seed ^ splitmix64(i), specs[i], t);
    // The projection checker always spends its first trial on a diagonal pair.
    check_geometry(*geos[i], c, seed ^ splitmix64(i), specs[i], proj ? proj + 1 : 0, t);
  }
  std::uint64_t attempts = 0;
  for (std::size_t j = 0; t.chain_cases < instances && attempts < 100 * instances + 100; ++j, ++attempts) {
    Rng rng = substream(seed ^ 0x636861696eULL, j);
    chain_instance(*geos[j % N], rng, specs[j % N], t);
  }
  if (t.chain_cases < instances)
    fail(o, "only " + std::to_string(t.chain_cases) + " chain instances found");
  if (t.violations()) fail(o, std::to_string(t.violations()) + " lemma violations");

  json result = t.to_json();
  result["complexes"] = N;
  w.put("complexes.json", emit_json(listing));
  o.result = finish(o, std::move(result), cfg);
  return o;
}

// Raag: finite-hull oracle comparisons.
struct RaagTotals {
  std::uint64_t instances = 0, disagreements = 0;
  std::uint64_t wall_pairs = 0, wall_disagreements = 0;
  std::uint64_t certified = 0, yes = 0, no = 0, unknown = 0, certificate_failures = 0;
  std::uint64_t identity_samples = 0, identity_violations = 0;
  json witnesses = json::array();
  void witness(json w) {
    if (witnesses.size() < kWitnessCap) witnesses.push_back(std::move(w));
  }
};

raag::Element random_element(const raag::GraphPtr& g, Rng& rng, std::size_t max_len) {
  const auto len = uniform_index(rng, max_len + 1);
  std::vector<raag::Letter> w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<raag::Letter>(uniform_index(rng, 2 * g->size())));
  return raag::Element(g, w);
}

raag::Element step(const raag::Element& a, std::size_t s) {
  const auto l = raag::make_letter(s, false);
  return raag::mul(a, raag::Element(a.graph(), std::span<const raag::Letter>(&l, 1)));
}

bool hull_transverse(const raag::RaagWall& a, const raag::RaagWall& b) {
  const std::vector<raag::Element> pts{a.base, step(a.base, a.gen), b.base, step(b.base, b.gen)};
  const auto hull = raag::hull_materialize(pts);
  return wallgeom::wall_relation(hull.complex, *hull.wall_of(a), *hull.wall_of(b)) ==
         wallgeom::WallRelation::Transverse;
}

void raag_oracles(const raag::GraphPtr& g, const std::string& label, const json& c, std::uint64_t seed,
                  RaagTotals& t) {
  const std::size_t max_len = u64(c, "max_len");
  for (std::size_t i = 0; i < u64(c, "instances"); ++i) {
    Rng rng = substream(seed, i);
    const std::vector<raag::Element> pts{random_element(g, rng, max_len), random_element(g, rng, max_len),
                                         random_element(g, rng, max_len)};
    const auto hull = raag::hull_materialize(pts);
    const auto& cx = hull.complex;
    const auto x = hull.points[0], y = hull.points[1], z = hull.points[2];
    ++t.instances;
    const bool ok = cx.distance(x, y) == raag::dist(pts[0], pts[1]) &&
                    cx.distance(y, z) == raag::dist(pts[1], pts[2]) &&
                    cx.distance(x, z) == raag::dist(pts[0], pts[2]) &&
                    core::median(cx, x, y, z) == *hull.vertex_of(raag::median_raag(pts[0], pts[1], pts[2])) &&
                    core::gromov_product(cx, x, y, z) == raag::gromov_raag(pts[0], pts[1], pts[2]) &&
                    core::gromov_product(cx, y, z, x) == raag::gromov_raag(pts[1], pts[2], pts[0]);
    if (!ok) {
      ++t.disagreements;
      t.witness({{"check", "hull_oracle"},
                 {"graph", label},
                 {"points", {pts[0].to_string(), pts[1].to_string(), pts[2].to_string()}}});
    }
    // Transversality and wall identity of two random walls.
    const raag::RaagWall wa{pts[0], uniform_index(rng, g->size())};
    const raag::RaagWall wb{uniform01(rng) < 0.5 ? pts[1] : raag::mul(pts[0], random_element(g, rng, 2)),
                            uniform_index(rng, g->size())};
    const std::vector<raag::Element> wpts{wa.base, step(wa.base, wa.gen), wb.base, step(wb.base, wb.gen)};
    const auto wh = raag::hull_materialize(wpts);
    const auto ha = *wh.wall_of(wa), hb = *wh.wall_of(wb);
    ++t.wall_pairs;
    bool wall_ok = (ha == hb) == (wa == wb);
    if (wall_ok && ha != hb)
      wall_ok = (wallgeom::wall_relation(wh.complex, ha, hb) == wallgeom::WallRelation::Transverse) ==
                raag::walls_transverse(wa, wb);
    if (!wall_ok) {
      ++t.wall_disagreements;
      t.witness({{"check", "wall_oracle"},
                 {"graph", label},
                 {"walls", {wa.base.to_string(), wa.gen, wb.base.to_string(), wb.gen}}});
    }
  }
  auto rep = walk::cocycle_check(g, u64(c, "identities"), seed ^ 0x636f6379ULL);
  t.identity_samples += rep.samples;
  t.identity_violations += rep.total();
}

void certificate_pairs(const std::vector<raag::GraphPtr>& graphs, const json& c, std::uint64_t seed, RaagTotals& t) {
  const std::size_t target = u64(c, "certified_pairs"), radius = u64(c, "radius");
  std::uint64_t attempts = 0;
  for (std::size_t j = 0; t.certified < target && attempts < 50 * target + 100; ++j, ++attempts) {
    const auto& g = graphs[j % graphs.size()];
    Rng rng = substream(seed ^ 0x63657274ULL, j);
    const auto x = random_element(g, rng, 6);
    if (x.length() < 2) continue;
    const raag::Heap h(*g, x.letters());
    const auto p = uniform_index(rng, x.length()), q = uniform_index(rng, x.length());
    if (p == q || !h.comparable(p, q)) continue;
    const auto cert = raag::ss_pieces(x, p, q, radius);
    const auto ps = raag::pieces(x);
    const auto wp = raag::piece_wall(x, ps[p]), wq = raag::piece_wall(x, ps[q]);
    bool ok = true;
    switch (cert.verdict) {
      case raag::SSVerdict::YesCertified:
        ++t.yes;
        ++t.certified;
        ok = (g->link(ps[p].gen) & g->link(ps[q].gen)) == 0;
        break;
      case raag::SSVerdict::NoCertified:
        ++t.no;
        ++t.certified;
        ok = hull_transverse(*cert.witness, wp) && hull_transverse(*cert.witness, wq);
        break;
      case raag::SSVerdict::Unknown: ++t.unknown; break;
    }
    if (!ok) {
      ++t.certificate_failures;
      t.witness({{"check", "certificate"}, {"element", x.to_string()}, {"pieces", {p, q}},
                 {"verdict", raag::verdict_name(cert.verdict)}});
    }
  }
}

// Rank-1 checks for the graphs among F2, Z2, C5 that are configured.
json rank1_checks(const std::vector<std::pair<std::string, raag::GraphPtr>>& graphs, const json& c,
                  std::uint64_t seed, Outcome& o) {
  json out = json::object();
  const std::size_t max_power = u64(c, "rank1_max_power"), radius = u64(c, "radius"),
                    max_len = u64(c, "rank1_max_len");
  for (const auto& [label, g] : graphs) {
    if (label == "F2") {
      const auto w = raag::find_rank1_witness(raag::Element::parse(g, "a"), max_power, radius);
      out["F2"] = {{"element", "a"}, {"found", bool(w)}, {"power", w ? w->power : 0}};
      if (!w) fail(o, "rank-1: no witness for a in F2");
    } else if (label == "Z2") {
      // Every nontrivial element of the ball.
      std::size_t checked = 0, found = 0;
      const long r = static_cast<long>(max_len);
      for (long i = -r; i <= r; ++i)
        for (long k = -r; k <= r; ++k) {
          if ((i == 0 && k == 0) || std::abs(i) + std::abs(k) > r) continue;
          std::vector<raag::Letter> wd;
          for (long s = 0; s < std::abs(i); ++s) wd.push_back(raag::make_letter(0, i < 0));
          for (long s = 0; s < std::abs(k); ++s) wd.push_back(raag::make_letter(1, k < 0));
          ++checked;
          if (raag::find_rank1_witness(raag::Element(g, wd), max_power, radius)) ++found;
        }
      out["Z2"] = {{"elements", checked}, {"found", found}};
      if (found) fail(o, "rank-1: Z2 element certified");
    } else if (label == "C5") {
      std::size_t tried = 0, found = 0;
      std::string first;
      for (std::size_t j = 0; j < u64(c, "rank1_candidates"); ++j) {
        Rng rng = substream(seed ^ 0x72616e6bULL, j);
        const auto x = random_element(g, rng, max_len);
        if (x.length() == 0) continue;
        ++tried;
        if (raag::find_rank1_witness(x, max_power, radius)) {
          if (!found) first = x.to_string();
          ++found;
        }
      }
      out["C5"] = {{"candidates", tried}, {"found", found}, {"first", first}};
      if (!found) fail(o, "rank-1: no C5 element certified");
    }
  }
  return out;
}

// Certified heap chains checked as wall chains inside a hull.
json hull_chain_checks(const std::vector<std::pair<std::string, raag::GraphPtr>>& graphs, Outcome& o) {
  json out = json::array();
  for (const auto& [label, g] : graphs) {
    const char* text = label == "F2" ? "a b a b" : label == "C5" ? "v1 v4 v2 v4 v1 v4 v2 v4" : nullptr;
    if (!text) continue;
    const auto x = raag::Element::parse(g, text);
    const raag::Heap h(*g, x.letters());
    const auto ps = raag::pieces(x);
    // Greedy certified chain from the first piece.
    std::vector<std::size_t> chain{0};
    for (std::size_t j = 1; j < ps.size(); ++j)
      if (h.below(chain.back(), j) && !(g->link(ps[chain.back()].gen) & g->link(ps[j].gen))) chain.push_back(j);
    const std::vector<raag::Element> pts{raag::Element(g), x};
    const auto hull = raag::hull_materialize(pts);
    std::vector<std::size_t> walls;
    for (auto j : chain) walls.push_back(*hull.wall_of(raag::piece_wall(x, ps[j])));
    wallgeom::WallGeometry geo(hull.complex);
    std::uint64_t violations = 0;
    try {
      violations = wallgeom::verify_chain_gromov(geo, walls).violations;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ChainInvalid) throw;
      violations = 1;
    }
    out.push_back({{"graph", label}, {"element", text}, {"chain", walls.size()}, {"violations", violations}});
    if (violations) fail(o, "hull chain check failed for " + label);
  }
  return out;
}

Outcome raag_suite(const Config& cfg, Writer& w) {
  Outcome& o = *w.outcome;
  const auto& c = cfg.data;
  const std::uint64_t seed = u64(c, "seed");
  std::vector<std::pair<std::string, raag::GraphPtr>> graphs;
  std::vector<raag::GraphPtr> ptrs;
  for (const auto& gj : c["graphs"]) {
    try {
      graphs.emplace_back(graph_label(gj), graph_of(gj));
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaViolation, std::string("config key 'graphs': ") + e.what(), "graphs");
    }
    ptrs.push_back(graphs.back().second);
  }
  if (graphs.empty()) throw Error(ErrorCode::SchemaViolation, "config key 'graphs': empty", "graphs");

  RaagTotals t;
  json per_graph = json::object();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    RaagTotals g;
    raag_oracles(graphs[i].second, graphs[i].first, c, seed ^ splitmix64(i + 1), g);
    per_graph[graphs[i].first] = {{"instances", g.instances},
                                  {"disagreements", g.disagreements},
                                  {"wall_pairs", g.wall_pairs},
                                  {"wall_disagreements", g.wall_disagreements},
                                  {"identity_samples", g.identity_samples},
                                  {"identity_violations", g.identity_violations}};
    t.instances += g.instances;
    t.disagreements += g.disagreements;
    t.wall_pairs += g.wall_pairs;
    t.wall_disagreements += g.wall_disagreements;
    t.identity_samples += g.identity_samples;
    t.identity_violations += g.identity_violations;
    for (auto& wt : g.witnesses) t.witness(wt);
  }
  certificate_pairs(ptrs, c, seed, t);
  if (t.disagreements + t.wall_disagreements) fail(o, "algebraic values disagree with hull oracles");
  if (t.identity_violations) fail(o, "exact identity violations");
  if (t.certificate_failures) fail(o, "unsound strong-separation certificate");
  if (t.certified < u64(c, "certified_pairs")) fail(o, "too few certified pairs");

  json result = {{"graphs", per_graph},
                 {"certificates",
                  {{"certified", t.certified},
                   {"yes", t.yes},
                   {"no", t.no},
                   {"unknown", t.unknown},
                   {"failures", t.certificate_failures}}},
                 {"rank1", rank1_checks(graphs, c, seed, o)},
                 {"hull_chains", hull_chain_checks(graphs, o)},
                 {"witnesses", t.witnesses}};
  o.result = finish(o, std::move(result), cfg);
  return o;
}

bool in_range(const json& r, double v) { return r.is_null() || (r[0].get<double>() <= v && v <= r[1].get<double>()); }

}  // namespace

walk::CLTReport clt_report(const Config& cfg, walk::WalkRun* run_out, json* extra) {
  const auto& c = cfg.data;
  const auto g = graph_of(c["graph"]);
  const auto m = measure_of(c, g);
  const std::uint64_t seed = u64(c, "seed");
  const std::size_t n = u64(c, "n");
  if (n == 0) throw Error(ErrorCode::SchemaViolation, "config key 'n': must be positive", "n");
  auto run = walk::simulate(m, seed, n, u64(c, "trials"));
  const auto& psi = c["psi"];
  const std::size_t boot = u64(psi, "bootstrap");

  walk::CLTReport r;
  r.lambda_hat = walk::drift_estimate(run);
  const auto samples = walk::clt_stat(run, r.lambda_hat.value);
  r.sigma2_direct = walk::bootstrap_variance(samples, boot, splitmix64(seed ^ 0x73326469ULL));
  r.nondegenerate = r.sigma2_direct.excludes_zero();
  r.s_slope = walk::s_growth(run);
  r.ks_variance = c["ks_variance"].is_null() ? r.sigma2_direct.value : c["ks_variance"].get<double>();
  json ex = json::object();
  if (samples.size() >= walk::kMinKSSamples && r.ks_variance > 0) {
    const auto ks = walk::ks_normal_test(samples, r.ks_variance);
    r.ks_statistic = ks.statistic;
    r.ks_critical = ks.critical;
    r.normality_pass = ks.pass;
  } else {
    ex["ks_skipped"] = samples.size() < walk::kMinKSSamples ? "TooFewTrials" : "zero variance";
  }
  if (psi["enabled"].get<bool>()) {
    const auto ps = walk::psi_sigma_estimate(m, splitmix64(seed ^ 0x707369ULL), u64(psi, "T"), u64(psi, "samples"),
                                             r.lambda_hat.value, u64(psi, "backward_samples"), boot);
    r.sigma2_formula = ps.sigma2_formula;
    ex["sigma2_formula_note"] = "20% tolerance is an engineering choice; psi has no known Monte Carlo rate";
  }
  const auto& dev = c["deviation"];
  {
    std::vector<double> eps, as;
    for (const auto& e : dev["epsilons"]) eps.push_back(e.get<double>());
    for (const auto& a : dev["a_values"]) as.push_back(a.get<double>());
    const std::size_t len = u64(dev, "probe_length") ? u64(dev, "probe_length") : 4 * n;
    const auto probe = walk::walk_endpoint(m, splitmix64(seed ^ 0x70726f6265ULL), 0, len);
    json rows = json::array();
    for (const auto& row : walk::deviation_profile(run, r.lambda_hat.value, eps, as, probe))
      rows.push_back({{"kind", row.kind},
                      {"threshold", row.threshold},
                      {"checkpoints", run.checkpoints},
                      {"frequency", row.frequency},
                      {"nonincreasing", row.nonincreasing}});
    ex["deviation_profile"] = rows;
  }
  const auto& bo = c["boite"];
  if (bo["enabled"].get<bool>()) {
    walk::SimOptions so;
    so.compute_s_lower = false;
    auto brun = walk::simulate(m, seed, n, u64(bo, "trials"), so);
    const std::size_t len = 4 * n;
    const auto x = walk::walk_endpoint(m, splitmix64(seed ^ 0x78ULL), 0, len, true);
    const auto y = walk::walk_endpoint(m, splitmix64(seed ^ 0x79ULL), 0, len);
    const auto br = walk::boite_monitor(brun, r.lambda_hat.value, bo["eps"].get<double>(), bo["A"].get<double>(), x,
                                        y, std::max<std::uint64_t>(1, u64(bo, "stride")), u64(bo, "n0"));
    ex["boite"] = {{"steps_checked", br.steps_checked},
                   {"hypotheses_true", br.hypotheses_true},
                   {"violations_1", br.violations_1},
                   {"violations_2", br.violations_2},
                   {"violations_3_before_n0", br.violations_3_before},
                   {"violations_3_after_n0", br.violations_3_after},
                   {"n0", br.n0},
                   {"strict", br.strict},
                   {"failures", br.failures()}};
  }
  ex["samples"] = samples.size();
  if (extra) *extra = std::move(ex);
  if (run_out) *run_out = std::move(run);
  return r;
}

namespace {

Outcome clt_suite(const Config& cfg, Writer& w) {
  Outcome& o = *w.outcome;
  walk::WalkRun run;
  json extra;
  const auto r = clt_report(cfg, &run, &extra);
  const auto& e = cfg.data["expect"];
  if (!in_range(e["lambda_range"], r.lambda_hat.value)) fail(o, "lambda_hat outside expected range");
  if (!in_range(e["sigma2_direct_range"], r.sigma2_direct.value)) fail(o, "sigma2_direct outside expected range");
  if (!e["sigma2_formula_target"].is_null()) {
    const double target = e["sigma2_formula_target"].get<double>();
    if (!r.sigma2_formula || std::abs(r.sigma2_formula->value - target) > e["sigma2_formula_rel"].get<double>() * target)
      fail(o, "sigma2_formula outside tolerance");
  }
  if (e["formula_direct_overlap"].get<bool>() &&
      (!r.sigma2_formula || !r.sigma2_formula->overlaps(r.sigma2_direct) || !r.sigma2_formula->excludes_zero() ||
       !r.sigma2_direct.excludes_zero()))
    fail(o, "sigma2_formula and sigma2_direct intervals do not overlap away from 0");
  if (e["nondegenerate"].get<bool>() && !r.nondegenerate) fail(o, "sigma2_direct interval contains 0");
  if (e["normality"].get<bool>() && !r.normality_pass) fail(o, "KS normality test failed");
  if (e["s_slope_positive"].get<bool>() && !r.s_slope.excludes_zero()) fail(o, "s_slope interval contains 0");
  if (extra.contains("boite") && extra["boite"]["failures"].get<std::uint64_t>() > 0)
    fail(o, "monitor conclusions violated");

  json result = r.to_json();
  result["details"] = extra;
  result["graph"] = cfg.data["graph"];
  result["n"] = run.n;
  result["trials"] = run.trials;
  w.put("samples.csv", emit_csv(run, walk::clt_stat(run, r.lambda_hat.value)));
  o.result = finish(o, std::move(result), cfg);
  return o;
}

Outcome s_growth_suite(const Config& cfg, Writer& w) {
  Outcome& o = *w.outcome;
  const auto& c = cfg.data;
  const auto g = graph_of(c["graph"]);
  const auto m = measure_of(c, g);
  if (u64(c, "n") == 0) throw Error(ErrorCode::SchemaViolation, "config key 'n': must be positive", "n");
  if (u64(c, "trials") < 2) throw Error(ErrorCode::SchemaViolation, "config key 'trials': need at least 2", "trials");
  const auto run = walk::simulate(m, u64(c, "seed"), u64(c, "n"), u64(c, "trials"));
  const auto slope = walk::s_growth(run);
  const auto lam = walk::drift_estimate(run);
  const auto& e = c["expect"];
  if (e["slope_positive"].get<bool>() && !slope.excludes_zero()) fail(o, "s_slope interval contains 0");
  if (e["slope_matches_drift"].get<bool>() && !(slope.lo <= lam.value && lam.value <= slope.hi))
    fail(o, "s_slope interval does not contain lambda_hat");
  json result = {{"s_slope", slope.to_json()},
                 {"lambda_hat", lam.to_json()},
                 {"graph", c["graph"]},
                 {"n", run.n},
                 {"trials", run.trials},
                 {"is_join", bool(raag::is_join(*g))}};
  w.put("samples.csv", emit_csv(run, walk::clt_stat(run, lam.value)));
  o.result = finish(o, std::move(result), cfg);
  return o;
}

Outcome dispatch(const Config& c, Writer& w);

Outcome full_suite(const Config& cfg, Writer& w) {
  Outcome& o = *w.outcome;
  json parts = json::object();
  auto sub = [&](const json& data, const std::string& suite, const std::string& dir) {
    const Config sc = make_config(data, suite, cfg.origin);
    Outcome so;
    Writer sw{(fs::path(w.root) / dir).string(), w.rel + "/" + dir, &so};
    dispatch(sc, sw);
    sw.put("result.json", emit_json(so.result));
    for (auto& a : so.artifacts) o.artifacts.push_back(a);
    for (auto& f : so.failures) fail(o, dir + ": " + f);
    if (so.exit_code > o.exit_code) o.exit_code = so.exit_code;
    parts[dir] = {{"pass", so.failures.empty()}, {"config_hash", sc.hash}};
  };
  sub(cfg.data["lemmas"], "lemmas", "lemmas");
  sub(cfg.data["raag-consistency"], "raag-consistency", "raag-consistency");
  for (std::size_t i = 0; i < cfg.data["clt"].size(); ++i) sub(cfg.data["clt"][i], "clt", "clt-" + std::to_string(i));
  for (std::size_t i = 0; i < cfg.data["s-growth"].size(); ++i)
    sub(cfg.data["s-growth"][i], "s-growth", "s-growth-" + std::to_string(i));
  o.result = finish(o, {{"parts", parts}}, cfg);
  return o;
}

Outcome dispatch(const Config& c, Writer& w) {
  if (c.suite == "lemmas") return lemmas_suite(c, w);
  if (c.suite == "raag-consistency") return raag_suite(c, w);
  if (c.suite == "clt") return clt_suite(c, w);
  if (c.suite == "s-growth") return s_growth_suite(c, w);
  if (c.suite == "full") return full_suite(c, w);
  throw Error(ErrorCode::SchemaViolation, "'" + c.suite + "' is not a suite", "suite");
}

template <class Body>
Outcome with_manifest(const std::string& command, const Config& c, const std::string& out_dir, Body body) {
  Manifest m;
  m.command = command;
  m.config_hash = c.hash;
  m.seed = c.data.value("seed", std::uint64_t{0});
  m.build = build_id();
  m.started = timestamp();
  Outcome o;
  try {
    body(o);
  } catch (const Error& e) {
    m.finished = timestamp();
    m.exit_code = exit_code_for(e.code());
    append_manifest(out_dir, m);
    throw;
  }
  m.finished = timestamp();
  m.exit_code = o.exit_code;
  m.artifacts = o.artifacts;
  append_manifest(out_dir, m);
  return o;
}

}  // namespace

Outcome run_suite(const Config& c, const std::string& out_dir) {
  return with_manifest("suite " + c.suite, c, out_dir, [&](Outcome& o) {
    Writer w{(fs::path(out_dir) / c.suite).string(), c.suite, &o};
    dispatch(c, w);
    w.put("result.json", emit_json(o.result));
  });
}

Outcome walk_run(const Config& c, const std::string& out_dir) {
  return with_manifest("walk run", c, out_dir, [&](Outcome& o) {
    Writer w{(fs::path(out_dir) / "walk").string(), "walk", &o};
    const auto g = graph_of(c.data["graph"]);
    const auto m = measure_of(c.data, g);
    const auto run = walk::simulate(m, u64(c.data, "seed"), u64(c.data, "n"), u64(c.data, "trials"));
    json result = {{"graph", c.data["graph"]}, {"n", run.n}, {"trials", run.trials}, {"measure", m.to_json()}};
    std::vector<double> clt;
    if (run.n > 0 && run.trials >= 2) {
      const auto lam = walk::drift_estimate(run);
      result["lambda_hat"] = lam.to_json();
      result["s_slope"] = walk::s_growth(run).to_json();
      clt = walk::clt_stat(run, lam.value);
    }
    w.put("samples.csv", emit_csv(run, clt));
    o.result = finish(o, std::move(result), c);
    w.put("result.json", emit_json(o.result));
  });
}

Outcome complex_gen(const Config& c, const std::string& out_dir) {
  return with_manifest("complex gen", c, out_dir, [&](Outcome& o) {
    Writer w{(fs::path(out_dir) / "complex").string(), "complex", &o};
    core::FamilyOptions fo;
    fo.max_vertices = u64(c.data, "max_vertices");
    const auto spec = c.data["family"].get<std::string>();
    core::FiniteMedianComplex cx;
    try {
      cx = core::generate_family(core::FamilySpec::parse(spec), fo);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidArgument)
        throw Error(ErrorCode::SchemaViolation, "config key 'family': " + std::string(e.what()), "family");
      throw;
    }
    w.put("complex.json", emit_json(core::complex_to_json(cx)));
    o.result = finish(o,
                      {{"family", spec},
                       {"vertices", cx.vertex_count()},
                       {"edges", cx.edge_count()},
                       {"walls", cx.wall_count()},
                       {"hash", cx.hash()}},
                      c);
    w.put("result.json", emit_json(o.result));
  });
}

Outcome complex_verify(const std::string& complex_path, const Config& c, const std::string& out_dir) {
  return with_manifest("complex verify", c, out_dir, [&](Outcome& o) {
    Writer w{(fs::path(out_dir) / "verify").string(), "verify", &o};
    std::ifstream in(complex_path);
    if (!in) throw Error(ErrorCode::FileMissing, "cannot open complex '" + complex_path + "'", complex_path);
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, "complex file is not valid JSON: " + std::string(e.what()), complex_path);
    }
    const auto cx = core::complex_from_json(j);
    wallgeom::WallGeometry geo(cx);
    LemmaTotals t;
    const std::uint64_t seed = u64(c.data, "seed");
    const std::size_t instances = u64(c.data, "instances");
    check_medians(cx, instances, seed, complex_path, t);
    check_geometry(geo, c.data, seed, complex_path, instances + 1, t);
    for (std::size_t j2 = 0; j2 < instances; ++j2) {
      Rng rng = substream(seed ^ 0x636861696eULL, j2);
      chain_instance(geo, rng, complex_path, t);
    }
    if (t.violations()) fail(o, std::to_string(t.violations()) + " lemma violations");
    json result = t.to_json();
    result["vertices"] = cx.vertex_count();
    result["walls"] = cx.wall_count();
    result["hash"] = cx.hash();
    o.result = finish(o, std::move(result), c);
    w.put("result.json", emit_json(o.result));
  });
}

}  // namespace mw::harness
