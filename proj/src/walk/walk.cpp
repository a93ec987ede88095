#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "medianwalk/walk.hpp"

namespace mw::walk {

using raag::Letter;
using raag::ReducedWord;

namespace {

std::vector<Letter> inverse_word(std::span<const Letter> w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (auto& l : out) l = raag::invert(l);
  return out;
}

// |x^-1 y| without canonicalizing.
std::uint64_t word_dist(const Element& x, const Element& y) {
  ReducedWord r(x.graph());
  r.append(inverse_word(x.letters()));
  r.append(y.letters());
  return r.size();
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

// ---- measures -------------------------------------------------------------------------

StepMeasure StepMeasure::srw(GraphPtr g, double laziness) {
  StepMeasure m;
  m.graph = g;
  const double each = (1.0 - laziness) / static_cast<double>(2 * g->size());
  for (std::size_t s = 0; s < g->size(); ++s)
    for (bool inverse : {false, true}) {
      const Letter l = raag::make_letter(s, inverse);
      m.support.emplace_back(g, std::span<const Letter>(&l, 1));
      m.prob.push_back(each);
    }
  if (laziness > 0.0) {
    m.support.emplace_back(g);
    m.prob.push_back(laziness);
  }
  return m;
}

StepMeasure StepMeasure::from_json(GraphPtr g, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, "measure must be an object", "measure");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "kind" && it.key() != "laziness" && it.key() != "support")
      throw Error(ErrorCode::SchemaViolation, "unknown measure key '" + it.key() + "'", it.key());
  const std::string kind = j.value("kind", std::string("srw"));
  if (kind == "srw") {
    if (j.contains("support"))
      throw Error(ErrorCode::SchemaViolation, "srw measures take no support list", "support");
    const auto& lz = j.contains("laziness") ? j["laziness"] : nlohmann::json(0.0);
    if (!lz.is_number() || lz.get<double>() < 0.0 || lz.get<double>() >= 1.0)
      throw Error(ErrorCode::SchemaViolation, "laziness must be a number in [0, 1)", "laziness");
    return srw(std::move(g), lz.get<double>());
  }
  if (kind != "explicit") throw Error(ErrorCode::SchemaViolation, "unknown measure kind '" + kind + "'", "kind");
  if (j.contains("laziness"))
    throw Error(ErrorCode::SchemaViolation, "laziness applies to srw measures only", "laziness");
  if (!j.contains("support") || !j["support"].is_array() || j["support"].empty())
    throw Error(ErrorCode::SchemaViolation, "explicit measures need a nonempty support list", "support");
  StepMeasure m;
  m.graph = g;
  for (const auto& e : j["support"]) {
    if (!e.is_object() || !e.contains("word") || !e.contains("p") || !e["word"].is_string() ||
        !e["p"].is_number() || e.size() != 2)
      throw Error(ErrorCode::SchemaViolation, "support entries are {\"word\": str, \"p\": number}", "support");
    m.support.push_back(Element::parse(g, e["word"].get<std::string>()));
    m.prob.push_back(e["p"].get<double>());
  }
  return m;
}

nlohmann::json StepMeasure::to_json() const {
  nlohmann::json s = nlohmann::json::array();
  for (std::size_t i = 0; i < support.size(); ++i)
    s.push_back({{"word", support[i].to_string()}, {"p", round12(prob[i])}});
  return {{"kind", "explicit"}, {"support", s}};
}

std::size_t StepMeasure::max_step() const {
  std::size_t m = 0;
  for (const auto& e : support) m = std::max(m, e.length());
  return m;
}

std::size_t StepMeasure::sample(Rng& rng) const {
  const double u = uniform01(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto i = static_cast<std::size_t>(it - cumulative_.begin());
  return std::min(i, support.size() - 1);
}

StepMeasure validate_measure(StepMeasure m, std::size_t radius, bool allow_degenerate) {
  if (!m.graph) throw Error(ErrorCode::InvalidArgument, "measure without a defining graph");
  if (m.support.empty() || m.support.size() != m.prob.size())
    throw Error(ErrorCode::ProbSumInvalid, "measure support is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < m.prob.size(); ++i) {
    raag::check_same_graph(m.graph, m.support[i].graph());
    if (!(m.prob[i] > 0.0))
      throw Error(ErrorCode::ProbSumInvalid, "probabilities must be positive", std::to_string(i));
    sum += m.prob[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ErrorCode::ProbSumInvalid, "probabilities sum to " + format_real(sum), format_real(sum));
  m.cumulative_.clear();
  double acc = 0.0;
  for (double p : m.prob) m.cumulative_.push_back(acc += p);

  if (allow_degenerate) return m;
  const auto& g = *m.graph;
  // Products of at most `radius` support elements; stop once every generator
  // and inverse has appeared.
  std::vector<char> reached(2 * g.size(), 0);
  std::size_t missing = reached.size();
  auto note = [&](const Element& e) {
    if (e.length() != 1) return;
    auto& r = reached[e.letters()[0]];
    if (!r) {
      r = 1;
      --missing;
    }
  };
  std::unordered_set<std::string> seen;
  std::vector<Element> frontier;
  for (const auto& s : m.support)
    if (seen.insert(std::string(s.letters().begin(), s.letters().end())).second) {
      note(s);
      frontier.push_back(s);
    }
  constexpr std::size_t kBudget = 500'000;
  for (std::size_t depth = 1; depth < radius && missing && !frontier.empty() && seen.size() < kBudget;
       ++depth) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& s : m.support) {
        auto y = raag::mul(x, s);
        if (!seen.insert(std::string(y.letters().begin(), y.letters().end())).second) continue;
        note(y);
        next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  if (missing) {
    for (std::size_t s = 0; s < g.size(); ++s)
      if (!reached[2 * s] && !reached[2 * s + 1])
        throw Error(ErrorCode::NotGenerating, "support does not generate: '" + g.name(s) + "' never reached",
                    g.name(s));
    for (std::size_t l = 0; l < reached.size(); ++l)
      if (!reached[l]) {
        auto name = Element(m.graph, std::vector<Letter>{static_cast<Letter>(l)}).to_string();
        throw Error(ErrorCode::NotGenerating, "support does not generate: '" + name + "' never reached", name);
      }
  }
  return m;
}

// ---- simulation --------------------------------------------------------------------------

WalkRun simulate(const StepMeasure& m, std::uint64_t seed, std::size_t n, std::size_t trials,
                 const SimOptions& options) {
  if (!m.validated())
    throw Error(ErrorCode::InvalidArgument, "measure has not been validated");
  WalkRun run;
  run.seed = seed;
  run.n = n;
  run.trials = trials;
  run.measure = m;
  for (std::size_t c : {n / 4, n / 2, n})
    if ((c > 0 || n == 0) && (run.checkpoints.empty() || run.checkpoints.back() != c))
      run.checkpoints.push_back(c);
  run.distance.assign(trials, {});
  run.points.assign(trials, {});
  if (options.store_paths) run.paths.assign(trials, {});
  if (options.compute_s_lower) run.s_lower.assign(trials, 0);

  const std::size_t workers = options.workers ? options.workers : default_workers();
  parallel_blocks(trials, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = substream(seed, t);
      ReducedWord z(m.graph);
      std::size_t next_cp = 0;
      auto& dist = run.distance[t];
      auto& pts = run.points[t];
      std::vector<std::uint32_t>* path = options.store_paths ? &run.paths[t] : nullptr;
      if (path) path->reserve(n + 1);
      for (std::size_t k = 0;; ++k) {
        if (path) path->push_back(static_cast<std::uint32_t>(z.size()));
        if (next_cp < run.checkpoints.size() && run.checkpoints[next_cp] == k) {
          dist.push_back(static_cast<std::uint32_t>(z.size()));
          pts.emplace_back(m.graph, z.letters());
          ++next_cp;
        }
        if (k == n) break;
        z.append(m.support[m.sample(rng)].letters());
      }
      if (options.compute_s_lower) run.s_lower[t] = static_cast<std::uint32_t>(raag::max_certified_ss_chain(pts.back()));
    }
  });
  return run;
}

Element walk_endpoint(const StepMeasure& m, std::uint64_t seed, std::uint64_t stream, std::size_t T,
                      bool backward) {
  Rng rng = substream(seed, stream);
  ReducedWord z(m.graph);
  for (std::size_t k = 0; k < T; ++k) {
    const auto& s = m.support[m.sample(rng)].letters();
    if (backward)
      z.append(inverse_word(s));
    else
      z.append(s);
  }
  return Element(m.graph, z.letters());
}

// ---- estimators ---------------------------------------------------------------------------

nlohmann::json Estimate::to_json() const {
  return {{"value", round12(value)}, {"lo", round12(lo)}, {"hi", round12(hi)}, {"stderr", round12(stderr_)}};
}

Estimate mean_ci(const std::vector<double>& xs) {
  if (xs.size() < 2) throw Error(ErrorCode::TooFewTrials, "an interval needs at least two samples");
  Estimate e;
  e.value = mean_of(xs);
  e.stderr_ = std::sqrt(variance_of(xs) / static_cast<double>(xs.size()));
  e.lo = e.value - kZ99 * e.stderr_;
  e.hi = e.value + kZ99 * e.stderr_;
  return e;
}

namespace {

template <class Stat>
Estimate bootstrap(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed, Stat stat) {
  if (xs.size() < 2) throw Error(ErrorCode::TooFewTrials, "bootstrap needs at least two samples");
  if (resamples < 2) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least two resamples");
  Estimate e;
  e.value = stat(xs);
  std::vector<double> reps;
  std::vector<double> buf(xs.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    Rng rng = substream(seed, r);
    for (auto& b : buf) b = xs[uniform_index(rng, xs.size())];
    reps.push_back(stat(buf));
  }
  e.stderr_ = std::sqrt(variance_of(reps));
  e.lo = e.value - kZ99 * e.stderr_;
  e.hi = e.value + kZ99 * e.stderr_;
  return e;
}

}  // namespace

Estimate bootstrap_mean(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed) {
  return bootstrap(xs, resamples, seed, mean_of);
}

Estimate bootstrap_variance(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed) {
  return bootstrap(xs, resamples, seed, variance_of);
}

Estimate drift_estimate(const WalkRun& run) {
  if (run.n == 0) throw Error(ErrorCode::InvalidArgument, "drift needs n > 0");
  std::vector<double> xs;
  for (std::size_t t = 0; t < run.trials; ++t)
    xs.push_back(static_cast<double>(run.final_distance(t)) / static_cast<double>(run.n));
  return mean_ci(xs);
}

std::vector<double> clt_stat(const WalkRun& run, double lambda) {
  if (run.n == 0) throw Error(ErrorCode::InvalidArgument, "the CLT statistic needs n > 0");
  const double n = static_cast<double>(run.n), root = std::sqrt(n);
  std::vector<double> out;
  for (std::size_t t = 0; t < run.trials; ++t)
    out.push_back((static_cast<double>(run.final_distance(t)) - n * lambda) / root);
  return out;
}

KSResult ks_normal_test(std::vector<double> samples, double variance) {
  if (samples.size() < kMinKSSamples)
    throw Error(ErrorCode::TooFewTrials,
                "KS test needs at least " + std::to_string(kMinKSSamples) + " samples, got " +
                    std::to_string(samples.size()),
                std::to_string(samples.size()));
  if (!(variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "KS reference variance must be positive");
  std::sort(samples.begin(), samples.end());
  const double N = static_cast<double>(samples.size()), sd = std::sqrt(variance);
  double D = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = 0.5 * std::erfc(-samples[i] / (sd * std::sqrt(2.0)));
    D = std::max({D, static_cast<double>(i + 1) / N - F, F - static_cast<double>(i) / N});
  }
  KSResult r;
  r.statistic = D;
  r.critical = 1.628 / std::sqrt(N);
  r.pass = D < r.critical;
  return r;
}

Estimate s_growth(const WalkRun& run) {
  if (run.n == 0) throw Error(ErrorCode::InvalidArgument, "growth needs n > 0");
  if (run.s_lower.size() != run.trials)
    throw Error(ErrorCode::InvalidArgument, "run was simulated without certified chain counts");
  std::vector<double> xs;
  for (auto s : run.s_lower) xs.push_back(static_cast<double>(s) / static_cast<double>(run.n));
  return mean_ci(xs);
}

std::int64_t horofunction(const Element& x, const Element& a) {
  return static_cast<std::int64_t>(word_dist(x, a)) - static_cast<std::int64_t>(x.length());
}

std::uint64_t gromov_at_origin(const Element& x, const Element& y) {
  return (x.length() + y.length() - word_dist(x, y)) / 2;
}

std::vector<DeviationRow> deviation_profile(const WalkRun& run, double lambda,
                                            const std::vector<double>& epsilons,
                                            const std::vector<double>& a_values, const Element& probe) {
  const std::size_t C = run.checkpoints.size();
  auto finish = [&](DeviationRow row, const std::vector<std::size_t>& hits) {
    for (std::size_t c = 0; c < C; ++c)
      row.frequency.push_back(run.trials ? static_cast<double>(hits[c]) / static_cast<double>(run.trials) : 0.0);
    row.nonincreasing = std::is_sorted(row.frequency.rbegin(), row.frequency.rend());
    return row;
  };
  std::vector<DeviationRow> out;
  for (double eps : epsilons) {
    std::vector<std::size_t> hits(C, 0);
    for (std::size_t t = 0; t < run.trials; ++t)
      for (std::size_t c = 0; c < C; ++c) {
        const double k = static_cast<double>(run.checkpoints[c]);
        if (std::abs(static_cast<double>(run.distance[t][c]) - k * lambda) >= eps * k && k > 0) ++hits[c];
      }
    out.push_back(finish({"deviation", eps, {}, false}, hits));
  }
  std::vector<std::vector<std::uint64_t>> gp(run.trials, std::vector<std::uint64_t>(C));
  if (!a_values.empty())
    for (std::size_t t = 0; t < run.trials; ++t)
      for (std::size_t c = 0; c < C; ++c) gp[t][c] = gromov_at_origin(run.points[t][c], probe);
  for (double a : a_values) {
    std::vector<std::size_t> hits(C, 0);
    for (std::size_t t = 0; t < run.trials; ++t)
      for (std::size_t c = 0; c < C; ++c) {
        const double k = static_cast<double>(run.checkpoints[c]);
        if (k > 0 && static_cast<double>(gp[t][c]) >= a * k) ++hits[c];
      }
    out.push_back(finish({"gromov", a, {}, false}, hits));
  }
  return out;
}

// ---- exact identities ---------------------------------------------------------------------

CocycleReport cocycle_check(const GraphPtr& g, std::size_t samples, std::uint64_t seed, std::size_t max_len) {
  CocycleReport rep;
  rep.samples = samples;
  const Element e(g);
  auto random_element = [&](Rng& rng) {
    const auto len = uniform_index(rng, max_len + 1);
    std::vector<Letter> w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<Letter>(uniform_index(rng, 2 * g->size())));
    return Element(g, w);
  };
  auto d = [](const Element& a, const Element& b) { return static_cast<std::int64_t>(raag::dist(a, b)); };
  auto gromov = [](const Element& a, const Element& b, const Element& o) {
    return static_cast<std::int64_t>(raag::gromov_raag(a, b, o));
  };
  // sigma(g, x) = h_x(g^-1 o)
  auto sigma = [&](const Element& gg, const Element& x) { return horofunction(x, raag::inv(gg)); };
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = substream(seed, i);
    const auto a = random_element(rng), b = random_element(rng), x = random_element(rng),
               y = random_element(rng), p = random_element(rng), z = random_element(rng);
    if (sigma(raag::mul(a, b), x) != sigma(a, raag::mul(b, x)) + sigma(b, x)) ++rep.cocycle_violations;
    // h_x(g^-1 o) = -2 (x | g^-1 y)_o + 2 (g x | y)_o + h_y(g o)
    const auto ai = raag::inv(a);
    if (horofunction(x, ai) !=
        -2 * gromov(x, raag::mul(ai, y), e) + 2 * gromov(raag::mul(a, x), y, e) + horofunction(y, a))
      ++rep.horofunction_violations;
    // h_x(p) = d(p, m) - d(o, m) with m = m(p, x, o)
    const auto m = raag::median_raag(p, x, e);
    if (horofunction(x, p) != d(p, m) - d(e, m)) ++rep.median_form_violations;
    // 2 (p|x)_z = d(p, z) + h_x(z) - h_x(p)
    if (2 * gromov(p, x, z) != d(p, z) + horofunction(x, z) - horofunction(x, p)) ++rep.gromov_form_violations;
  }
  return rep;
}

// ---- variance via the cocycle formula -----------------------------------------------------

PsiSigma psi_sigma_estimate(const StepMeasure& m, std::uint64_t seed, std::size_t T, std::size_t samples,
                            double lambda_hat, std::size_t backward_samples, std::size_t bootstrap_n) {
  if (T < 100) throw Error(ErrorCode::InvalidArgument, "boundary proxies need T >= 100");
  if (samples < 2 || backward_samples < 1)
    throw Error(ErrorCode::TooFewTrials, "psi/sigma estimation needs at least two samples");
  const std::uint64_t fwd_seed = splitmix64(seed ^ 0x666f7277617264ULL);
  const std::uint64_t bwd_seed = splitmix64(seed ^ 0x6261636b776172ULL);
  const std::uint64_t step_seed = splitmix64(seed ^ 0x73746570ULL);

  std::vector<Element> backward;
  for (std::size_t i = 0; i < backward_samples; ++i) backward.push_back(walk_endpoint(m, bwd_seed, i, T, true));
  auto psi = [&](const Element& x) {
    double s = 0.0;
    for (const auto& y : backward) s += static_cast<double>(gromov_at_origin(x, y));
    return -2.0 * s / static_cast<double>(backward.size());
  };

  PsiSigma out;
  out.backward_samples = backward_samples;
  out.psi_at_xi.resize(samples);
  out.psi_at_gxi.resize(samples);
  out.terms.resize(samples);
  parallel_blocks(samples, default_workers(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto xi = walk_endpoint(m, fwd_seed, i, T);
      Rng rng = substream(step_seed, i);
      const auto& g = m.support[m.sample(rng)];
      const auto gxi = raag::mul(g, xi);
      const double h = static_cast<double>(horofunction(xi, raag::inv(g)));
      out.psi_at_xi[i] = psi(xi);
      out.psi_at_gxi[i] = psi(gxi);
      const double v = h - out.psi_at_xi[i] + out.psi_at_gxi[i] - lambda_hat;
      out.terms[i] = v * v;
    }
  });
  out.sigma2_formula = bootstrap_mean(out.terms, bootstrap_n, splitmix64(seed ^ 0x626f6f74ULL));
  return out;
}

// ---- Lemma-style monitor ------------------------------------------------------------------

BoiteReport boite_monitor(const WalkRun& run, double lambda, double eps, double A, const Element& x,
                          const Element& y, std::size_t stride, std::size_t n0) {
  if (stride == 0) throw Error(ErrorCode::InvalidArgument, "stride must be positive");
  BoiteReport rep;
  rep.n0 = n0;
  rep.strict = A > 3 * eps;
  const auto& m = run.measure;
  const Element e(m.graph);
  for (std::size_t t = 0; t < run.trials; ++t) {
    Rng rng = substream(run.seed, t);
    ReducedWord z(m.graph);
    for (std::size_t k = 1; k <= run.n; ++k) {
      z.append(m.support[m.sample(rng)].letters());
      if (k % stride) continue;
      ++rep.steps_checked;
      const Element zk(m.graph, z.letters());
      const Element zi = raag::inv(zk);
      const double kk = static_cast<double>(k);
      const double S = static_cast<double>(raag::max_certified_ss_chain(zk));
      const double d = static_cast<double>(zk.length());
      const double hx = static_cast<double>(horofunction(x, zi));
      const double hy = static_cast<double>(horofunction(y, zk));
      if (S < A * kk || std::abs(hx - kk * lambda) > eps * kk || std::abs(d - kk * lambda) > eps * kk ||
          std::abs(hy - kk * lambda) > eps * kk)
        continue;
      ++rep.hypotheses_true;
      if (static_cast<double>(gromov_at_origin(zk, y)) > eps * kk) ++rep.violations_1;
      if (static_cast<double>(raag::gromov_raag(e, x, zi)) < (lambda - eps) * kk) ++rep.violations_2;
      if (static_cast<double>(gromov_at_origin(raag::mul(zk, x), y)) > eps * kk)
        ++(k < n0 ? rep.violations_3_before : rep.violations_3_after);
    }
  }
  return rep;
}

nlohmann::json CLTReport::to_json() const {
  nlohmann::json j = {{"lambda_hat", lambda_hat.to_json()},
                      {"sigma2_direct", sigma2_direct.to_json()},
                      {"ks_statistic", round12(ks_statistic)},
                      {"ks_critical", round12(ks_critical)},
                      {"ks_variance", round12(ks_variance)},
                      {"normality_pass", normality_pass},
                      {"s_slope", s_slope.to_json()},
                      {"nondegenerate", nondegenerate}};
  j["sigma2_formula"] = sigma2_formula ? sigma2_formula->to_json() : nlohmann::json(nullptr);
  return j;
}

}  // namespace mw::walk
