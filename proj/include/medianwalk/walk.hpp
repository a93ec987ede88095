#pragma once

// Seeded random walks Z_n = g_1 ... g_n on right-angled Artin groups, and the
// estimators built on them: drift, CLT normality, variance (direct and via the
// cocycle formula), certified strong-separation growth, deviation profiles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medianwalk/raag.hpp"
#include "medianwalk/util.hpp"

namespace mw::walk {

using raag::Element;
using raag::GraphPtr;

struct StepMeasure {
  GraphPtr graph;
  std::vector<Element> support;
  std::vector<double> prob;

  // {"kind": "srw", "laziness": p} (uniform on generators and inverses, mass p
  // at the identity) or {"kind": "explicit", "support": [{"word": .., "p": ..}]}.
  static StepMeasure from_json(GraphPtr g, const nlohmann::json& j);
  static StepMeasure srw(GraphPtr g, double laziness = 0.0);
  nlohmann::json to_json() const;

  std::size_t max_step() const;
  std::size_t sample(Rng& rng) const;  // index into support
  bool validated() const { return cumulative_.size() == support.size() && !support.empty(); }

 private:
  std::vector<double> cumulative_;
  friend StepMeasure validate_measure(StepMeasure, std::size_t, bool);
};

// Normalization within 1e-12 (ProbSumInvalid) and the semigroup generation
// check within `radius` factors (NotGenerating, detail = missing generator,
// uppercase for an inverse). `allow_degenerate` skips the generation check.
StepMeasure validate_measure(StepMeasure m, std::size_t radius = 8, bool allow_degenerate = false);

struct SimOptions {
  bool store_paths = false;  // keep d(Z_k o, o) for every k
  bool compute_s_lower = true;
  std::size_t workers = 0;   // 0 = default_workers()
};

struct WalkRun {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  StepMeasure measure;
  std::vector<std::size_t> checkpoints;             // ascending, last = n
  std::vector<std::vector<std::uint32_t>> distance;  // [trial][checkpoint]
  std::vector<std::vector<Element>> points;          // [trial][checkpoint]
  std::vector<std::vector<std::uint32_t>> paths;     // [trial][k], when stored
  std::vector<std::uint32_t> s_lower;                // [trial], at n

  std::uint32_t final_distance(std::size_t trial) const { return distance[trial].back(); }
  const Element& endpoint(std::size_t trial) const { return points[trial].back(); }
};

// Checkpoints n/4, n/2, n (deduplicated, zero dropped unless n = 0).
WalkRun simulate(const StepMeasure& m, std::uint64_t seed, std::size_t n, std::size_t trials,
                 const SimOptions& options = {});

struct Estimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double stderr_ = 0.0;

  bool excludes_zero() const { return lo > 0.0 || hi < 0.0; }
  bool overlaps(const Estimate& o) const { return lo <= o.hi && o.lo <= hi; }
  nlohmann::json to_json() const;
};

inline constexpr double kZ99 = 2.576;

// Mean with normal-approximation 99% interval. Needs at least two samples.
Estimate mean_ci(const std::vector<double>& xs);
// Interval = value ± 2.576 * (standard deviation of `resamples` bootstrap
// replicates of the statistic).
Estimate bootstrap_mean(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed);
Estimate bootstrap_variance(const std::vector<double>& xs, std::size_t resamples, std::uint64_t seed);

Estimate drift_estimate(const WalkRun& run);

std::vector<double> clt_stat(const WalkRun& run, double lambda);

struct KSResult {
  double statistic = 0.0;
  double critical = 0.0;  // 1.628 / sqrt(N)
  bool pass = false;
};
// One-sample KS against N(0, variance). Throws TooFewTrials below 500 samples.
KSResult ks_normal_test(std::vector<double> samples, double variance);
inline constexpr std::size_t kMinKSSamples = 500;

Estimate s_growth(const WalkRun& run);

struct DeviationRow {
  std::string kind;  // "deviation" (|d - k lambda| >= eps k) or "gromov" ((Z_k o|y)_o >= a k)
  double threshold = 0.0;
  std::vector<double> frequency;  // per checkpoint
  bool nonincreasing = false;
};
std::vector<DeviationRow> deviation_profile(const WalkRun& run, double lambda,
                                            const std::vector<double>& epsilons,
                                            const std::vector<double>& a_values, const Element& probe);

struct CocycleReport {
  std::size_t samples = 0;
  std::size_t cocycle_violations = 0;
  std::size_t horofunction_violations = 0;  // the three Gromov/horofunction identities
  std::size_t median_form_violations = 0;
  std::size_t gromov_form_violations = 0;
  std::size_t total() const {
    return cocycle_violations + horofunction_violations + median_form_violations +
           gromov_form_violations;
  }
};
// Random (g, g', x, y, a, z) with words up to `max_len` letters; all checks exact.
CocycleReport cocycle_check(const GraphPtr& g, std::size_t samples, std::uint64_t seed,
                            std::size_t max_len = 12);

// h_x(a) = d(x, a) - d(x, o) for an orbit point x.
std::int64_t horofunction(const Element& x, const Element& a);
std::uint64_t gromov_at_origin(const Element& x, const Element& y);

struct PsiSigma {
  std::vector<double> psi_at_xi;     // psi-hat at each boundary proxy
  std::vector<double> psi_at_gxi;    // psi-hat at its translate
  std::vector<double> terms;         // squared integrand samples
  Estimate sigma2_formula;
  std::size_t backward_samples = 0;
};
// T >= 100 (InvalidArgument otherwise); samples >= 2 (TooFewTrials).
PsiSigma psi_sigma_estimate(const StepMeasure& m, std::uint64_t seed, std::size_t T,
                            std::size_t samples, double lambda_hat, std::size_t backward_samples = 400,
                            std::size_t bootstrap = 200);

struct BoiteReport {
  std::size_t steps_checked = 0;
  std::size_t hypotheses_true = 0;
  std::size_t violations_1 = 0;
  std::size_t violations_2 = 0;
  std::size_t violations_3_before = 0;  // k < n0
  std::size_t violations_3_after = 0;   // k >= n0
  std::size_t n0 = 0;
  bool strict = false;  // A > 3 eps: late (3) violations are failures
  std::size_t failures() const {
    return violations_1 + violations_2 + (strict ? violations_3_after : 0);
  }
};
// Replays each trial of `run` and evaluates the hypotheses every `stride` steps.
BoiteReport boite_monitor(const WalkRun& run, double lambda, double eps, double A, const Element& x,
                          const Element& y, std::size_t stride, std::size_t n0);

// The endpoint of a walk of length T on substream (seed, stream), using m or
// its reflection.
Element walk_endpoint(const StepMeasure& m, std::uint64_t seed, std::uint64_t stream, std::size_t T,
                      bool backward = false);

struct CLTReport {
  Estimate lambda_hat;
  Estimate sigma2_direct;
  std::optional<Estimate> sigma2_formula;
  double ks_statistic = 0.0;
  double ks_critical = 0.0;
  double ks_variance = 0.0;
  bool normality_pass = false;
  Estimate s_slope;
  bool nondegenerate = false;

  nlohmann::json to_json() const;
};

}  // namespace mw::walk
