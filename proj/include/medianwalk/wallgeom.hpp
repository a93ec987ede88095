#pragma once

// Pairwise wall geometry of a finite median complex: transversality, nesting,
// strong separation, the contact graph, and checkers for the combinatorial
// lemmas about them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medianwalk/median_core.hpp"

namespace mw::wallgeom {

using core::FiniteMedianComplex;
using core::Halfspace;
using core::Vertex;

enum class WallRelation { Equal, Transverse, TightlyNested, NestedLoose };

const char* relation_name(WallRelation r);

// Graph on walls; adjacency = transverse or tightly nested.
class ContactGraph {
 public:
  ContactGraph() = default;
  ContactGraph(std::vector<std::vector<std::uint32_t>> adjacency);

  std::size_t node_count() const { return adj_.size(); }
  const std::vector<std::vector<std::uint32_t>>& adjacency() const { return adj_; }
  bool adjacent(std::size_t a, std::size_t b) const;

  std::uint32_t distance(std::size_t a, std::size_t b) const;
  // 2 (a|b)_base, exact.
  std::int64_t gromov_doubled(std::size_t a, std::size_t b, std::size_t base) const;
  // (a|b)_base rounded down.
  std::int64_t gromov(std::size_t a, std::size_t b, std::size_t base) const {
    return gromov_doubled(a, b, base) / 2;
  }
  std::uint32_t diameter() const;

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::uint16_t> dist_;
  void check(std::size_t w) const;
};

// Precomputed pair tables for one complex. Holds a reference: the complex must
// outlive the geometry.
class WallGeometry {
 public:
  explicit WallGeometry(const FiniteMedianComplex& c);

  const FiniteMedianComplex& complex() const { return *c_; }
  std::size_t wall_count() const { return w_; }

  WallRelation relation(std::size_t a, std::size_t b) const;
  bool transverse(std::size_t a, std::size_t b) const;
  // Requires a != b.
  bool strongly_separated(std::size_t a, std::size_t b) const;
  // h ⊆ k as vertex sets.
  bool subset(const Halfspace& h, const Halfspace& k) const;

  std::span<const std::uint64_t> transverse_row(std::size_t w) const { return trans_.row(w); }
  std::span<const std::uint64_t> ss_row(std::size_t w) const { return ss_.row(w); }

  const ContactGraph& contact() const { return contact_; }

  // Walls with an edge at v, ascending.
  std::vector<std::size_t> adjacent_walls(Vertex v) const;
  // Vertices of the carrier N(w), ascending.
  std::vector<Vertex> carrier(std::size_t w) const;

  void check_wall(std::size_t w) const;

 private:
  const FiniteMedianComplex* c_;
  std::size_t w_ = 0;
  std::vector<std::uint8_t> rel_;  // WallRelation, w_ x w_
  BitMatrix sub_;                  // 2w_ x 2w_, halfspace index 2*wall + orientation
  BitMatrix trans_;
  BitMatrix ss_;
  ContactGraph contact_;
};

// Direct single-pair computations by exhaustive scan over the side sets and all
// other walls; independent of the WallGeometry tables.
WallRelation wall_relation(const FiniteMedianComplex& c, std::size_t a, std::size_t b);
bool strongly_separated(const FiniteMedianComplex& c, std::size_t a, std::size_t b);

// ---- strongly separated subsets --------------------------------------------

struct SSSet {
  std::size_t size = 0;
  // Walls of a realizing set, ordered from x towards y.
  std::vector<std::size_t> chain;
  std::size_t separating = 0;   // d(x, y)
  bool clique_checked = false;  // brute-force cross-check was run
  bool disagreement = false;    // chain DP and clique search differed
};

struct SSOptions {
  std::size_t clique_check_limit = 20;
};

SSSet max_ss_set(const WallGeometry& g, Vertex x, Vertex y, const SSOptions& options = {});

// Nested triples h1 ⊃ h2 ⊃ h3 with (h1,h2), (h2,h3) strongly separated but
// (h1,h3) not; returns the first such wall triple found (there should be none).
std::optional<std::vector<std::size_t>> find_ss_transitivity_failure(const WallGeometry& g);

// ---- lemma checkers --------------------------------------------------------

struct LemmaReport {
  std::string lemma;
  std::string complex_hash;
  std::uint64_t cases_checked = 0;
  std::uint64_t violations = 0;
  std::vector<std::vector<std::int64_t>> witnesses;  // first few violations

  nlohmann::json to_json() const;
};

// Scans all wall pairs. `counterexample` is a pair at contact distance >= 3
// that is not strongly separated. `converse` lists (up to `max_converse`)
// strongly separated pairs at contact distance <= 2.
struct RemarkSSResult {
  std::optional<std::pair<std::size_t, std::size_t>> counterexample;
  std::vector<std::pair<std::size_t, std::size_t>> converse;
  std::uint64_t pairs_checked = 0;
  LemmaReport report;
};
RemarkSSResult verify_remark_ss(const WallGeometry& g, std::size_t max_converse = 16);

// Samples `trials` vertex pairs (the first is always a diagonal pair x = y).
// Checks d_CX(π(x), π(y)) <= d(x, y) and, when d_CX(π(x), π(y)) >= A, that
// the separating walls contain floor(A/3) pairwise strongly separated ones.
LemmaReport verify_projection_lemma(const WallGeometry& g, std::size_t trials, std::uint32_t A,
                                    std::uint64_t seed);
// Clique distance min over a in π(x), b in π(y).
std::uint32_t projection_distance(const WallGeometry& g, Vertex x, Vertex y);

struct HierarchyPath {
  std::vector<Vertex> geodesic;             // x ... y
  std::vector<std::size_t> walls;           // h_0 ... h_K
  std::vector<std::size_t> segment_starts;  // index into geodesic where γ_i starts
};

// Throws NotFound if no decomposition exists (which would be a bug).
HierarchyPath hierarchy_path_search(const WallGeometry& g, Vertex x, Vertex y);
// Checks a decomposition; returns an empty string when valid.
std::string check_hierarchy_path(const WallGeometry& g, Vertex x, Vertex y,
                                 const HierarchyPath& path);

// `chain` lists walls in nesting order (either direction). Throws ChainInvalid
// unless consecutive walls are nested in a consistent direction and all pairs
// are strongly separated.
LemmaReport verify_chain_gromov(const WallGeometry& g, std::span<const std::size_t> chain);

struct BoxInstance {
  Vertex m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  bool hypothesis = false;
  std::optional<Halfspace> h1, h2;  // a pair realizing the hypothesis
  bool conclusion() const { return m1 == m3 && m3 == m4; }
};

// Evaluates the hypothesis over all strongly separated pairs h1 ⊂ h2.
BoxInstance box_instance(const WallGeometry& g, Vertex o, Vertex x, Vertex y, Vertex z);

enum class BoxMode { Auto, Exhaustive, Sampled };

struct BoxResult {
  std::optional<std::vector<Vertex>> counterexample;  // o, x, y, z
  std::uint64_t hypothesis_cases = 0;
  LemmaReport report;
};

// Auto = exhaustive up to 64 vertices, otherwise `samples` random quadruples.
BoxResult verify_box_lemma(const WallGeometry& g, BoxMode mode = BoxMode::Auto,
                           std::size_t samples = 100'000, std::uint64_t seed = 1);

// ---- hyperbolicity ---------------------------------------------------------

struct DeltaEstimate {
  std::int64_t doubled = 0;  // largest (S1 - S2) over quadruples; delta = doubled / 2
  bool exact = false;
  std::uint64_t quadruples = 0;
  double value() const { return static_cast<double>(doubled) / 2.0; }
};

// Exact when the number of unordered quadruples is at most `samples`.
// Throws Disconnected.
DeltaEstimate hyperbolicity_delta(const std::vector<std::vector<std::uint32_t>>& adjacency,
                                  std::uint64_t samples, std::uint64_t seed = 1);

}  // namespace mw::wallgeom
