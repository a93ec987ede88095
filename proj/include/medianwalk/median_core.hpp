#pragma once

// Finite median graphs (1-skeleta of finite CAT(0) cube complexes): validated
// construction with wall extraction, medians, intervals, hulls, Gromov
// products, horofunctions, and family generators.
//
// Vertices are dense indices. A vertex is identified with its signature: bit w
// is set when the vertex lies on side one of wall w. Wall sides are oriented
// so that vertex 0 always lies on side zero.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "medianwalk/error.hpp"
#include "medianwalk/util.hpp"

namespace mw::core {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Wall {
  std::size_t id = 0;
  std::vector<Vertex> side_zero;
  std::vector<Vertex> side_one;
  std::vector<std::size_t> dual_edges;  // indices into FiniteMedianComplex::edges()
};

// One side of a wall; orientation false = side zero.
struct Halfspace {
  std::size_t wall_id = 0;
  bool orientation = false;

  Halfspace complement() const { return {wall_id, !orientation}; }
  friend auto operator<=>(const Halfspace&, const Halfspace&) = default;
};

enum class MedianCheck { Exhaustive, Sampled };

struct BuildOptions {
  // Exhaustive median validation while the number of unordered triples stays
  // below this bound; otherwise `sampled_triples` random triples are checked.
  std::uint64_t exhaustive_triple_limit = 10'000'000;
  std::size_t sampled_triples = 100'000;
  std::uint64_t sample_seed = 0x6d656469616eULL;
  std::size_t max_vertices = 20'000;
};

class FiniteMedianComplex {
 public:
  // Validates the graph and extracts walls. Throws mw::Error with NotConnected,
  // NotBipartite, NotMedian (witness = offending triple, when one is found),
  // SizeBudgetExceeded or InvalidArgument.
  static FiniteMedianComplex build(std::size_t vertex_count, std::span<const Edge> edges,
                                   const BuildOptions& options = {});
  FiniteMedianComplex() = default;  // empty placeholder

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t wall_count() const { return walls_.size(); }

  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const;
  const std::vector<Wall>& walls() const { return walls_; }
  const Wall& wall(std::size_t id) const;

  // Wall dual to the edge {u, v}; nullopt when u, v are not adjacent.
  std::optional<std::size_t> wall_of_edge(Vertex u, Vertex v) const;
  std::size_t wall_of_edge_index(std::size_t edge_index) const { return edge_wall_[edge_index]; }

  std::uint32_t distance(Vertex x, Vertex y) const;
  bool side(std::size_t wall_id, Vertex v) const;
  bool contains(const Halfspace& h, Vertex v) const { return side(h.wall_id, v) == h.orientation; }

  std::span<const std::uint64_t> signature(Vertex v) const;
  std::size_t signature_words() const { return sig_words_; }
  std::optional<Vertex> vertex_with_signature(std::span<const std::uint64_t> sig) const;

  MedianCheck median_check() const { return median_check_; }
  std::uint64_t triples_checked() const { return triples_checked_; }

  // Digest of the canonical (sorted) edge list.
  const std::string& hash() const { return hash_; }

  void check_vertex(Vertex v) const;

 private:

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> adj_offsets_;
  std::vector<Vertex> adj_;
  std::vector<std::size_t> adj_edge_;  // edge index per adjacency slot
  std::vector<std::uint16_t> dist_;
  std::vector<Wall> walls_;
  std::vector<std::size_t> edge_wall_;
  std::size_t sig_words_ = 0;
  std::vector<std::uint64_t> sigs_;
  std::vector<Vertex> sig_table_;  // open addressing, kNoVertex = empty
  MedianCheck median_check_ = MedianCheck::Exhaustive;
  std::uint64_t triples_checked_ = 0;
  std::string hash_;

  std::optional<Vertex> lookup(std::span<const std::uint64_t> sig) const;
  void index_signatures();
};

inline constexpr Vertex kNoVertex = 0xffffffffu;

using VertexSet = std::vector<Vertex>;  // sorted, unique

// Median by half-space majority.
Vertex median(const FiniteMedianComplex& c, Vertex x, Vertex y, Vertex z);
// Median as the unique element of I(x,y) ∩ I(y,z) ∩ I(x,z); O(n) scan.
Vertex median_by_intervals(const FiniteMedianComplex& c, Vertex x, Vertex y, Vertex z);

VertexSet interval(const FiniteMedianComplex& c, Vertex x, Vertex y);
// Intersection of all half-spaces containing both x and y.
VertexSet interval_by_halfspaces(const FiniteMedianComplex& c, Vertex x, Vertex y);

// Smallest interval-closed superset of `s` (computed as the intersection of
// the half-spaces containing s).
VertexSet convex_hull(const FiniteMedianComplex& c, std::span<const Vertex> s);

std::uint32_t gromov_product(const FiniteMedianComplex& c, Vertex x, Vertex y, Vertex o);
std::int64_t horofunction(const FiniteMedianComplex& c, Vertex x, Vertex o, Vertex a);

std::vector<std::size_t> separating_walls(const FiniteMedianComplex& c, Vertex x, Vertex y);
bool side_is_convex(const FiniteMedianComplex& c, std::size_t wall_id, bool side);

// ---- families -------------------------------------------------------------

struct FamilySpec {
  enum class Kind { Tree, Path, BinaryTree, Grid, Hypercube, Product, MedianClosure };
  Kind kind = Kind::Path;
  std::vector<std::uint64_t> params;
  std::vector<FamilySpec> factors;  // Product only

  // Textual form, e.g. "grid(3,3)", "product(path(2),hypercube(2))",
  // "tree(7,40)", "median_closure(1,6,12)".
  static FamilySpec parse(std::string_view text);
  std::string to_string() const;
};

struct FamilyOptions {
  std::size_t max_vertices = 4096;
  BuildOptions build;
};

// Throws SizeBudgetExceeded when the output would exceed options.max_vertices.
FiniteMedianComplex generate_family(const FamilySpec& spec, const FamilyOptions& options = {});
FiniteMedianComplex product(const FiniteMedianComplex& a, const FiniteMedianComplex& b,
                            const BuildOptions& options = {});

// ---- interchange ----------------------------------------------------------

// {vertices: n, edges: [[u,v],...]} with optional "labels": [..] (edges may then
// name labels instead of indices). "walls" is ignored on input.
FiniteMedianComplex complex_from_json(const nlohmann::json& j, const BuildOptions& options = {});
// Adds walls: [[side-zero indices], ...].
nlohmann::json complex_to_json(const FiniteMedianComplex& c);

}  // namespace mw::core
