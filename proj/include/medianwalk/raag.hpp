#pragma once

// Right-angled Artin groups acting on the universal covers of their Salvetti
// complexes. The 1-skeleton is the Cayley graph, so every geometric quantity
// reduces to reduced words modulo commutation (heaps of pieces).
//
// Letters are encoded as 2*generator + (inverse ? 1 : 0). The canonical
// linearization of a heap is the lexicographically least word under this code,
// i.e. generators by index, positive before inverse.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "medianwalk/median_core.hpp"

namespace mw::raag {

using Letter = std::uint8_t;

inline constexpr std::size_t kMaxGenerators = 64;

inline Letter make_letter(std::size_t gen, bool inverse) {
  return static_cast<Letter>(gen * 2 + (inverse ? 1 : 0));
}
inline std::size_t letter_gen(Letter l) { return l >> 1; }
inline bool letter_inverse(Letter l) { return l & 1; }
inline Letter invert(Letter l) { return static_cast<Letter>(l ^ 1); }

class DefiningGraph {
 public:
  // Generator names: lowercase letters, digits and '_', starting with a letter.
  // Throws InvalidArgument (bad name, self-loop, > 64 generators) or
  // UnknownGenerator (edge endpoint).
  DefiningGraph(std::vector<std::string> names,
                const std::vector<std::pair<std::string, std::string>>& edges);

  // "F2", "Z2", "C5", "free(k)", "abelian(k)", "cycle(k)", "path(k)".
  static std::shared_ptr<const DefiningGraph> named(const std::string& spec);
  // {generators: [...], edges: [[u, v], ...]}; unknown keys rejected.
  static std::shared_ptr<const DefiningGraph> from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t gen) const { return names_.at(gen); }
  std::optional<std::size_t> index(std::string_view name) const;
  std::uint64_t link(std::size_t gen) const { return link_[gen]; }
  std::uint64_t all() const { return size() == 64 ? ~0ULL : (1ULL << size()) - 1; }
  bool commute(std::size_t a, std::size_t b) const { return (link_[a] >> b) & 1; }
  const std::string& label() const { return label_; }

  friend bool operator==(const DefiningGraph& a, const DefiningGraph& b) {
    return a.names_ == b.names_ && a.link_ == b.link_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::uint64_t> link_;
  std::string label_;
};

using GraphPtr = std::shared_ptr<const DefiningGraph>;

// A reduced (not necessarily canonical) word, grown by right multiplication.
class ReducedWord {
 public:
  explicit ReducedWord(GraphPtr g) : g_(std::move(g)) {}

  // Right-multiplies by one letter, cancelling against the last piece with the
  // same generator when everything after it commutes with that generator.
  void append(Letter l);
  void append(std::span<const Letter> ls) {
    for (auto l : ls) append(l);
  }
  std::size_t size() const { return w_.size(); }
  const std::vector<Letter>& letters() const { return w_; }
  const GraphPtr& graph() const { return g_; }
  void clear() { w_.clear(); }

 private:
  GraphPtr g_;
  std::vector<Letter> w_;
};

// A group element in canonical normal form.
class Element {
 public:
  Element() = default;
  explicit Element(GraphPtr g) : g_(std::move(g)) {}
  // Reduces and canonicalizes an arbitrary word. Throws UnknownGenerator.
  Element(GraphPtr g, std::span<const Letter> word);

  // "a B c" (uppercase = inverse), "a^-1", or concatenated single-character
  // names ("ab") when every generator name is one character. "" or "1" is the
  // identity.
  static Element parse(GraphPtr g, std::string_view text);
  std::string to_string() const;

  const std::vector<Letter>& letters() const { return w_; }
  std::size_t length() const { return w_.size(); }
  const GraphPtr& graph() const { return g_; }

  friend bool operator==(const Element& a, const Element& b);

 private:
  GraphPtr g_;
  std::vector<Letter> w_;
};

// Same defining graph (by identity or by content); otherwise DefiningGraphMismatch.
void check_same_graph(const GraphPtr& a, const GraphPtr& b);

// Canonical linearization of a reduced word.
std::vector<Letter> canonical(const DefiningGraph& g, std::span<const Letter> reduced);

Element nf(GraphPtr g, std::span<const Letter> word);
Element mul(const Element& a, const Element& b);
Element inv(const Element& a);
std::uint64_t dist(const Element& a, const Element& b);
Element median_raag(const Element& x, const Element& y, const Element& z);
std::uint64_t gromov_raag(const Element& x, const Element& y, const Element& o);

// ---- heaps ------------------------------------------------------------------

// Dependence order on the positions of a reduced word: i < j related when the
// labels are equal or do not commute, transitively closed.
class Heap {
 public:
  Heap(const DefiningGraph& g, std::span<const Letter> reduced);

  std::size_t size() const { return w_.size(); }
  Letter letter(std::size_t i) const { return w_[i]; }
  const std::vector<std::uint32_t>& preds(std::size_t i) const { return preds_[i]; }
  // Largest position <= j (in heap order) carrying generator gen, or -1.
  std::int64_t top(std::size_t j, std::size_t gen) const { return top_[j * k_ + gen]; }
  bool below(std::size_t i, std::size_t j) const;  // i <= j
  bool comparable(std::size_t i, std::size_t j) const { return below(i, j) || below(j, i); }

 private:
  std::vector<Letter> w_;
  std::size_t k_ = 0;
  std::vector<std::vector<std::uint32_t>> preds_;
  std::vector<std::int32_t> top_;
};

struct Piece {
  std::size_t position = 0;  // index into the canonical letters
  std::size_t gen = 0;
  bool inverse = false;
  Element prefix;  // product of the strict down-set
};

std::vector<Piece> pieces(const Element& g);
// Throws PieceMismatch when p or q is not a position of g.
bool transverse_pieces(const Element& g, std::size_t p, std::size_t q);

// ---- walls ------------------------------------------------------------------

// The wall dual to the edge {base, base*gen}. W(a,s) = W(b,s) iff
// a^-1 b lies in the subgroup generated by lk(s).
struct RaagWall {
  Element base;
  std::size_t gen = 0;

  RaagWall canonical() const;  // base reduced to the shortest coset representative
  friend bool operator==(const RaagWall& a, const RaagWall& b);
};

// The side containing base*gen when `positive`, the side containing base
// otherwise.
struct RaagHalfspace {
  RaagWall wall;
  bool positive = true;
};

RaagWall piece_wall(const Element& g, const Piece& p);
// The side of the piece's wall not containing the origin.
RaagHalfspace piece_halfspace(const Element& g, const Piece& p);

// Exact: distinct commuting labels s, t and a^-1 b in <lk s><lk t>.
bool walls_transverse(const RaagWall& a, const RaagWall& b);
// w in <A><B> for generator masks A, B.
bool in_special_product(const DefiningGraph& g, std::span<const Letter> reduced, std::uint64_t A,
                        std::uint64_t B);

enum class SSVerdict { YesCertified, NoCertified, Unknown };
const char* verdict_name(SSVerdict v);

struct SSCertificate {
  SSVerdict verdict = SSVerdict::Unknown;
  std::string reason;
  std::optional<RaagWall> witness;  // NoCertified: a wall transverse to both
  std::size_t radius = 0;
};

// Pieces must be comparable (PieceMismatch otherwise); order is normalized.
// Throws RadiusZero when radius == 0.
SSCertificate ss_pieces(const Element& g, std::size_t p, std::size_t q, std::size_t radius = 8);
SSCertificate ss_walls(const RaagWall& a, const RaagWall& b, std::size_t radius = 8);

// Longest heap chain with consecutive labels having disjoint links.
std::size_t max_certified_ss_chain(const Element& g);

// ---- translation length -------------------------------------------------------

struct CyclicReduction {
  Element conjugator;  // g = conjugator * core * conjugator^-1
  Element core;
};
CyclicReduction cyclic_reduce(const Element& g);

struct TranslationLength {
  std::uint64_t length = 0;  // cyclic: |core|; limit: |g^N| - |g^(N-1)|
  double ratio = 0.0;        // limit: |g^N| / N; cyclic: same as length
  std::size_t power = 0;
};
TranslationLength translation_length_cyclic(const Element& g);
TranslationLength translation_length_limit(const Element& g, std::size_t N);

struct Rank1Witness {
  RaagHalfspace halfspace;  // g^power * h is a proper, strongly separated subset of h
  std::size_t power = 0;
  std::vector<std::size_t> chain;  // certified heap chain in core^(power+1)
  CyclicReduction reduction;
};
std::optional<Rank1Witness> find_rank1_witness(const Element& g, std::size_t max_power = 20,
                                               std::size_t radius = 8);

// Partition of the generators when the defining graph is a join.
std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> is_join(
    const DefiningGraph& g);

// ---- finite hulls ---------------------------------------------------------------

struct Hull {
  core::FiniteMedianComplex complex;
  std::vector<Element> vertices;      // element of each hull vertex
  std::vector<core::Vertex> points;   // hull vertex of each input point
  std::unordered_map<std::string, core::Vertex> index;  // canonical letters -> vertex

  std::optional<core::Vertex> vertex_of(const Element& e) const;
  // Hull wall dual to the Cayley edge {base, base*gen}, when it lies in the hull.
  std::optional<std::size_t> wall_of(const RaagWall& w) const;
};

// Convex hull of the points in the Cayley graph. Throws BudgetExceeded when it
// would exceed `budget` vertices.
Hull hull_materialize(std::span<const Element> points, std::size_t budget = 20'000,
                      const core::BuildOptions& options = {});

}  // namespace mw::raag
