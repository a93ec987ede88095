#include <algorithm>
#include <bit>
#include <cassert>
#include <deque>
#include <numeric>
#include <sstream>

#include "medianwalk/median_core.hpp"

namespace mw::core {

namespace {

constexpr std::size_t kMaxDistanceVertices = 65535;

std::uint64_t hash_words(std::span<const std::uint64_t> words) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto w : words) h = splitmix64(h ^ w);
  return h;
}

// Brute-force search for a triple whose interval intersection is not a single
// vertex. Used only to attach a witness to a NotMedian error.
std::vector<std::int64_t> find_median_witness(std::size_t n,
                                              const std::vector<std::uint16_t>& dist) {
  auto d = [&](std::size_t a, std::size_t b) { return dist[a * n + b]; };
  std::uint64_t budget = 200'000'000;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) {
        if (budget < n) return {};
        budget -= n;
        int count = 0;
        for (std::size_t m = 0; m < n && count < 2; ++m) {
          if (d(x, m) + d(m, y) == d(x, y) && d(y, m) + d(m, z) == d(y, z) &&
              d(x, m) + d(m, z) == d(x, z))
            ++count;
        }
        if (count != 1)
          return {static_cast<std::int64_t>(x), static_cast<std::int64_t>(y),
                  static_cast<std::int64_t>(z), count};
      }
  return {};
}

[[noreturn]] void throw_not_median(std::size_t n, const std::vector<std::uint16_t>& dist,
                                   const std::string& why) {
  auto witness = find_median_witness(n, dist);
  std::string msg = why;
  if (witness.size() == 4) {
    std::ostringstream os;
    os << "; triple (" << witness[0] << "," << witness[1] << "," << witness[2] << ") has "
       << witness[3] << " medians";
    msg += os.str();
    witness.pop_back();
  }
  throw Error(ErrorCode::NotMedian, msg, {}, witness);
}

}  // namespace

FiniteMedianComplex FiniteMedianComplex::build(std::size_t n, std::span<const Edge> edges,
                                               const BuildOptions& options) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "complex needs at least one vertex");
  if (n > options.max_vertices || n > kMaxDistanceVertices)
    throw Error(ErrorCode::SizeBudgetExceeded,
                "vertex count " + std::to_string(n) + " exceeds the distance-table budget");

  FiniteMedianComplex c;
  c.n_ = n;
  c.edges_.reserve(edges.size());
  for (auto e : edges) {
    if (e.u >= n || e.v >= n)
      throw Error(ErrorCode::VertexOutOfRange, "edge endpoint out of range");
    if (e.u == e.v) throw Error(ErrorCode::InvalidArgument, "self-loop");
    c.edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  {
    auto sorted = c.edges_;
    std::sort(sorted.begin(), sorted.end(),
              [](Edge a, Edge b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::InvalidArgument, "duplicate edge");
    std::ostringstream os;
    os << n;
    for (auto e : sorted) os << ';' << e.u << '-' << e.v;
    c.hash_ = sha256_hex(os.str()).substr(0, 16);
  }

  // CSR adjacency.
  c.adj_offsets_.assign(n + 1, 0);
  for (auto e : c.edges_) {
    ++c.adj_offsets_[e.u + 1];
    ++c.adj_offsets_[e.v + 1];
  }
  std::partial_sum(c.adj_offsets_.begin(), c.adj_offsets_.end(), c.adj_offsets_.begin());
  c.adj_.resize(2 * c.edges_.size());
  c.adj_edge_.resize(2 * c.edges_.size());
  {
    auto fill = c.adj_offsets_;
    for (std::size_t i = 0; i < c.edges_.size(); ++i) {
      auto e = c.edges_[i];
      c.adj_[fill[e.u]] = e.v;
      c.adj_edge_[fill[e.u]++] = i;
      c.adj_[fill[e.v]] = e.u;
      c.adj_edge_[fill[e.v]++] = i;
    }
  }

  // Connectivity and 2-colouring.
  {
    std::vector<int> colour(n, -1);
    std::deque<Vertex> queue{0};
    colour[0] = 0;
    std::size_t seen = 1;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (auto w : c.neighbors(v))
        if (colour[w] < 0) {
          colour[w] = 1 - colour[v];
          ++seen;
          queue.push_back(w);
        }
    }
    if (seen != n)
      throw Error(ErrorCode::NotConnected,
                  std::to_string(n - seen) + " vertices unreachable from vertex 0");
    for (auto e : c.edges_)
      if (colour[e.u] == colour[e.v])
        throw Error(ErrorCode::NotBipartite, "odd cycle through edge " + std::to_string(e.u) +
                                                 "-" + std::to_string(e.v),
                    {}, {e.u, e.v});
  }

  // All-pairs distances.
  c.dist_.assign(n * n, 0xffff);
  {
    std::vector<Vertex> queue(n);
    for (Vertex s = 0; s < n; ++s) {
      auto* row = c.dist_.data() + static_cast<std::size_t>(s) * n;
      row[s] = 0;
      std::size_t head = 0, tail = 0;
      queue[tail++] = s;
      while (head < tail) {
        Vertex v = queue[head++];
        for (auto w : c.neighbors(v))
          if (row[w] == 0xffff) {
            row[w] = static_cast<std::uint16_t>(row[v] + 1);
            queue[tail++] = w;
          }
      }
    }
  }
  auto d = [&](std::size_t a, std::size_t b) { return c.dist_[a * n + b]; };

  // Walls from the Djokovic-Winkler relation: edges (u,v), (x,y) are related
  // when d(u,x) + d(v,y) != d(u,y) + d(v,x). Each class must be exactly the
  // cut between the two sides, and every member edge must induce the same cut.
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  c.edge_wall_.assign(c.edges_.size(), kUnassigned);
  std::vector<char> on_one(n);
  for (std::size_t ei = 0; ei < c.edges_.size(); ++ei) {
    if (c.edge_wall_[ei] != kUnassigned) continue;
    auto [a, b] = c.edges_[ei];
    if (d(0, b) < d(0, a)) std::swap(a, b);  // vertex 0 ends up on side zero
    Wall wall;
    wall.id = c.walls_.size();
    for (Vertex x = 0; x < n; ++x) {
      on_one[x] = d(x, b) < d(x, a);
      (on_one[x] ? wall.side_one : wall.side_zero).push_back(x);
    }
    for (std::size_t fi = 0; fi < c.edges_.size(); ++fi) {
      auto [x, y] = c.edges_[fi];
      if (on_one[x] == on_one[y]) {
        if (fi == ei) throw Error(ErrorCode::Internal, "edge not cut by its own wall");
        continue;
      }
      if (c.edge_wall_[fi] != kUnassigned)
        throw_not_median(n, c.dist_, "edge classes overlap (graph is not a partial cube)");
      if (d(a, x) + d(b, y) == d(a, y) + d(b, x))
        throw_not_median(n, c.dist_, "cut edge not Djokovic-Winkler related");
      if (on_one[x]) std::swap(x, y);
      for (Vertex z = 0; z < n; ++z)
        if ((d(z, y) < d(z, x)) != static_cast<bool>(on_one[z]))
          throw_not_median(n, c.dist_, "Djokovic-Winkler relation is not transitive");
      c.edge_wall_[fi] = wall.id;
      wall.dual_edges.push_back(fi);
    }
    c.walls_.push_back(std::move(wall));
  }

  // Signatures, then the exact identity d(x,y) = #separating walls.
  const std::size_t wcount = c.walls_.size();
  c.sig_words_ = std::max<std::size_t>(1, bit_words(wcount));
  c.sigs_.assign(n * c.sig_words_, 0);
  for (const auto& wall : c.walls_)
    for (auto v : wall.side_one)
      set_bit({c.sigs_.data() + static_cast<std::size_t>(v) * c.sig_words_, c.sig_words_},
              wall.id);
  for (Vertex x = 0; x < n; ++x) {
    auto sx = c.signature(x);
    for (Vertex y = x + 1; y < n; ++y) {
      auto sy = c.signature(y);
      std::uint32_t sep = 0;
      for (std::size_t k = 0; k < c.sig_words_; ++k) sep += std::popcount(sx[k] ^ sy[k]);
      if (sep != d(x, y))
        throw_not_median(n, c.dist_, "distance differs from separating-wall count");
    }
  }
  c.index_signatures();

  if (n <= 64) {
    for (const auto& wall : c.walls_)
      for (bool s : {false, true})
        if (!side_is_convex(c, wall.id, s))
          throw_not_median(n, c.dist_, "wall side is not convex");
  }

  // Median property: the majority signature of every triple must be a vertex.
  std::vector<std::uint64_t> maj(c.sig_words_);
  auto check_triple = [&](Vertex x, Vertex y, Vertex z) {
    auto sx = c.signature(x), sy = c.signature(y), sz = c.signature(z);
    for (std::size_t k = 0; k < c.sig_words_; ++k)
      maj[k] = (sx[k] & sy[k]) | (sy[k] & sz[k]) | (sx[k] & sz[k]);
    if (!c.lookup(maj))
      throw Error(ErrorCode::NotMedian,
                  "triple (" + std::to_string(x) + "," + std::to_string(y) + "," +
                      std::to_string(z) + ") has no median",
                  {}, {x, y, z});
  };
  const std::uint64_t nn = n;
  const std::uint64_t triples = nn < 3 ? 0 : nn * (nn - 1) * (nn - 2) / 6;
  if (triples <= options.exhaustive_triple_limit) {
    c.median_check_ = MedianCheck::Exhaustive;
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = x + 1; y < n; ++y)
        for (Vertex z = y + 1; z < n; ++z) check_triple(x, y, z);
    c.triples_checked_ = triples;
  } else {
    c.median_check_ = MedianCheck::Sampled;
    Rng rng(options.sample_seed);
    for (std::size_t i = 0; i < options.sampled_triples; ++i) {
      auto x = static_cast<Vertex>(uniform_index(rng, n));
      auto y = static_cast<Vertex>(uniform_index(rng, n));
      auto z = static_cast<Vertex>(uniform_index(rng, n));
      check_triple(x, y, z);
    }
    c.triples_checked_ = options.sampled_triples;
  }
  return c;
}

void FiniteMedianComplex::index_signatures() {
  std::size_t cap = 16;
  while (cap < 2 * n_) cap <<= 1;
  sig_table_.assign(cap, kNoVertex);
  for (Vertex v = 0; v < n_; ++v) {
    std::size_t slot = hash_words(signature(v)) & (cap - 1);
    while (sig_table_[slot] != kNoVertex) slot = (slot + 1) & (cap - 1);
    sig_table_[slot] = v;
  }
}

std::optional<Vertex> FiniteMedianComplex::lookup(std::span<const std::uint64_t> sig) const {
  const std::size_t mask = sig_table_.size() - 1;
  std::size_t slot = hash_words(sig) & mask;
  while (sig_table_[slot] != kNoVertex) {
    auto cand = signature(sig_table_[slot]);
    if (std::equal(cand.begin(), cand.end(), sig.begin())) return sig_table_[slot];
    slot = (slot + 1) & mask;
  }
  return std::nullopt;
}

std::optional<Vertex> FiniteMedianComplex::vertex_with_signature(
    std::span<const std::uint64_t> sig) const {
  if (sig.size() != sig_words_) return std::nullopt;
  return lookup(sig);
}

std::span<const Vertex> FiniteMedianComplex::neighbors(Vertex v) const {
  return {adj_.data() + adj_offsets_[v], adj_.data() + adj_offsets_[v + 1]};
}

const Wall& FiniteMedianComplex::wall(std::size_t id) const {
  if (id >= walls_.size()) throw Error(ErrorCode::WallOutOfRange, "wall " + std::to_string(id));
  return walls_[id];
}

std::optional<std::size_t> FiniteMedianComplex::wall_of_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  for (auto i = adj_offsets_[u]; i < adj_offsets_[u + 1]; ++i)
    if (adj_[i] == v) return edge_wall_[adj_edge_[i]];
  return std::nullopt;
}

void FiniteMedianComplex::check_vertex(Vertex v) const {
  if (v >= n_)
    throw Error(ErrorCode::VertexOutOfRange,
                "vertex " + std::to_string(v) + " not in [0," + std::to_string(n_) + ")");
}

std::uint32_t FiniteMedianComplex::distance(Vertex x, Vertex y) const {
  check_vertex(x);
  check_vertex(y);
  return dist_[static_cast<std::size_t>(x) * n_ + y];
}

bool FiniteMedianComplex::side(std::size_t wall_id, Vertex v) const {
  if (wall_id >= walls_.size())
    throw Error(ErrorCode::WallOutOfRange, "wall " + std::to_string(wall_id));
  check_vertex(v);
  return test_bit(signature(v), wall_id);
}

std::span<const std::uint64_t> FiniteMedianComplex::signature(Vertex v) const {
  return {sigs_.data() + static_cast<std::size_t>(v) * sig_words_, sig_words_};
}

// ---------------------------------------------------------------------------

Vertex median(const FiniteMedianComplex& c, Vertex x, Vertex y, Vertex z) {
  c.check_vertex(x);
  c.check_vertex(y);
  c.check_vertex(z);
  if (x == y || x == z) return x;
  if (y == z) return y;
  const std::size_t words = c.signature_words();
  std::uint64_t small[4];
  std::vector<std::uint64_t> big;
  std::uint64_t* maj = small;
  if (words > 4) {
    big.resize(words);
    maj = big.data();
  }
  auto sx = c.signature(x), sy = c.signature(y), sz = c.signature(z);
  for (std::size_t k = 0; k < words; ++k)
    maj[k] = (sx[k] & sy[k]) | (sy[k] & sz[k]) | (sx[k] & sz[k]);
  auto m = c.vertex_with_signature({maj, words});
  if (!m)
    throw Error(ErrorCode::NotMedian, "majority signature is not a vertex", {}, {x, y, z});
  return *m;
}

Vertex median_by_intervals(const FiniteMedianComplex& c, Vertex x, Vertex y, Vertex z) {
  const auto dxy = c.distance(x, y), dyz = c.distance(y, z), dxz = c.distance(x, z);
  Vertex found = kNoVertex;
  for (Vertex m = 0; m < c.vertex_count(); ++m) {
    const auto dxm = c.distance(x, m), dym = c.distance(y, m), dzm = c.distance(z, m);
    if (dxm + dym == dxy && dym + dzm == dyz && dxm + dzm == dxz) {
      if (found != kNoVertex)
        throw Error(ErrorCode::NotMedian, "two medians", {}, {x, y, z});
      found = m;
    }
  }
  if (found == kNoVertex) throw Error(ErrorCode::NotMedian, "no median", {}, {x, y, z});
  return found;
}

VertexSet interval(const FiniteMedianComplex& c, Vertex x, Vertex y) {
  const auto dxy = c.distance(x, y);
  VertexSet out;
  for (Vertex w = 0; w < c.vertex_count(); ++w)
    if (c.distance(x, w) + c.distance(w, y) == dxy) out.push_back(w);
#ifndef NDEBUG
  assert(out == interval_by_halfspaces(c, x, y));
#endif
  return out;
}

VertexSet interval_by_halfspaces(const FiniteMedianComplex& c, Vertex x, Vertex y) {
  c.check_vertex(x);
  c.check_vertex(y);
  auto sx = c.signature(x), sy = c.signature(y);
  VertexSet out;
  for (Vertex w = 0; w < c.vertex_count(); ++w) {
    auto sw = c.signature(w);
    bool inside = true;
    for (std::size_t k = 0; k < sx.size() && inside; ++k)
      inside = ((sw[k] ^ sx[k]) & ~(sx[k] ^ sy[k])) == 0;
    if (inside) out.push_back(w);
  }
  return out;
}

VertexSet convex_hull(const FiniteMedianComplex& c, std::span<const Vertex> s) {
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "hull of an empty set");
  for (auto v : s) c.check_vertex(v);
  auto s0 = c.signature(s.front());
  std::vector<std::uint64_t> agree(s0.size(), ~std::uint64_t{0});
  for (auto v : s) {
    auto sv = c.signature(v);
    for (std::size_t k = 0; k < agree.size(); ++k) agree[k] &= ~(sv[k] ^ s0[k]);
  }
  VertexSet out;
  for (Vertex w = 0; w < c.vertex_count(); ++w) {
    auto sw = c.signature(w);
    bool inside = true;
    for (std::size_t k = 0; k < agree.size() && inside; ++k)
      inside = ((sw[k] ^ s0[k]) & agree[k]) == 0;
    if (inside) out.push_back(w);
  }
  return out;
}

std::uint32_t gromov_product(const FiniteMedianComplex& c, Vertex x, Vertex y, Vertex o) {
  return c.distance(o, median(c, x, y, o));
}

std::int64_t horofunction(const FiniteMedianComplex& c, Vertex x, Vertex o, Vertex a) {
  return static_cast<std::int64_t>(c.distance(o, a)) -
         2 * static_cast<std::int64_t>(gromov_product(c, a, x, o));
}

std::vector<std::size_t> separating_walls(const FiniteMedianComplex& c, Vertex x, Vertex y) {
  c.check_vertex(x);
  c.check_vertex(y);
  auto sx = c.signature(x), sy = c.signature(y);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < sx.size(); ++k) {
    std::uint64_t diff = sx[k] ^ sy[k];
    while (diff) {
      out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(diff)));
      diff &= diff - 1;
    }
  }
  return out;
}

bool side_is_convex(const FiniteMedianComplex& c, std::size_t wall_id, bool s) {
  const auto& w = c.wall(wall_id);
  const auto& in = s ? w.side_one : w.side_zero;
  const auto& out = s ? w.side_zero : w.side_one;
  for (std::size_t i = 0; i < in.size(); ++i)
    for (std::size_t j = i + 1; j < in.size(); ++j) {
      const auto dab = c.distance(in[i], in[j]);
      for (auto x : out)
        if (c.distance(in[i], x) + c.distance(x, in[j]) == dab) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

FiniteMedianComplex complex_from_json(const nlohmann::json& j, const BuildOptions& options) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "complex must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "vertices" && it.key() != "edges" && it.key() != "walls" &&
        it.key() != "labels")
      throw Error(ErrorCode::SchemaViolation, "unknown key '" + it.key() + "'", it.key());
  if (!j.contains("vertices") || !j["vertices"].is_number_unsigned())
    throw Error(ErrorCode::SchemaViolation, "'vertices' must be a natural number", "vertices");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw Error(ErrorCode::SchemaViolation, "'edges' must be an array", "edges");
  const auto n = j["vertices"].get<std::size_t>();
  std::unordered_map<std::string, Vertex> label_index;
  if (j.contains("labels")) {
    const auto& labels = j["labels"];
    if (!labels.is_array() || labels.size() != n)
      throw Error(ErrorCode::SchemaViolation, "'labels' must list one label per vertex", "labels");
    for (std::size_t i = 0; i < n; ++i) {
      auto name = labels[i].is_string() ? labels[i].get<std::string>() : labels[i].dump();
      if (!label_index.emplace(name, static_cast<Vertex>(i)).second)
        throw Error(ErrorCode::SchemaViolation, "duplicate label '" + name + "'", "labels");
    }
  }
  auto endpoint = [&](const nlohmann::json& v) -> Vertex {
    if (v.is_number_unsigned()) return v.get<Vertex>();
    if (v.is_string()) {
      auto it = label_index.find(v.get<std::string>());
      if (it == label_index.end())
        throw Error(ErrorCode::SchemaViolation, "unknown vertex label " + v.dump(), "edges");
      return it->second;
    }
    throw Error(ErrorCode::SchemaViolation, "bad edge endpoint " + v.dump(), "edges");
  };
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2)
      throw Error(ErrorCode::SchemaViolation, "edge must be a pair", "edges");
    edges.push_back({endpoint(e[0]), endpoint(e[1])});
  }
  return FiniteMedianComplex::build(n, edges, options);
}

nlohmann::json complex_to_json(const FiniteMedianComplex& c) {
  nlohmann::json j;
  j["vertices"] = c.vertex_count();
  auto edges = nlohmann::json::array();
  for (auto e : c.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  auto walls = nlohmann::json::array();
  for (const auto& w : c.walls()) walls.push_back(w.side_zero);
  j["walls"] = std::move(walls);
  return j;
}

}  // namespace mw::core
