#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include "medianwalk/wallgeom.hpp"

namespace mw::wallgeom {

namespace {

constexpr std::size_t kMaxWitnesses = 8;

void record(LemmaReport& r, std::vector<std::int64_t> witness) {
  ++r.violations;
  if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back(std::move(witness));
}

// Largest clique of the graph given by `adj` bitmasks (at most 64 nodes).
std::size_t max_clique(const std::vector<std::uint64_t>& adj, std::uint64_t candidates) {
  if (!candidates) return 0;
  std::size_t best = 0;
  while (candidates) {
    if (static_cast<std::size_t>(std::popcount(candidates)) <= best) break;
    const int v = std::countr_zero(candidates);
    candidates &= candidates - 1;
    best = std::max(best, 1 + max_clique(adj, candidates & adj[v]));
  }
  return best;
}

// A strongly separated pair among the walls in `mask`.
std::optional<std::pair<std::size_t, std::size_t>> ss_pair_in(const WallGeometry& g,
                                                              std::span<const std::uint64_t> mask) {
  for (std::size_t k = 0; k < mask.size(); ++k) {
    std::uint64_t bits = mask[k];
    while (bits) {
      const std::size_t a = k * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      auto row = g.ss_row(a);
      for (std::size_t i = 0; i < row.size() && i < mask.size(); ++i)
        if (row[i] & mask[i])
          return std::pair{a, i * 64 + static_cast<std::size_t>(std::countr_zero(row[i] & mask[i]))};
    }
  }
  return std::nullopt;
}

}  // namespace

nlohmann::json LemmaReport::to_json() const {
  return {{"lemma", lemma},
          {"complex_hash", complex_hash},
          {"cases_checked", cases_checked},
          {"violations", violations},
          {"witnesses", witnesses}};
}

// ---- strongly separated subsets ---------------------------------------------

SSSet max_ss_set(const WallGeometry& g, Vertex x, Vertex y, const SSOptions& options) {
  const auto& c = g.complex();
  auto walls = core::separating_walls(c, x, y);
  SSSet out;
  out.separating = walls.size();
  if (walls.empty()) return out;

  // Orient every separating wall towards y. Parallel ones are then nested, and
  // the larger half-space comes first.
  std::vector<std::size_t> size(walls.size());
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto& w = c.wall(walls[i]);
    size[i] = c.side(walls[i], y) ? w.side_one.size() : w.side_zero.size();
  }
  std::vector<std::size_t> order(walls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return size[a] > size[b]; });
  std::vector<std::size_t> sorted(walls.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = walls[order[i]];

  const std::size_t k = sorted.size();
  std::vector<std::size_t> best(k, 1), prev(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (best[i] + 1 > best[j] && g.strongly_separated(sorted[i], sorted[j])) {
        best[j] = best[i] + 1;
        prev[j] = i;
      }
  std::size_t end = static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
  out.size = best[end];
  for (std::size_t i = end; i != k; i = prev[i]) out.chain.push_back(sorted[i]);
  std::reverse(out.chain.begin(), out.chain.end());

  if (k <= std::min<std::size_t>(options.clique_check_limit, 64)) {
    std::vector<std::uint64_t> adj(k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j && g.strongly_separated(sorted[i], sorted[j])) adj[i] |= 1ULL << j;
    const auto clique = max_clique(adj, k == 64 ? ~0ULL : (1ULL << k) - 1);
    out.clique_checked = true;
    if (clique != out.size) {
      out.disagreement = true;
      out.size = clique;
    }
  }
  return out;
}

std::optional<std::vector<std::size_t>> find_ss_transitivity_failure(const WallGeometry& g) {
  const std::size_t w = g.wall_count();
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b) {
      if (a == b || !g.strongly_separated(a, b)) continue;
      for (std::size_t e = 0; e < w; ++e) {
        if (e == a || e == b || !g.strongly_separated(b, e) || g.strongly_separated(a, e))
          continue;
        // Need some orientation with h_a ⊃ h_b ⊃ h_e.
        for (int oa = 0; oa < 2; ++oa)
          for (int ob = 0; ob < 2; ++ob)
            for (int oe = 0; oe < 2; ++oe)
              if (g.subset({b, ob != 0}, {a, oa != 0}) && g.subset({e, oe != 0}, {b, ob != 0}))
                return std::vector<std::size_t>{a, b, e};
      }
    }
  return std::nullopt;
}

// ---- Remark: contact distance >= 3 forces strong separation ---------------

RemarkSSResult verify_remark_ss(const WallGeometry& g, std::size_t max_converse) {
  RemarkSSResult out;
  out.report.lemma = "remark_ss";
  out.report.complex_hash = g.complex().hash();
  const auto& cx = g.contact();
  for (std::size_t a = 0; a < g.wall_count(); ++a)
    for (std::size_t b = a + 1; b < g.wall_count(); ++b) {
      ++out.pairs_checked;
      const auto d = cx.distance(a, b);
      const bool ss = g.strongly_separated(a, b);
      if (d >= 3 && !ss) {
        if (!out.counterexample) out.counterexample = std::pair{a, b};
        record(out.report, {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b), d});
      } else if (d <= 2 && ss && out.converse.size() < max_converse) {
        out.converse.emplace_back(a, b);
      }
    }
  out.report.cases_checked = out.pairs_checked;
  return out;
}

// ---- projection lemma ------------------------------------------------------

std::uint32_t projection_distance(const WallGeometry& g, Vertex x, Vertex y) {
  const auto px = g.adjacent_walls(x), py = g.adjacent_walls(y);
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (auto a : px)
    for (auto b : py) best = std::min(best, g.contact().distance(a, b));
  if (px.empty() || py.empty()) return 0;  // single-vertex complex
  return best;
}

LemmaReport verify_projection_lemma(const WallGeometry& g, std::size_t trials, std::uint32_t A,
                                    std::uint64_t seed) {
  if (A < 3) throw Error(ErrorCode::InvalidArgument, "projection lemma needs A >= 3");
  const auto& c = g.complex();
  LemmaReport r;
  r.lemma = "projection";
  r.complex_hash = c.hash();
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = static_cast<Vertex>(uniform_index(rng, c.vertex_count()));
    const auto y = t == 0 ? x : static_cast<Vertex>(uniform_index(rng, c.vertex_count()));
    ++r.cases_checked;
    const auto dcx = projection_distance(g, x, y);
    const auto d = c.distance(x, y);
    if (dcx > d) {
      record(r, {x, y, dcx, d});
      continue;
    }
    if (dcx >= A) {
      const auto ss = max_ss_set(g, x, y);
      if (ss.size < A / 3) record(r, {x, y, dcx, d, static_cast<std::int64_t>(ss.size)});
    }
  }
  return r;
}

// ---- hierarchy paths -------------------------------------------------------

HierarchyPath hierarchy_path_search(const WallGeometry& g, Vertex x, Vertex y) {
  const auto& c = g.complex();
  c.check_vertex(x);
  c.check_vertex(y);
  HierarchyPath out;
  if (x == y) {
    out.geodesic = {x};
    return out;
  }
  const auto& cx = g.contact();

  // States are (v, h) with v in I(x,y) and h a wall adjacent to v. Moving one
  // step towards y inside the carrier costs 0; switching carriers costs 1.
  const auto verts = core::interval(c, x, y);
  std::vector<std::size_t> slot(c.vertex_count(), 0);
  std::vector<std::vector<std::size_t>> walls_at(verts.size());
  std::vector<std::size_t> offset(verts.size() + 1, 0);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    slot[verts[i]] = i;
    walls_at[i] = g.adjacent_walls(verts[i]);
    offset[i + 1] = offset[i] + walls_at[i].size();
  }
  auto state_of = [&](std::size_t vi, std::size_t wall) -> std::size_t {
    const auto& ws = walls_at[vi];
    auto it = std::lower_bound(ws.begin(), ws.end(), wall);
    if (it == ws.end() || *it != wall) return std::numeric_limits<std::size_t>::max();
    return offset[vi] + static_cast<std::size_t>(it - ws.begin());
  };
  const std::size_t states = offset.back();
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  const std::size_t none = std::numeric_limits<std::size_t>::max();

  const std::size_t xi = slot[x], yi = slot[y];
  for (auto h0 : walls_at[xi]) {
    std::vector<std::uint32_t> cost(states, kInf);
    std::vector<std::size_t> parent(states, none);
    std::deque<std::size_t> dq;
    const auto s0 = state_of(xi, h0);
    cost[s0] = 0;
    dq.push_back(s0);
    std::vector<std::size_t> state_vertex(states), state_wall(states);
    for (std::size_t vi = 0; vi < verts.size(); ++vi)
      for (std::size_t k = 0; k < walls_at[vi].size(); ++k) {
        state_vertex[offset[vi] + k] = vi;
        state_wall[offset[vi] + k] = walls_at[vi][k];
      }
    std::vector<char> done(states, 0);
    while (!dq.empty()) {
      const auto s = dq.front();
      dq.pop_front();
      if (done[s]) continue;
      done[s] = 1;
      const auto vi = state_vertex[s];
      const auto h = state_wall[s];
      const Vertex v = verts[vi];
      for (auto u : c.neighbors(v)) {
        if (c.distance(u, y) + 1 != c.distance(v, y) || c.distance(x, u) != c.distance(x, v) + 1)
          continue;
        const auto t = state_of(slot[u], h);
        if (t != none && cost[s] < cost[t]) {
          cost[t] = cost[s];
          parent[t] = s;
          dq.push_front(t);
        }
      }
      for (std::size_t k = 0; k < walls_at[vi].size(); ++k) {
        const auto t = offset[vi] + k;
        if (walls_at[vi][k] == h || !cx.adjacent(h, walls_at[vi][k])) continue;
        if (cost[s] + 1 < cost[t]) {
          cost[t] = cost[s] + 1;
          parent[t] = s;
          dq.push_back(t);
        }
      }
    }
    for (std::size_t k = 0; k < walls_at[yi].size(); ++k) {
      const auto t = offset[yi] + k;
      if (cost[t] == kInf || cost[t] != cx.distance(h0, walls_at[yi][k])) continue;
      std::vector<std::size_t> trail;
      for (auto s = t; s != none; s = parent[s]) trail.push_back(s);
      std::reverse(trail.begin(), trail.end());
      out.walls.push_back(state_wall[trail[0]]);
      out.segment_starts.push_back(0);
      out.geodesic.push_back(verts[state_vertex[trail[0]]]);
      for (std::size_t i = 1; i < trail.size(); ++i) {
        if (state_vertex[trail[i]] != state_vertex[trail[i - 1]]) {
          out.geodesic.push_back(verts[state_vertex[trail[i]]]);
        } else {
          out.walls.push_back(state_wall[trail[i]]);
          out.segment_starts.push_back(out.geodesic.size() - 1);
        }
      }
      return out;
    }
  }
  throw Error(ErrorCode::NotFound, "no hierarchy path between " + std::to_string(x) + " and " +
                                       std::to_string(y));
}

std::string check_hierarchy_path(const WallGeometry& g, Vertex x, Vertex y,
                                 const HierarchyPath& p) {
  const auto& c = g.complex();
  const auto& geo = p.geodesic;
  if (geo.empty() || geo.front() != x || geo.back() != y) return "path endpoints";
  if (geo.size() != c.distance(x, y) + 1) return "path is not geodesic";
  for (std::size_t i = 1; i < geo.size(); ++i)
    if (!c.wall_of_edge(geo[i - 1], geo[i])) return "path has a non-edge step";
  if (x == y) return p.walls.empty() ? "" : "walls for a trivial path";
  if (p.walls.empty() || p.walls.size() != p.segment_starts.size()) return "segment bookkeeping";
  if (p.segment_starts[0] != 0) return "first segment must start at x";
  for (std::size_t i = 0; i < p.walls.size(); ++i) {
    const auto begin = p.segment_starts[i];
    const auto end = i + 1 < p.walls.size() ? p.segment_starts[i + 1] : geo.size() - 1;
    if (end < begin) return "segments out of order";
    const auto carrier = g.carrier(p.walls[i]);
    for (auto k = begin; k <= end; ++k)
      if (!std::binary_search(carrier.begin(), carrier.end(), geo[k]))
        return "segment leaves its carrier";
    if (i > 0 && !g.contact().adjacent(p.walls[i - 1], p.walls[i]))
      return "consecutive walls not adjacent in the contact graph";
  }
  if (p.walls.size() - 1 != g.contact().distance(p.walls.front(), p.walls.back()))
    return "wall sequence is not a contact geodesic";
  return "";
}

// ---- chains ----------------------------------------------------------------

LemmaReport verify_chain_gromov(const WallGeometry& g, std::span<const std::size_t> chain) {
  const auto& c = g.complex();
  if (chain.empty()) throw Error(ErrorCode::ChainInvalid, "empty chain");
  for (auto w : chain) g.check_wall(w);
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = i + 1; j < chain.size(); ++j)
      if (chain[i] == chain[j] || !g.strongly_separated(chain[i], chain[j]))
        throw Error(ErrorCode::ChainInvalid,
                    "walls " + std::to_string(chain[i]) + " and " + std::to_string(chain[j]) +
                        " are not strongly separated",
                    {}, {static_cast<std::int64_t>(chain[i]), static_cast<std::int64_t>(chain[j])});
  // Each interior wall must separate its neighbours; for pairwise parallel walls
  // that makes the whole list a nested chain.
  auto anchor = [&](std::size_t w) { return c.edges()[c.wall(w).dual_edges.front()].u; };
  for (std::size_t k = 1; k + 1 < chain.size(); ++k)
    if (c.side(chain[k], anchor(chain[k - 1])) == c.side(chain[k], anchor(chain[k + 1])))
      throw Error(ErrorCode::ChainInvalid,
                  "wall " + std::to_string(chain[k]) + " does not lie between its neighbours", {},
                  {static_cast<std::int64_t>(chain[k])});

  LemmaReport r;
  r.lemma = "chain_gromov";
  r.complex_hash = c.hash();
  const auto& cx = g.contact();
  const std::size_t N = chain.size() - 1;
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t m = 0; m <= N; ++m) {
      ++r.cases_checked;
      const auto lhs = cx.gromov_doubled(chain[n], chain[m], chain[0]);
      const auto rhs = 2 * (static_cast<std::int64_t>(std::min(n, m)) - 3);
      if (lhs < rhs)
        record(r, {0, static_cast<std::int64_t>(n), static_cast<std::int64_t>(m), lhs});
    }
  for (std::size_t k = 1; k < N; ++k) {
    ++r.cases_checked;
    const auto v = cx.gromov_doubled(chain[0], chain[N], chain[k]);
    if (v > 6) record(r, {1, static_cast<std::int64_t>(k), v});
  }
  return r;
}

// ---- box lemma -------------------------------------------------------------

namespace {

// Walls with z, m2 on one side and o, m3 on the other.
void hypothesis_mask(const FiniteMedianComplex& c, Vertex o, Vertex z, Vertex m2, Vertex m3,
                     std::vector<std::uint64_t>& mask) {
  auto so = c.signature(o), sz = c.signature(z), s2 = c.signature(m2), s3 = c.signature(m3);
  mask.resize(so.size());
  for (std::size_t k = 0; k < so.size(); ++k)
    mask[k] = ~(sz[k] ^ s2[k]) & ~(so[k] ^ s3[k]) & (sz[k] ^ so[k]);
}

}  // namespace

BoxInstance box_instance(const WallGeometry& g, Vertex o, Vertex x, Vertex y, Vertex z) {
  const auto& c = g.complex();
  BoxInstance b;
  b.m1 = core::median(c, o, z, y);
  b.m2 = core::median(c, o, z, x);
  b.m3 = core::median(c, o, b.m1, b.m2);
  b.m4 = core::median(c, o, x, y);
  std::vector<std::uint64_t> mask;
  hypothesis_mask(c, o, z, b.m2, b.m3, mask);
  if (auto pair = ss_pair_in(g, mask)) {
    b.hypothesis = true;
    Halfspace ha{pair->first, c.side(pair->first, z)};
    Halfspace hb{pair->second, c.side(pair->second, z)};
    if (g.subset(ha, hb)) {
      b.h1 = ha;
      b.h2 = hb;
    } else {
      b.h1 = hb;
      b.h2 = ha;
    }
  }
  return b;
}

BoxResult verify_box_lemma(const WallGeometry& g, BoxMode mode, std::size_t samples,
                           std::uint64_t seed) {
  const auto& c = g.complex();
  const std::size_t n = c.vertex_count();
  if (mode == BoxMode::Auto) mode = n <= 64 ? BoxMode::Exhaustive : BoxMode::Sampled;
  BoxResult out;
  out.report.lemma = "box";
  out.report.complex_hash = c.hash();
  auto fail = [&](Vertex o, Vertex x, Vertex y, Vertex z) {
    if (!out.counterexample) out.counterexample = std::vector<Vertex>{o, x, y, z};
    record(out.report, {o, x, y, z});
  };

  if (mode == BoxMode::Sampled) {
    Rng rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
      Vertex q[4];
      for (auto& v : q) v = static_cast<Vertex>(uniform_index(rng, n));
      const auto b = box_instance(g, q[0], q[1], q[2], q[3]);
      ++out.report.cases_checked;
      if (!b.hypothesis) continue;
      ++out.hypothesis_cases;
      if (!b.conclusion()) fail(q[0], q[1], q[2], q[3]);
    }
    return out;
  }

  if (n > 256)
    throw Error(ErrorCode::SizeBudgetExceeded, "exhaustive box check is limited to 256 vertices");
  std::vector<Vertex> table(n * n * n);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b)
      for (Vertex d = 0; d < n; ++d) table[(a * n + b) * n + d] = core::median(c, a, b, d);
  auto med = [&](Vertex a, Vertex b, Vertex d) { return table[(a * n + b) * n + d]; };

  std::vector<std::uint64_t> mask;
  for (Vertex o = 0; o < n; ++o)
    for (Vertex z = 0; z < n; ++z)
      for (Vertex x = 0; x < n; ++x) {
        const Vertex m2 = med(o, z, x);
        for (Vertex y = 0; y < n; ++y) {
          ++out.report.cases_checked;
          const Vertex m1 = med(o, z, y), m3 = med(o, m1, m2), m4 = med(o, x, y);
          hypothesis_mask(c, o, z, m2, m3, mask);
          std::size_t bits = 0;
          for (auto w : mask) bits += std::popcount(w);
          if (bits < 2 || !ss_pair_in(g, mask)) continue;
          ++out.hypothesis_cases;
          if (m1 != m3 || m3 != m4) fail(o, x, y, z);
        }
      }
  return out;
}

}  // namespace mw::wallgeom
