#include <algorithm>
#include <deque>
#include <limits>

#include "medianwalk/wallgeom.hpp"

namespace mw::wallgeom {

namespace {

constexpr std::uint16_t kUnreached = std::numeric_limits<std::uint16_t>::max();

bool any_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

struct Quadrants {
  bool q11 = false, q10 = false, q01 = false;  // q00 always holds (vertex 0)
};

Quadrants quadrants(std::span<const std::uint64_t> one_a, std::span<const std::uint64_t> one_b,
                    std::size_t n) {
  Quadrants q;
  for (std::size_t i = 0; i < one_a.size(); ++i) {
    const std::uint64_t valid = (i + 1) * 64 <= n ? ~0ULL : (1ULL << (n % 64)) - 1;
    q.q11 |= (one_a[i] & one_b[i]) != 0;
    q.q10 |= (one_a[i] & ~one_b[i] & valid) != 0;
    q.q01 |= (~one_a[i] & one_b[i] & valid) != 0;
  }
  return q;
}

std::size_t hs_index(const Halfspace& h) { return 2 * h.wall_id + (h.orientation ? 1 : 0); }

}  // namespace

const char* relation_name(WallRelation r) {
  switch (r) {
    case WallRelation::Equal: return "Equal";
    case WallRelation::Transverse: return "Transverse";
    case WallRelation::TightlyNested: return "TightlyNested";
    case WallRelation::NestedLoose: return "NestedLoose";
  }
  return "?";
}

// ---- contact graph ----------------------------------------------------------

ContactGraph::ContactGraph(std::vector<std::vector<std::uint32_t>> adjacency)
    : adj_(std::move(adjacency)) {
  const std::size_t n = adj_.size();
  if (n >= kUnreached)
    throw Error(ErrorCode::SizeBudgetExceeded, "contact graph too large for the distance table");
  for (auto& row : adj_) std::sort(row.begin(), row.end());
  dist_.assign(n * n, kUnreached);
  std::vector<std::uint32_t> queue(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto* d = dist_.data() + s * n;
    std::size_t head = 0, tail = 0;
    d[s] = 0;
    queue[tail++] = static_cast<std::uint32_t>(s);
    while (head < tail) {
      auto v = queue[head++];
      for (auto w : adj_[v])
        if (d[w] == kUnreached) {
          d[w] = static_cast<std::uint16_t>(d[v] + 1);
          queue[tail++] = w;
        }
    }
    if (tail != n)
      throw Error(ErrorCode::IntegrityFailure, "contact graph is disconnected");
  }
}

void ContactGraph::check(std::size_t w) const {
  if (w >= adj_.size()) throw Error(ErrorCode::WallOutOfRange, "wall " + std::to_string(w));
}

bool ContactGraph::adjacent(std::size_t a, std::size_t b) const { return distance(a, b) == 1; }

std::uint32_t ContactGraph::distance(std::size_t a, std::size_t b) const {
  check(a);
  check(b);
  return dist_[a * adj_.size() + b];
}

std::int64_t ContactGraph::gromov_doubled(std::size_t a, std::size_t b, std::size_t base) const {
  return static_cast<std::int64_t>(distance(a, base)) + distance(b, base) - distance(a, b);
}

std::uint32_t ContactGraph::diameter() const {
  std::uint32_t best = 0;
  for (auto d : dist_) best = std::max<std::uint32_t>(best, d);
  return best;
}

// ---- pair tables -----------------------------------------------------------

WallGeometry::WallGeometry(const FiniteMedianComplex& c) : c_(&c), w_(c.wall_count()) {
  const std::size_t n = c.vertex_count();
  BitMatrix one(w_, n);
  for (const auto& wall : c.walls())
    for (auto v : wall.side_one) one.set(wall.id, v);

  rel_.assign(w_ * w_, static_cast<std::uint8_t>(WallRelation::Equal));
  sub_ = BitMatrix(2 * w_, 2 * w_);
  BitMatrix sup(2 * w_, 2 * w_);  // transpose of sub_
  trans_ = BitMatrix(w_, w_);
  auto mark_subset = [&](std::size_t h, std::size_t k) {
    sub_.set(h, k);
    sup.set(k, h);
  };
  for (std::size_t a = 0; a < w_; ++a) {
    mark_subset(2 * a, 2 * a);
    mark_subset(2 * a + 1, 2 * a + 1);
    for (std::size_t b = a + 1; b < w_; ++b) {
      const auto q = quadrants(one.row(a), one.row(b), n);
      if (q.q11 && q.q10 && q.q01) {
        trans_.set(a, b);
        trans_.set(b, a);
        continue;
      }
      // Exactly one quadrant is empty; record the two resulting inclusions.
      if (!q.q10) {  // one_a ⊆ one_b, zero_b ⊆ zero_a
        mark_subset(2 * a + 1, 2 * b + 1);
        mark_subset(2 * b, 2 * a);
      } else if (!q.q01) {  // one_b ⊆ one_a
        mark_subset(2 * b + 1, 2 * a + 1);
        mark_subset(2 * a, 2 * b);
      } else {  // one_a ∩ one_b = ∅: one_a ⊆ zero_b, one_b ⊆ zero_a
        mark_subset(2 * a + 1, 2 * b);
        mark_subset(2 * b + 1, 2 * a);
      }
    }
  }

  ss_ = BitMatrix(w_, w_);
  std::vector<std::vector<std::uint32_t>> adjacency(w_);
  for (std::size_t a = 0; a < w_; ++a) {
    for (std::size_t b = a + 1; b < w_; ++b) {
      WallRelation r;
      if (trans_.get(a, b)) {
        r = WallRelation::Transverse;
      } else {
        if (!any_and(trans_.row(a), trans_.row(b))) {
          ss_.set(a, b);
          ss_.set(b, a);
        }
        // Pick the orientation h ⊊ k and count half-spaces ℓ with h ⊆ ℓ ⊆ k.
        std::size_t h = 0, k = 0;
        for (std::size_t oa = 0; oa < 2; ++oa)
          for (std::size_t ob = 0; ob < 2; ++ob)
            if (sub_.get(2 * a + oa, 2 * b + ob)) h = 2 * a + oa, k = 2 * b + ob;
        std::size_t between = 0;
        auto up = sub_.row(h), down = sup.row(k);
        for (std::size_t i = 0; i < up.size(); ++i) between += std::popcount(up[i] & down[i]);
        r = between == 2 ? WallRelation::TightlyNested : WallRelation::NestedLoose;
      }
      rel_[a * w_ + b] = rel_[b * w_ + a] = static_cast<std::uint8_t>(r);
      if (r != WallRelation::NestedLoose) {
        adjacency[a].push_back(static_cast<std::uint32_t>(b));
        adjacency[b].push_back(static_cast<std::uint32_t>(a));
      }
    }
  }
  contact_ = ContactGraph(std::move(adjacency));
}

void WallGeometry::check_wall(std::size_t w) const {
  if (w >= w_) throw Error(ErrorCode::WallOutOfRange, "wall " + std::to_string(w));
}

WallRelation WallGeometry::relation(std::size_t a, std::size_t b) const {
  check_wall(a);
  check_wall(b);
  return static_cast<WallRelation>(rel_[a * w_ + b]);
}

bool WallGeometry::transverse(std::size_t a, std::size_t b) const {
  check_wall(a);
  check_wall(b);
  return trans_.get(a, b);
}

bool WallGeometry::strongly_separated(std::size_t a, std::size_t b) const {
  check_wall(a);
  check_wall(b);
  if (a == b) throw Error(ErrorCode::InvalidArgument, "strong separation needs distinct walls");
  return ss_.get(a, b);
}

bool WallGeometry::subset(const Halfspace& h, const Halfspace& k) const {
  check_wall(h.wall_id);
  check_wall(k.wall_id);
  return sub_.get(hs_index(h), hs_index(k));
}

std::vector<std::size_t> WallGeometry::adjacent_walls(Vertex v) const {
  c_->check_vertex(v);
  std::vector<std::size_t> out;
  for (auto u : c_->neighbors(v)) out.push_back(*c_->wall_of_edge(v, u));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vertex> WallGeometry::carrier(std::size_t w) const {
  check_wall(w);
  std::vector<Vertex> out;
  for (auto e : c_->wall(w).dual_edges) {
    out.push_back(c_->edges()[e].u);
    out.push_back(c_->edges()[e].v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- direct scans ----------------------------------------------------------

namespace {

std::vector<char> side_one_flags(const FiniteMedianComplex& c, std::size_t w) {
  std::vector<char> f(c.vertex_count(), 0);
  for (auto v : c.wall(w).side_one) f[v] = 1;
  return f;
}

bool scan_transverse(const std::vector<char>& a, const std::vector<char>& b) {
  bool q[2][2] = {};
  for (std::size_t v = 0; v < a.size(); ++v) q[a[v] != 0][b[v] != 0] = true;
  return q[0][0] && q[0][1] && q[1][0] && q[1][1];
}

// h ⊆ k for half-spaces given as (flags, side).
bool scan_subset(const std::vector<char>& h, bool hs, const std::vector<char>& k, bool ks) {
  for (std::size_t v = 0; v < h.size(); ++v)
    if ((h[v] != 0) == hs && (k[v] != 0) != ks) return false;
  return true;
}

}  // namespace

WallRelation wall_relation(const FiniteMedianComplex& c, std::size_t a, std::size_t b) {
  c.wall(a);
  c.wall(b);
  if (a == b) return WallRelation::Equal;
  const auto fa = side_one_flags(c, a), fb = side_one_flags(c, b);
  if (scan_transverse(fa, fb)) return WallRelation::Transverse;
  for (int sa = 0; sa < 2; ++sa)
    for (int sb = 0; sb < 2; ++sb) {
      if (!scan_subset(fa, sa, fb, sb)) continue;
      for (std::size_t l = 0; l < c.wall_count(); ++l) {
        if (l == a || l == b) continue;
        const auto fl = side_one_flags(c, l);
        for (int sl = 0; sl < 2; ++sl)
          if (scan_subset(fa, sa, fl, sl) && scan_subset(fl, sl, fb, sb))
            return WallRelation::NestedLoose;
      }
      return WallRelation::TightlyNested;
    }
  throw Error(ErrorCode::IntegrityFailure, "parallel walls without a nesting");
}

bool strongly_separated(const FiniteMedianComplex& c, std::size_t a, std::size_t b) {
  c.wall(a);
  c.wall(b);
  if (a == b) throw Error(ErrorCode::InvalidArgument, "strong separation needs distinct walls");
  const auto fa = side_one_flags(c, a), fb = side_one_flags(c, b);
  if (scan_transverse(fa, fb)) return false;
  for (std::size_t l = 0; l < c.wall_count(); ++l) {
    if (l == a || l == b) continue;
    const auto fl = side_one_flags(c, l);
    if (scan_transverse(fa, fl) && scan_transverse(fb, fl)) return false;
  }
  return true;
}

// ---- hyperbolicity ---------------------------------------------------------

DeltaEstimate hyperbolicity_delta(const std::vector<std::vector<std::uint32_t>>& adjacency,
                                  std::uint64_t samples, std::uint64_t seed) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty graph");
  std::vector<std::uint32_t> d(n * n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::uint32_t> q{static_cast<std::uint32_t>(s)};
    d[s * n + s] = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      for (auto w : adjacency[v]) {
        if (w >= n) throw Error(ErrorCode::InvalidArgument, "adjacency index out of range");
        if (d[s * n + w] == std::numeric_limits<std::uint32_t>::max()) {
          d[s * n + w] = d[s * n + v] + 1;
          q.push_back(w);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t)
      if (d[s * n + t] == std::numeric_limits<std::uint32_t>::max())
        throw Error(ErrorCode::Disconnected, "graph is disconnected");
  }
  auto defect = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    std::int64_t s[3] = {std::int64_t{d[a * n + b]} + d[x * n + y],
                         std::int64_t{d[a * n + x]} + d[b * n + y],
                         std::int64_t{d[a * n + y]} + d[b * n + x]};
    std::sort(s, s + 3);
    return s[2] - s[1];
  };

  DeltaEstimate out;
  const double total = n < 4 ? 0.0
                             : static_cast<double>(n) * (n - 1) / 2.0 * (n - 2) / 3.0 * (n - 3) / 4.0;
  if (total <= static_cast<double>(samples)) {
    out.exact = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t x = b + 1; x < n; ++x)
          for (std::size_t y = x + 1; y < n; ++y) {
            out.doubled = std::max(out.doubled, defect(a, b, x, y));
            ++out.quadruples;
          }
    return out;
  }
  Rng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto a = uniform_index(rng, n), b = uniform_index(rng, n), x = uniform_index(rng, n),
         y = uniform_index(rng, n);
    out.doubled = std::max(out.doubled, defect(a, b, x, y));
    ++out.quadruples;
  }
  return out;
}

}  // namespace mw::wallgeom
