#include <algorithm>
#include <unordered_set>

#include "medianwalk/raag.hpp"
#include "medianwalk/wallgeom.hpp"

namespace mw::raag {

namespace {

std::vector<Letter> inverse_word(std::span<const Letter> w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (auto& l : out) l = invert(l);
  return out;
}

// Reduced word of a^-1 b.
std::vector<Letter> quotient(const Element& a, const Element& b) {
  ReducedWord r(a.graph());
  r.append(inverse_word(a.letters()));
  r.append(b.letters());
  return r.letters();
}

Element times(const Element& a, std::span<const Letter> w) {
  ReducedWord r(a.graph());
  r.append(a.letters());
  r.append(w);
  return Element(a.graph(), r.letters());
}

// Positions of the largest prefix ideal whose labels all lie in `mask`.
std::vector<char> left_ideal(const Heap& h, std::uint64_t mask) {
  std::vector<char> in(h.size(), 0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!((mask >> letter_gen(h.letter(j))) & 1)) continue;
    bool ok = true;
    for (auto p : h.preds(j)) ok &= in[p] != 0;
    in[j] = ok;
  }
  return in;
}

}  // namespace

// ---- heap ---------------------------------------------------------------------

Heap::Heap(const DefiningGraph& g, std::span<const Letter> w)
    : w_(w.begin(), w.end()), k_(g.size()), preds_(w.size()), top_(w.size() * g.size(), -1) {
  std::vector<std::int64_t> last(k_, -1);
  for (std::size_t j = 0; j < w_.size(); ++j) {
    const auto s = letter_gen(w_[j]);
    const std::uint64_t dep = g.all() & ~g.link(s);
    auto* tj = top_.data() + j * k_;
    for (std::size_t t = 0; t < k_; ++t)
      if (((dep >> t) & 1) && last[t] >= 0) {
        const auto p = static_cast<std::size_t>(last[t]);
        preds_[j].push_back(static_cast<std::uint32_t>(p));
        const auto* tp = top_.data() + p * k_;
        for (std::size_t u = 0; u < k_; ++u) tj[u] = std::max(tj[u], tp[u]);
      }
    tj[s] = static_cast<std::int32_t>(j);
    last[s] = static_cast<std::int64_t>(j);
  }
}

bool Heap::below(std::size_t i, std::size_t j) const {
  if (i == j) return true;
  if (i > j) return false;
  return top(j, letter_gen(w_[i])) >= static_cast<std::int64_t>(i);
}

std::vector<Piece> pieces(const Element& g) {
  const Heap h(*g.graph(), g.letters());
  std::vector<Piece> out;
  for (std::size_t j = 0; j < h.size(); ++j) {
    std::vector<Letter> down;
    for (std::size_t i = 0; i < j; ++i)
      if (h.below(i, j)) down.push_back(h.letter(i));
    out.push_back({j, letter_gen(h.letter(j)), letter_inverse(h.letter(j)), Element(g.graph(), down)});
  }
  return out;
}

namespace {

Piece piece_at(const Element& g, const Heap& h, std::size_t j) {
  std::vector<Letter> down;
  for (std::size_t i = 0; i < j; ++i)
    if (h.below(i, j)) down.push_back(h.letter(i));
  return {j, letter_gen(h.letter(j)), letter_inverse(h.letter(j)), Element(g.graph(), down)};
}

void check_piece(const Element& g, std::size_t p) {
  if (p >= g.length())
    throw Error(ErrorCode::PieceMismatch,
                "piece " + std::to_string(p) + " out of range for an element of length " +
                    std::to_string(g.length()));
}

}  // namespace

bool transverse_pieces(const Element& g, std::size_t p, std::size_t q) {
  check_piece(g, p);
  check_piece(g, q);
  if (p == q) throw Error(ErrorCode::PieceMismatch, "a piece is not transverse to itself");
  const Heap h(*g.graph(), g.letters());
  return !h.comparable(p, q);
}

// ---- walls ----------------------------------------------------------------------

RaagWall RaagWall::canonical() const {
  const auto& g = *base.graph();
  const Heap h(g, base.letters());
  const std::uint64_t lk = g.link(gen);
  // Largest suffix ideal with labels in lk(gen): a piece belongs when its label
  // does and every later dependent piece belongs.
  std::vector<char> in(h.size(), 0);
  std::vector<std::vector<std::uint32_t>> succ(h.size());
  for (std::size_t j = 0; j < h.size(); ++j)
    for (auto p : h.preds(j)) succ[p].push_back(static_cast<std::uint32_t>(j));
  for (std::size_t j = h.size(); j-- > 0;) {
    if (!((lk >> letter_gen(h.letter(j))) & 1)) continue;
    bool ok = true;
    for (auto s : succ[j]) ok &= in[s] != 0;
    in[j] = ok;
  }
  std::vector<Letter> rest;
  for (std::size_t j = 0; j < h.size(); ++j)
    if (!in[j]) rest.push_back(h.letter(j));
  return {Element(base.graph(), rest), gen};
}

bool operator==(const RaagWall& a, const RaagWall& b) {
  if (a.gen != b.gen) return false;
  check_same_graph(a.base.graph(), b.base.graph());
  const auto q = quotient(a.base, b.base);
  const std::uint64_t lk = a.base.graph()->link(a.gen);
  return std::all_of(q.begin(), q.end(), [&](Letter l) { return (lk >> letter_gen(l)) & 1; });
}

RaagWall piece_wall(const Element&, const Piece& p) {
  if (!p.inverse) return {p.prefix, p.gen};
  const Letter back = make_letter(p.gen, true);
  return {times(p.prefix, std::span<const Letter>(&back, 1)), p.gen};
}

RaagHalfspace piece_halfspace(const Element& g, const Piece& p) {
  return {piece_wall(g, p), !p.inverse};
}

bool in_special_product(const DefiningGraph& g, std::span<const Letter> w, std::uint64_t A,
                        std::uint64_t B) {
  const Heap h(g, w);
  const auto prefix = left_ideal(h, A);
  for (std::size_t j = 0; j < h.size(); ++j)
    if (!prefix[j] && !((B >> letter_gen(h.letter(j))) & 1)) return false;
  return true;
}

bool walls_transverse(const RaagWall& a, const RaagWall& b) {
  check_same_graph(a.base.graph(), b.base.graph());
  const auto& g = *a.base.graph();
  if (a.gen == b.gen || !g.commute(a.gen, b.gen)) return false;
  return in_special_product(g, quotient(a.base, b.base), g.link(a.gen), g.link(b.gen));
}

const char* verdict_name(SSVerdict v) {
  switch (v) {
    case SSVerdict::YesCertified: return "YesCertified";
    case SSVerdict::NoCertified: return "NoCertified";
    case SSVerdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

constexpr std::size_t kBallBudget = 200'000;
constexpr std::size_t kWitnessHullBudget = 5'000;

Element step(const Element& a, std::size_t gen) {
  const Letter l = make_letter(gen, false);
  return times(a, std::span<const Letter>(&l, 1));
}

// Independent check of a transversal inside the finite hull spanned by the three
// walls' edges. nullopt when the hull is over budget.
std::optional<bool> hull_transverse(const RaagWall& w, const RaagWall& a, const RaagWall& b) {
  const std::vector<Element> pts{w.base, step(w.base, w.gen), a.base,
                                 step(a.base, a.gen), b.base, step(b.base, b.gen)};
  try {
    const auto hull = hull_materialize(pts, kWitnessHullBudget);
    const auto hw = hull.wall_of(w), ha = hull.wall_of(a), hb = hull.wall_of(b);
    if (!hw || !ha || !hb) return false;
    return wallgeom::wall_relation(hull.complex, *hw, *ha) == wallgeom::WallRelation::Transverse &&
           wallgeom::wall_relation(hull.complex, *hw, *hb) == wallgeom::WallRelation::Transverse;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) return std::nullopt;
    throw;
  }
}

}  // namespace

SSCertificate ss_walls(const RaagWall& a, const RaagWall& b, std::size_t radius) {
  if (radius == 0) throw Error(ErrorCode::RadiusZero, "search radius must be positive");
  check_same_graph(a.base.graph(), b.base.graph());
  const auto& gp = a.base.graph();
  const auto& g = *gp;
  if (a == b) throw Error(ErrorCode::PieceMismatch, "a wall is not strongly separated from itself");
  if (walls_transverse(a, b)) throw Error(ErrorCode::PieceMismatch, "walls are transverse");

  SSCertificate out;
  out.radius = radius;
  const std::uint64_t C = g.link(a.gen), D = g.link(b.gen), common = C & D;
  if (!common) {
    out.verdict = SSVerdict::YesCertified;
    out.reason = "lk(" + g.name(a.gen) + ") and lk(" + g.name(b.gen) +
                 ") are disjoint, so no wall can cross both";
    return out;
  }

  // A common transversal is W(a x, u) with u in lk(s_a) ∩ lk(s_b), x in <lk s_a>
  // and x^-1 z in <lk u><lk s_b>, where z = a^-1 b.
  const auto z = quotient(a.base, b.base);
  auto try_x = [&](std::span<const Letter> x) -> bool {
    ReducedWord w(gp);
    w.append(inverse_word(x));
    w.append(z);
    for (std::size_t u = 0; u < g.size(); ++u) {
      if (!((common >> u) & 1)) continue;
      if (!in_special_product(g, w.letters(), g.link(u), D)) continue;
      RaagWall witness{times(a.base, x), u};
      if (!walls_transverse(witness, a) || !walls_transverse(witness, b)) continue;
      const auto in_hull = hull_transverse(witness, a, b);
      if (in_hull == false)
        throw Error(ErrorCode::IntegrityFailure, "transversal witness failed the hull check");
      out.verdict = SSVerdict::NoCertified;
      out.witness = witness.canonical();
      out.reason = "wall with label " + g.name(u) + " crosses both" +
                   (in_hull ? " (hull-verified)" : " (hull over budget, algebraic check only)");
      return true;
    }
    return false;
  };

  // Guided candidates: the identity and the largest left <lk s_a>-divisor of z.
  if (try_x({})) return out;
  {
    const Heap hz(g, z);
    const auto in = left_ideal(hz, C);
    std::vector<Letter> x;
    for (std::size_t j = 0; j < hz.size(); ++j)
      if (in[j]) x.push_back(hz.letter(j));
    if (!x.empty() && try_x(x)) return out;
  }

  // Breadth-first ball in <lk s_a>.
  std::unordered_set<std::string> seen{std::string()};
  std::vector<std::vector<Letter>> frontier{{}};
  for (std::size_t r = 1; r <= radius && !frontier.empty(); ++r) {
    std::vector<std::vector<Letter>> next;
    for (const auto& x : frontier)
      for (std::size_t t = 0; t < g.size(); ++t) {
        if (!((C >> t) & 1)) continue;
        for (int sign = 0; sign < 2; ++sign) {
          ReducedWord y(gp);
          y.append(x);
          y.append(make_letter(t, sign != 0));
          if (y.size() != r) continue;
          auto canon = canonical(g, y.letters());
          std::string key(canon.begin(), canon.end());
          if (!seen.insert(key).second) continue;
          if (try_x(canon)) return out;
          next.push_back(std::move(canon));
          if (seen.size() > kBallBudget) {
            out.verdict = SSVerdict::Unknown;
            out.reason = "search ball budget exhausted at radius " + std::to_string(r);
            return out;
          }
        }
      }
    frontier = std::move(next);
  }
  out.verdict = SSVerdict::Unknown;
  out.reason = "no common transversal found within radius " + std::to_string(radius);
  return out;
}

SSCertificate ss_pieces(const Element& g, std::size_t p, std::size_t q, std::size_t radius) {
  if (radius == 0) throw Error(ErrorCode::RadiusZero, "search radius must be positive");
  check_piece(g, p);
  check_piece(g, q);
  if (p == q) throw Error(ErrorCode::PieceMismatch, "pieces must be distinct");
  const Heap h(*g.graph(), g.letters());
  if (!h.comparable(p, q))
    throw Error(ErrorCode::PieceMismatch, "pieces are incomparable (transverse walls)");
  if (p > q) std::swap(p, q);
  return ss_walls(piece_wall(g, piece_at(g, h, p)), piece_wall(g, piece_at(g, h, q)), radius);
}

// ---- certified chains ---------------------------------------------------------------

namespace {

// best[j] = longest chain ending at j with consecutive labels link-disjoint.
// Along one label the best value never decreases upwards, so only the highest
// piece of each label below j matters.
std::vector<std::size_t> chain_lengths(const DefiningGraph& g, const Heap& h,
                                       std::vector<std::int64_t>* parent) {
  const std::size_t n = h.size(), k = g.size();
  std::vector<std::size_t> best(n, 1);
  if (parent) parent->assign(n, -1);
  std::vector<std::int64_t> strict(k);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(strict.begin(), strict.end(), -1);
    for (auto p : h.preds(j))
      for (std::size_t t = 0; t < k; ++t) strict[t] = std::max(strict[t], h.top(p, t));
    const std::uint64_t lj = g.link(letter_gen(h.letter(j)));
    for (std::size_t t = 0; t < k; ++t) {
      if (strict[t] < 0 || (g.link(t) & lj)) continue;
      const auto i = static_cast<std::size_t>(strict[t]);
      if (best[i] + 1 > best[j]) {
        best[j] = best[i] + 1;
        if (parent) (*parent)[j] = static_cast<std::int64_t>(i);
      }
    }
  }
  return best;
}

}  // namespace

std::size_t max_certified_ss_chain(const Element& g) {
  if (g.length() == 0) return 0;
  const Heap h(*g.graph(), g.letters());
  auto best = chain_lengths(*g.graph(), h, nullptr);
  return *std::max_element(best.begin(), best.end());
}

// ---- translation length ------------------------------------------------------------

CyclicReduction cyclic_reduce(const Element& g) {
  const auto& gp = g.graph();
  const auto& dg = *gp;
  std::vector<Letter> w = g.letters();
  std::vector<Letter> conj;
  for (;;) {
    const Heap h(dg, w);
    const std::size_t n = h.size();
    std::vector<char> has_succ(n, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (auto p : h.preds(j)) has_succ[p] = 1;
    std::int64_t lo = -1, hi = -1;
    for (std::size_t i = 0; i < n && lo < 0; ++i) {
      if (!h.preds(i).empty()) continue;
      for (std::size_t j = n; j-- > 0;)
        if (!has_succ[j] && h.letter(j) == invert(h.letter(i))) {
          lo = static_cast<std::int64_t>(i);
          hi = static_cast<std::int64_t>(j);
          break;
        }
    }
    if (lo < 0) break;
    conj.push_back(w[static_cast<std::size_t>(lo)]);
    std::vector<Letter> rest;
    for (std::size_t j = 0; j < n; ++j)
      if (static_cast<std::int64_t>(j) != lo && static_cast<std::int64_t>(j) != hi)
        rest.push_back(w[j]);
    w = std::move(rest);
  }
  return {Element(gp, conj), Element(gp, w)};
}

TranslationLength translation_length_cyclic(const Element& g) {
  const auto r = cyclic_reduce(g);
  TranslationLength t;
  t.length = r.core.length();
  t.ratio = static_cast<double>(t.length);
  return t;
}

TranslationLength translation_length_limit(const Element& g, std::size_t N) {
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "power must be positive");
  ReducedWord w(g.graph());
  std::size_t previous = 0;
  for (std::size_t i = 0; i < N; ++i) {
    previous = w.size();
    w.append(g.letters());
  }
  TranslationLength t;
  t.power = N;
  t.length = w.size() - previous;
  t.ratio = static_cast<double>(w.size()) / static_cast<double>(N);
  return t;
}

// ---- rank-1 witnesses ----------------------------------------------------------------

std::optional<Rank1Witness> find_rank1_witness(const Element& g, std::size_t max_power,
                                               std::size_t radius) {
  if (g.length() == 0) throw Error(ErrorCode::InvalidArgument, "the identity has no axis");
  if (radius == 0) throw Error(ErrorCode::RadiusZero, "search radius must be positive");
  const auto& dg = *g.graph();
  auto red = cyclic_reduce(g);
  const auto& r = red.core.letters();
  const std::size_t L = r.size();
  for (std::size_t n = 1; n <= max_power; ++n) {
    std::vector<Letter> word;
    for (std::size_t c = 0; c <= n; ++c) word.insert(word.end(), r.begin(), r.end());
    const Heap h(dg, word);
    std::vector<std::int64_t> strict(dg.size());
    for (std::size_t i = 0; i < L; ++i) {
      // Certified chain from piece i to its translate i + nL: consecutive
      // comparable pieces with link-disjoint labels.
      const std::size_t target = i + n * L;
      std::vector<char> reach(target + 1, 0);
      std::vector<std::int64_t> parent(target + 1, -1);
      reach[i] = 1;
      for (std::size_t m = i + 1; m <= target; ++m) {
        std::fill(strict.begin(), strict.end(), -1);
        for (auto p : h.preds(m))
          for (std::size_t t = 0; t < dg.size(); ++t) strict[t] = std::max(strict[t], h.top(p, t));
        const std::uint64_t lm = dg.link(letter_gen(h.letter(m)));
        for (std::size_t t = 0; t < dg.size() && !reach[m]; ++t) {
          if (strict[t] < static_cast<std::int64_t>(i) || (dg.link(t) & lm)) continue;
          const auto p = static_cast<std::size_t>(strict[t]);
          if (reach[p] && h.below(i, p)) {
            reach[m] = 1;
            parent[m] = static_cast<std::int64_t>(p);
          }
        }
      }
      if (!reach[target]) continue;
      Rank1Witness out;
      out.power = n;
      for (auto m = static_cast<std::int64_t>(target); m >= 0; m = parent[static_cast<std::size_t>(m)])
        out.chain.push_back(static_cast<std::size_t>(m));
      std::reverse(out.chain.begin(), out.chain.end());
      const auto piece = piece_at(red.core, Heap(dg, r), i);
      auto hs = piece_halfspace(red.core, piece);
      hs.wall.base = mul(red.conjugator, hs.wall.base);
      out.halfspace = hs;
      out.reduction = std::move(red);
      return out;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> is_join(
    const DefiningGraph& g) {
  const std::size_t k = g.size();
  if (k < 2) return std::nullopt;
  // Component of generator 0 in the complement graph.
  std::uint64_t comp = 1, frontier = 1;
  while (frontier) {
    std::uint64_t next = 0;
    for (std::size_t v = 0; v < k; ++v)
      if ((frontier >> v) & 1) next |= g.all() & ~g.link(v) & ~(1ULL << v);
    frontier = next & ~comp;
    comp |= next;
  }
  if (comp == g.all()) return std::nullopt;
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t v = 0; v < k; ++v) ((comp >> v) & 1 ? out.first : out.second).push_back(v);
  return out;
}

}  // namespace mw::raag
