#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medianwalk/raag.hpp"
#include "medianwalk/util.hpp"
#include "medianwalk/wallgeom.hpp"
#include "oracles.hpp"

using namespace mw;
using namespace mw::raag;

namespace {

GraphPtr G(const std::string& name) { return DefiningGraph::named(name); }

Element E(const GraphPtr& g, const std::string& text) { return Element::parse(g, text); }

std::vector<Letter> random_word(const DefiningGraph& g, Rng& rng, std::size_t len) {
  std::vector<Letter> w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<Letter>(uniform_index(rng, 2 * g.size())));
  return w;
}

Element random_element(const GraphPtr& g, Rng& rng, std::size_t max_len) {
  return Element(g, random_word(*g, rng, uniform_index(rng, max_len + 1)));
}

std::vector<std::vector<bool>> commute_table(const DefiningGraph& g) {
  std::vector<std::vector<bool>> t(g.size(), std::vector<bool>(g.size()));
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) t[a][b] = g.commute(a, b);
  return t;
}

std::size_t gen(const GraphPtr& g, const std::string& name) { return *g->index(name); }

Element step(const Element& a, std::size_t s) {
  const Letter l = make_letter(s, false);
  return mul(a, Element(a.graph(), std::span<const Letter>(&l, 1)));
}

const std::string kGraphs[] = {"F2", "Z2", "C5"};

}  // namespace

TEST_CASE("normal form examples") {
  auto f2 = G("F2"), z2 = G("Z2"), c5 = G("C5");
  auto b = E(f2, "a a^-1 b");
  CHECK(b.to_string() == "b");
  CHECK(b.length() == 1);
  CHECK(E(f2, "a A b") == b);

  auto ba = E(z2, "ba");
  CHECK(ba == E(z2, "a b"));
  CHECK(ba.to_string() == "a b");
  CHECK(ba.length() == 2);

  auto w = E(c5, "v1 v3 v1⁻¹");
  CHECK(w.length() == 3);
  CHECK(w == E(c5, "v1 v3 V1"));
  CHECK(E(c5, "1").length() == 0);

  CHECK_THROWS_AS(E(f2, "c"), Error);
  try {
    E(f2, "a x");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownGenerator);
  }
}

TEST_CASE("normal form matches exhaustive rewriting") {
  for (const std::string name : {"F2", "Z2", "path(3)"}) {
    auto g = G(name);
    const auto table = commute_table(*g);
    const std::size_t letters = 2 * g->size();
    for (std::size_t len = 0; len <= 5; ++len) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < len; ++i) total *= letters;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<Letter> w;
        for (std::size_t c = code, i = 0; i < len; ++i, c /= letters) w.push_back(static_cast<Letter>(c % letters));
        CAPTURE(name);
        REQUIRE(Element(g, w).letters() == oracle::rewrite_normal_form(w, table));
      }
    }
  }
  auto c5 = G("C5");
  const auto table = commute_table(*c5);
  Rng rng = substream(11, 0);
  for (int t = 0; t < 3000; ++t) {
    auto w = random_word(*c5, rng, 1 + uniform_index(rng, 6));
    REQUIRE(Element(c5, w).letters() == oracle::rewrite_normal_form(w, table));
  }
}

TEST_CASE("normal form confluence") {
  Rng rng = substream(12, 0);
  for (const std::string name : {"F2", "Z2", "C5", "abelian(3)", "path(4)"}) {
    auto g = G(name);
    for (int t = 0; t < 2000; ++t) {
      auto w = random_word(*g, rng, uniform_index(rng, 12));
      auto v = w;
      for (int k = 0; k < 20; ++k) {
        if (uniform01(rng) < 0.3) {
          const auto pos = uniform_index(rng, v.size() + 1);
          const auto l = static_cast<Letter>(uniform_index(rng, 2 * g->size()));
          v.insert(v.begin() + static_cast<long>(pos), {l, invert(l)});
        } else if (v.size() >= 2) {
          const auto pos = uniform_index(rng, v.size() - 1);
          if (g->commute(letter_gen(v[pos]), letter_gen(v[pos + 1]))) std::swap(v[pos], v[pos + 1]);
        }
      }
      REQUIRE(Element(g, w) == Element(g, v));
    }
  }
}

TEST_CASE("group operations and metric") {
  auto f2 = G("F2");
  auto a = E(f2, "a"), b = E(f2, "b");
  CHECK(dist(a, a) == 0);
  CHECK(dist(a, b) == 2);
  CHECK_THROWS_AS(dist(a, E(G("Z2"), "a")), Error);
  try {
    mul(a, E(G("C5"), "v1"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DefiningGraphMismatch);
  }
  // Equal content counts as the same group.
  CHECK(dist(a, E(G("F2"), "b")) == 2);

  Rng rng = substream(13, 0);
  for (const auto& name : kGraphs) {
    auto g = G(name);
    const Element e(g);
    for (int t = 0; t < 300; ++t) {
      auto x = random_element(g, rng, 8), y = random_element(g, rng, 8), z = random_element(g, rng, 8);
      REQUIRE(mul(mul(x, y), z) == mul(x, mul(y, z)));
      REQUIRE(mul(x, inv(x)) == e);
      REQUIRE(mul(e, x) == x);
      REQUIRE(dist(x, y) == dist(y, x));
      REQUIRE(dist(x, z) <= dist(x, y) + dist(y, z));
      REQUIRE((dist(x, y) == 0) == (x == y));
      REQUIRE(dist(e, x) == pieces(x).size());
      REQUIRE(dist(x, y) == mul(inv(x), y).length());
    }
  }
}

TEST_CASE("median examples and axioms") {
  auto f2 = G("F2"), z2 = G("Z2");
  CHECK(median_raag(Element(z2), E(z2, "a"), E(z2, "ab")) == E(z2, "a"));
  CHECK(median_raag(Element(f2), E(f2, "ab"), E(f2, "a B")) == E(f2, "a"));
  CHECK(gromov_raag(E(f2, "ab"), E(f2, "a B"), Element(f2)) == 1);

  Rng rng = substream(14, 0);
  for (const auto& name : kGraphs) {
    auto g = G(name);
    for (int t = 0; t < 1000; ++t) {
      auto x = random_element(g, rng, 8), y = random_element(g, rng, 8), z = random_element(g, rng, 8),
           w = random_element(g, rng, 8);
      const auto m = median_raag(x, y, z);
      CAPTURE(name);
      CAPTURE(x.to_string());
      CAPTURE(y.to_string());
      CAPTURE(z.to_string());
      REQUIRE(median_raag(x, x, y) == x);
      REQUIRE(median_raag(y, x, z) == m);
      REQUIRE(median_raag(x, z, y) == m);
      REQUIRE(median_raag(z, y, x) == m);
      REQUIRE(dist(x, m) + dist(m, y) == dist(x, y));
      REQUIRE(dist(x, m) + dist(m, z) == dist(x, z));
      REQUIRE(dist(y, m) + dist(m, z) == dist(y, z));
      REQUIRE(median_raag(median_raag(x, w, y), w, z) == median_raag(x, w, median_raag(y, w, z)));
      // Equivariance.
      REQUIRE(median_raag(mul(w, x), mul(w, y), mul(w, z)) == mul(w, m));
      const auto gp = gromov_raag(x, y, z);
      REQUIRE(gp == dist(z, median_raag(x, y, z)));
      REQUIRE(2 * gp == dist(x, z) + dist(y, z) - dist(x, y));
      REQUIRE(gromov_raag(x, y, x) == 0);
    }
  }
}

TEST_CASE("pieces and transversality examples") {
  auto f2 = G("F2"), z2 = G("Z2"), c5 = G("C5");
  auto ab = E(f2, "ab");
  auto ps = pieces(ab);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].gen == 0);
  CHECK(ps[0].prefix.length() == 0);
  CHECK(ps[1].gen == 1);
  CHECK(ps[1].prefix == E(f2, "a"));
  CHECK_FALSE(transverse_pieces(ab, 0, 1));

  auto zab = E(z2, "ab");
  auto zp = pieces(zab);
  CHECK(zp[1].prefix.length() == 0);
  CHECK(transverse_pieces(zab, 0, 1));
  CHECK(transverse_pieces(E(c5, "v1 v2"), 0, 1));

  try {
    transverse_pieces(zab, 0, 2);
    FAIL("expected PieceMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PieceMismatch);
  }

  // Negative pieces: the wall sits one step back.
  auto inv_a = E(f2, "A");
  auto w = piece_wall(inv_a, pieces(inv_a)[0]);
  CHECK(w.base == inv_a);
  CHECK_FALSE(piece_halfspace(inv_a, pieces(inv_a)[0]).positive);
}

TEST_CASE("wall identity and transversality agree with hulls") {
  Rng rng = substream(15, 0);
  for (const auto& name : kGraphs) {
    auto g = G(name);
    std::size_t same = 0, crossing = 0;
    for (int t = 0; t < 400; ++t) {
      auto a = random_element(g, rng, 4);
      auto b = uniform01(rng) < 0.5 ? random_element(g, rng, 4)
                                    : mul(a, random_element(g, rng, 2));
      const RaagWall wa{a, uniform_index(rng, g->size())};
      const RaagWall wb{b, uniform_index(rng, g->size())};
      const std::vector<Element> pts{wa.base, step(wa.base, wa.gen), wb.base, step(wb.base, wb.gen)};
      const auto hull = hull_materialize(pts);
      const auto ha = hull.wall_of(wa), hb = hull.wall_of(wb);
      REQUIRE(ha);
      REQUIRE(hb);
      CAPTURE(name);
      CAPTURE(a.to_string());
      CAPTURE(b.to_string());
      REQUIRE((*ha == *hb) == (wa == wb));
      REQUIRE(wa.canonical() == wa);
      REQUIRE(wa.canonical().base.length() <= wa.base.length());
      if (auto hc = hull.wall_of(wa.canonical())) REQUIRE(*hc == *ha);
      if (*ha != *hb) {
        const bool hull_cross =
            wallgeom::wall_relation(hull.complex, *ha, *hb) == wallgeom::WallRelation::Transverse;
        REQUIRE(hull_cross == walls_transverse(wa, wb));
        crossing += hull_cross;
      } else {
        ++same;
      }
    }
    CAPTURE(name);
    CHECK(same > 0);
    if (name != "F2") CHECK(crossing > 0);
  }
}

TEST_CASE("piece transversality agrees with hulls") {
  Rng rng = substream(16, 0);
  for (const auto& name : kGraphs) {
    auto g = G(name);
    for (int t = 0; t < 200; ++t) {
      auto x = random_element(g, rng, 7);
      if (x.length() < 2) continue;
      const Element e(g);
      const std::vector<Element> pts{e, x};
      const auto hull = hull_materialize(pts);
      REQUIRE(hull.complex.distance(hull.points[0], hull.points[1]) == x.length());
      const auto ps = pieces(x);
      std::vector<std::size_t> ids;
      for (const auto& p : ps) ids.push_back(*hull.wall_of(piece_wall(x, p)));
      // Pieces biject with the walls separating the endpoints.
      auto sep = core::separating_walls(hull.complex, hull.points[0], hull.points[1]);
      auto sorted = ids;
      std::sort(sorted.begin(), sorted.end());
      REQUIRE(sorted == sep);
      for (std::size_t p = 0; p < ps.size(); ++p) {
        // The half-space of a piece is the side away from the origin.
        const auto& hs = piece_halfspace(x, ps[p]);
        const auto far = hs.positive ? step(hs.wall.base, hs.wall.gen) : hs.wall.base;
        REQUIRE(hull.complex.side(ids[p], *hull.vertex_of(far)) ==
                hull.complex.side(ids[p], hull.points[1]));
        for (std::size_t q = p + 1; q < ps.size(); ++q)
          REQUIRE(transverse_pieces(x, p, q) ==
                  (wallgeom::wall_relation(hull.complex, ids[p], ids[q]) ==
                   wallgeom::WallRelation::Transverse));
      }
    }
  }
}

TEST_CASE("strong separation certificates") {
  auto f2 = G("F2"), z2 = G("Z2"), c5 = G("C5");
  auto x = E(f2, "a b a b");
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = p + 1; q < 4; ++q) {
      auto c = ss_pieces(x, p, q);
      CHECK(c.verdict == SSVerdict::YesCertified);
      CHECK(!c.reason.empty());
    }

  auto a2 = E(z2, "a a");
  auto c = ss_pieces(a2, 0, 1);
  REQUIRE(c.verdict == SSVerdict::NoCertified);
  REQUIRE(c.witness);
  CHECK(c.witness->gen == gen(z2, "b"));
  CHECK(c.witness->canonical().base.length() == 0);

  auto v13 = E(c5, "v1 v3");
  c = ss_pieces(v13, 1, 0);
  REQUIRE(c.verdict == SSVerdict::NoCertified);
  CHECK(c.witness->gen == gen(c5, "v2"));
  CHECK(c.witness->canonical().base.length() == 0);
  CHECK(c.reason.find("hull-verified") != std::string::npos);

  try {
    ss_pieces(v13, 0, 1, 0);
    FAIL("expected RadiusZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RadiusZero);
  }
  try {
    ss_pieces(E(z2, "ab"), 0, 1);
    FAIL("expected PieceMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PieceMismatch);
  }
  CHECK(std::string(verdict_name(SSVerdict::Unknown)) == "Unknown");
}

TEST_CASE("certificates are sound on random pieces") {
  Rng rng = substream(17, 0);
  for (const std::string name : {"Z2", "C5", "path(4)"}) {
    auto g = G(name);
    std::size_t yes = 0, no = 0;
    for (int t = 0; t < 150; ++t) {
      auto x = random_element(g, rng, 6);
      const Heap h(*g, x.letters());
      const auto ps = pieces(x);
      for (std::size_t p = 0; p < ps.size(); ++p)
        for (std::size_t q = p + 1; q < ps.size(); ++q) {
          if (!h.comparable(p, q)) continue;
          auto c = ss_pieces(x, p, q, 3);
          const auto wp = piece_wall(x, ps[p]), wq = piece_wall(x, ps[q]);
          if (c.verdict == SSVerdict::YesCertified) {
            ++yes;
            REQUIRE((g->link(ps[p].gen) & g->link(ps[q].gen)) == 0);
          } else if (c.verdict == SSVerdict::NoCertified) {
            ++no;
            const auto& w = *c.witness;
            const std::vector<Element> pts{w.base, step(w.base, w.gen), wp.base, step(wp.base, wp.gen),
                                           wq.base, step(wq.base, wq.gen)};
            const auto hull = hull_materialize(pts);
            const auto hw = *hull.wall_of(w);
            REQUIRE(wallgeom::wall_relation(hull.complex, hw, *hull.wall_of(wp)) ==
                    wallgeom::WallRelation::Transverse);
            REQUIRE(wallgeom::wall_relation(hull.complex, hw, *hull.wall_of(wq)) ==
                    wallgeom::WallRelation::Transverse);
          }
        }
    }
    CAPTURE(name);
    CHECK(no > 0);
    if (std::string(name) != "Z2") CHECK(yes > 0);
  }
}

TEST_CASE("certified chains") {
  auto f2 = G("F2"), z2 = G("Z2"), c5 = G("C5");
  CHECK(max_certified_ss_chain(E(f2, "abab")) == 4);
  CHECK(max_certified_ss_chain(Element(f2)) == 0);
  Rng rng = substream(18, 0);
  for (int t = 0; t < 200; ++t) {
    auto x = random_element(z2, rng, 10);
    if (x.length() > 0) REQUIRE(max_certified_ss_chain(x) == 1);
  }
  // Chains in C5 walk endpoints, checked against pairwise certificates.
  for (int t = 0; t < 100; ++t) {
    std::vector<Letter> w;
    for (int i = 0; i < 20; ++i) w.push_back(static_cast<Letter>(uniform_index(rng, 10)));
    Element x(c5, w);
    if (x.length() == 0) continue;
    const auto n = max_certified_ss_chain(x);
    REQUIRE(n >= 1);
    REQUIRE(n <= x.length());
  }
  // Every pair of a certified chain is strongly separated in the hull.
  auto x = E(c5, "v1 v4 v2 v4 v1 v4 v2 v4");
  CHECK(max_certified_ss_chain(x) >= 4);
}

TEST_CASE("translation length") {
  auto f2 = G("F2"), z2 = G("Z2");
  CHECK(translation_length_cyclic(E(f2, "a b A")).length == 1);
  CHECK(translation_length_cyclic(E(z2, "ab")).length == 2);
  CHECK(translation_length_limit(E(f2, "a b A"), 64).length == 1);
  CHECK(translation_length_limit(E(z2, "ab"), 64).length == 2);
  auto r = cyclic_reduce(E(f2, "a b A"));
  CHECK(r.conjugator == E(f2, "a"));
  CHECK(r.core == E(f2, "b"));
  CHECK_THROWS_AS(translation_length_limit(E(f2, "a"), 0), Error);

  Rng rng = substream(19, 0);
  for (const std::string name : {"F2", "Z2", "C5", "path(4)"}) {
    auto g = G(name);
    for (int t = 0; t < 1000; ++t) {
      auto x = random_element(g, rng, 10);
      const auto red = cyclic_reduce(x);
      REQUIRE(mul(mul(red.conjugator, red.core), inv(red.conjugator)) == x);
      const auto c = translation_length_cyclic(x);
      const auto l = translation_length_limit(x, 64);
      REQUIRE(c.length == l.length);
      REQUIRE(l.ratio >= static_cast<double>(l.length) - 1e-12);
      REQUIRE(l.ratio <= static_cast<double>(l.length) + static_cast<double>(x.length()) / 32.0);
    }
  }
}

namespace {

// Checks g^n h ⊊ h for the witness inside a hull containing both walls.
void check_rank1(const Element& g, const Rank1Witness& w) {
  Element gn(g.graph());
  for (std::size_t i = 0; i < w.power; ++i) gn = mul(gn, g);
  const RaagWall h = w.halfspace.wall;
  const RaagWall gh{mul(gn, h.base), h.gen};
  REQUIRE_FALSE(gh == h);
  const std::vector<Element> pts{h.base, step(h.base, h.gen), gh.base, step(gh.base, gh.gen)};
  const auto hull = hull_materialize(pts);
  const auto hid = *hull.wall_of(h), gid = *hull.wall_of(gh);
  const bool side_h = hull.complex.side(hid, *hull.vertex_of(w.halfspace.positive ? pts[1] : pts[0]));
  const bool side_g = hull.complex.side(gid, *hull.vertex_of(w.halfspace.positive ? pts[3] : pts[2]));
  wallgeom::WallGeometry geo(hull.complex);
  REQUIRE(geo.relation(hid, gid) != wallgeom::WallRelation::Transverse);
  REQUIRE(geo.subset({gid, side_g}, {hid, side_h}));
  REQUIRE(w.chain.size() >= 2);
}

}  // namespace

TEST_CASE("rank-1 witnesses") {
  auto f2 = G("F2"), z2 = G("Z2"), c5 = G("C5");
  auto a = E(f2, "a");
  auto w = find_rank1_witness(a);
  REQUIRE(w);
  CHECK(w->power == 1);
  CHECK(w->halfspace.wall.gen == 0);
  CHECK(w->halfspace.wall.canonical().base.length() == 0);
  CHECK(w->halfspace.positive);
  check_rank1(a, *w);

  auto conj = E(f2, "b a b a B");
  w = find_rank1_witness(conj);
  REQUIRE(w);
  check_rank1(conj, *w);

  Rng rng = substream(20, 0);
  for (int t = 0; t < 200; ++t) {
    auto x = random_element(z2, rng, 8);
    if (x.length() == 0) continue;
    REQUIRE_FALSE(find_rank1_witness(x));
  }
  CHECK_THROWS_AS(find_rank1_witness(Element(z2)), Error);

  auto c = E(c5, "v1 v4 v2 v4");
  w = find_rank1_witness(c);
  REQUIRE(w);
  CHECK(w->power == 1);
  check_rank1(c, *w);

  // Some element of length <= 6 in C5 is certified.
  std::size_t found = 0;
  for (int t = 0; t < 200; ++t) {
    auto x = random_element(c5, rng, 6);
    if (x.length() == 0) continue;
    if (auto r = find_rank1_witness(x)) {
      ++found;
      check_rank1(x, *r);
    }
  }
  CHECK(found > 0);
  // Elements in a join subgroup are never certified.
  CHECK_FALSE(find_rank1_witness(E(c5, "v1 v2")));
}

TEST_CASE("joins") {
  auto z = is_join(*G("Z2"));
  REQUIRE(z);
  CHECK(z->first == std::vector<std::size_t>{0});
  CHECK(z->second == std::vector<std::size_t>{1});
  CHECK_FALSE(is_join(*G("F2")));
  CHECK_FALSE(is_join(*G("C5")));
  CHECK(is_join(*G("cycle(4)")));
  CHECK_FALSE(is_join(*G("free(1)")));
}

TEST_CASE("hull materialization") {
  auto z2 = G("Z2"), f2 = G("F2");
  const std::vector<Element> sq{Element(z2), E(z2, "ab")};
  auto h = hull_materialize(sq);
  CHECK(h.complex.vertex_count() == 4);
  CHECK(h.complex.edge_count() == 4);

  auto g = E(f2, "a b A b b");
  const std::vector<Element> seg{Element(f2), g};
  h = hull_materialize(seg);
  CHECK(h.complex.vertex_count() == g.length() + 1);
  CHECK(h.complex.edge_count() == g.length());

  // Idempotence.
  auto c5 = G("C5");
  const std::vector<Element> pts{E(c5, "v1 v3"), E(c5, "v2 v4 V1"), E(c5, "v5 v5")};
  h = hull_materialize(pts);
  auto again = hull_materialize(h.vertices);
  CHECK(again.complex.vertex_count() == h.complex.vertex_count());
  for (const auto& [key, v] : h.index) CHECK(again.index.count(key) == 1);

  try {
    const std::vector<Element> big{Element(f2), E(f2, "a a a a a a a a a a")};
    hull_materialize(big, 5);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("algebraic values agree with hull oracles") {
  Rng rng = substream(21, 0);
  for (const auto& name : kGraphs) {
    auto g = G(name);
    for (int t = 0; t < 1000; ++t) {
      const std::vector<Element> pts{random_element(g, rng, 5), random_element(g, rng, 5),
                                     random_element(g, rng, 5)};
      const auto hull = hull_materialize(pts);
      const auto& c = hull.complex;
      const auto [x, y, z] = std::tuple(hull.points[0], hull.points[1], hull.points[2]);
      CAPTURE(name);
      REQUIRE(c.distance(x, y) == dist(pts[0], pts[1]));
      REQUIRE(c.distance(y, z) == dist(pts[1], pts[2]));
      REQUIRE(core::median(c, x, y, z) == *hull.vertex_of(median_raag(pts[0], pts[1], pts[2])));
      REQUIRE(core::gromov_product(c, x, y, z) == gromov_raag(pts[0], pts[1], pts[2]));
      // Nothing beyond the convex hull of the points was materialized.
      REQUIRE(core::convex_hull(c, hull.points).size() == c.vertex_count());
    }
  }
}

TEST_CASE("defining graph json") {
  auto c5 = G("C5");
  auto j = c5->to_json();
  auto back = DefiningGraph::from_json(j);
  CHECK(*back == *c5);
  nlohmann::json bad = {{"generators", {"a", "b"}}, {"edges", nlohmann::json::array()}, {"extra", 1}};
  try {
    DefiningGraph::from_json(bad);
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(e.detail() == "extra");
  }
  nlohmann::json unknown = {{"generators", nlohmann::json::array({"a", "b"})},
                            {"edges", nlohmann::json::array({nlohmann::json::array({"a", "z"})})}};
  try {
    DefiningGraph::from_json(unknown);
    FAIL("expected UnknownGenerator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownGenerator);
  }
}
