#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medianwalk/wallgeom.hpp"
#include "oracles.hpp"

using namespace mw;
using namespace mw::wallgeom;
using core::FamilySpec;
using core::generate_family;

namespace {

core::FiniteMedianComplex make(const std::string& spec) {
  return generate_family(FamilySpec::parse(spec));
}

std::size_t wall_of(const core::FiniteMedianComplex& c, Vertex u, Vertex v) {
  return *c.wall_of_edge(u, v);
}

const std::string kFamilies[] = {
    "path(2)",        "path(6)",         "tree(2,15)",           "tree(8,30)",
    "binary_tree(3)", "grid(3,3)",       "grid(2,4)",            "hypercube(3)",
    "product(tree(4,5),path(3))",        "median_closure(2,5,7)", "median_closure(5,6,9)",
    "product(path(4),path(2),path(2))",
};

std::uint32_t tree_depth(const core::FiniteMedianComplex& c, Vertex root) {
  std::uint32_t depth = 0;
  for (Vertex v = 0; v < c.vertex_count(); ++v) depth = std::max(depth, c.distance(root, v));
  return depth;
}

}  // namespace

TEST_CASE("wall_relation examples") {
  auto q3 = make("hypercube(3)");
  WallGeometry gq(q3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(gq.relation(a, b) == (a == b ? WallRelation::Equal : WallRelation::Transverse));

  auto p4 = make("path(4)");
  WallGeometry gp(p4);
  const auto e1 = wall_of(p4, 0, 1), e2 = wall_of(p4, 1, 2), e3 = wall_of(p4, 2, 3);
  CHECK(gp.relation(e1, e2) == WallRelation::TightlyNested);
  CHECK(gp.relation(e2, e3) == WallRelation::TightlyNested);
  CHECK(gp.relation(e1, e3) == WallRelation::NestedLoose);
  CHECK_THROWS_AS(gp.relation(0, 3), Error);
  try {
    gp.relation(7, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WallOutOfRange);
  }
}

TEST_CASE("table relations agree with direct scans") {
  for (auto spec : kFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    WallGeometry g(c);
    for (std::size_t a = 0; a < g.wall_count(); ++a)
      for (std::size_t b = 0; b < g.wall_count(); ++b) {
        REQUIRE(g.relation(a, b) == wall_relation(c, a, b));
        REQUIRE(g.relation(a, b) == g.relation(b, a));
        if (a != b) REQUIRE(g.strongly_separated(a, b) == strongly_separated(c, a, b));
      }
  }
}

TEST_CASE("strongly_separated examples") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto t = make("tree(" + std::to_string(seed) + ",25)");
    WallGeometry g(t);
    for (std::size_t a = 0; a < g.wall_count(); ++a)
      for (std::size_t b = a + 1; b < g.wall_count(); ++b) CHECK(g.strongly_separated(a, b));
  }
  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  auto q3 = make("hypercube(3)");
  WallGeometry gq(q3);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) CHECK_FALSE(gg.strongly_separated(a, b));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) CHECK_FALSE(gq.strongly_separated(a, b));
  CHECK_THROWS_AS(gq.strongly_separated(1, 1), Error);
}

TEST_CASE("contact_graph examples") {
  auto p4 = make("path(4)");
  WallGeometry gp(p4);
  const auto e1 = wall_of(p4, 0, 1), e2 = wall_of(p4, 1, 2), e3 = wall_of(p4, 2, 3);
  const auto& cx = gp.contact();
  CHECK(cx.node_count() == 3);
  CHECK(cx.adjacent(e1, e2));
  CHECK(cx.adjacent(e2, e3));
  CHECK_FALSE(cx.adjacent(e1, e3));
  CHECK(cx.distance(e1, e1) == 0);
  CHECK(cx.distance(e1, e3) == 2);
  CHECK(cx.gromov(e1, e3, e2) == 0);
  CHECK(cx.gromov_doubled(e1, e3, e2) == 0);

  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) CHECK(gg.contact().distance(a, b) == (a == b ? 0u : 1u));
  auto q3 = make("hypercube(3)");
  WallGeometry gq(q3);
  for (std::size_t a = 0; a < 3; ++a) CHECK(gq.contact().adjacency()[a].size() == 2);

  for (auto spec : kFamilies) {
    auto c = make(spec);
    WallGeometry g(c);
    const auto& adj = g.contact().adjacency();
    for (std::size_t a = 0; a < adj.size(); ++a)
      for (auto b : adj[a]) {
        CHECK(b != a);
        CHECK(std::find(adj[b].begin(), adj[b].end(), a) != adj[b].end());
      }
  }
}

TEST_CASE("max_ss_set examples and bounds") {
  auto t = make("tree(3,40)");
  WallGeometry gt(t);
  for (Vertex x = 0; x < t.vertex_count(); x += 3)
    for (Vertex y = 0; y < t.vertex_count(); y += 5) CHECK(max_ss_set(gt, x, y).size == t.distance(x, y));

  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  CHECK(max_ss_set(gg, 0, 8).size == 1);
  auto q3 = make("hypercube(3)");
  WallGeometry gq(q3);
  CHECK(max_ss_set(gq, 0, 7).size == 1);
  CHECK(max_ss_set(gq, 5, 5).size == 0);

  for (auto spec : kFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    WallGeometry g(c);
    for (Vertex x = 0; x < c.vertex_count(); ++x)
      for (Vertex y = 0; y < c.vertex_count(); ++y) {
        auto s = max_ss_set(g, x, y);
        REQUIRE(s.size <= c.distance(x, y));
        if (x != y) REQUIRE(s.clique_checked);
        REQUIRE_FALSE(s.disagreement);
        REQUIRE(s.chain.size() == s.size);
        for (std::size_t i = 0; i < s.chain.size(); ++i)
          for (std::size_t j = i + 1; j < s.chain.size(); ++j)
            REQUIRE(g.strongly_separated(s.chain[i], s.chain[j]));
      }
  }
}

TEST_CASE("strong separation is transitive along nested chains") {
  for (auto spec : kFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    if (c.wall_count() > 20) continue;
    WallGeometry g(c);
    CHECK_FALSE(find_ss_transitivity_failure(g).has_value());
  }
}

TEST_CASE("verify_remark_ss") {
  for (auto spec : kFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    WallGeometry g(c);
    auto r = verify_remark_ss(g);
    CHECK_FALSE(r.counterexample.has_value());
    CHECK(r.report.violations == 0);
    CHECK(r.pairs_checked == g.wall_count() * (g.wall_count() - 1) / 2);
  }
  auto p4 = make("path(4)");
  WallGeometry gp(p4);
  auto r = verify_remark_ss(gp);
  const auto e1 = wall_of(p4, 0, 1), e3 = wall_of(p4, 2, 3);
  CHECK(std::find(r.converse.begin(), r.converse.end(),
                  std::pair{std::min(e1, e3), std::max(e1, e3)}) != r.converse.end());
  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  CHECK(gg.contact().diameter() <= 2);
  CHECK_FALSE(verify_remark_ss(gg).counterexample.has_value());
}

TEST_CASE("verify_projection_lemma") {
  auto p = make("path(5)");
  WallGeometry gp(p);
  CHECK(projection_distance(gp, 2, 2) == 0);

  // A random tree whose depth from vertex 0 is 12.
  auto t = make("tree(5,300)");
  REQUIRE(tree_depth(t, 0) == 12);
  WallGeometry gt(t);
  auto r = verify_projection_lemma(gt, 2000, 3, 5);
  CHECK(r.violations == 0);
  CHECK(r.cases_checked == 2000);

  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  CHECK(verify_projection_lemma(gg, 500, 3, 1).violations == 0);

  for (auto spec : kFamilies) {
    auto c = make(spec);
    WallGeometry g(c);
    for (std::uint32_t A : {3u, 4u, 6u}) CHECK(verify_projection_lemma(g, 200, A, A).violations == 0);
  }
  CHECK_THROWS_AS(verify_projection_lemma(gg, 10, 2, 1), Error);
}

TEST_CASE("hierarchy_path_search") {
  auto p4 = make("path(4)");
  WallGeometry gp(p4);
  auto trivial = hierarchy_path_search(gp, 2, 2);
  CHECK(trivial.walls.empty());
  CHECK(check_hierarchy_path(gp, 2, 2, trivial).empty());

  auto hp = hierarchy_path_search(gp, 0, 3);
  CHECK(hp.geodesic == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(hp.walls == std::vector<std::size_t>{wall_of(p4, 0, 1), wall_of(p4, 1, 2), wall_of(p4, 2, 3)});
  CHECK(check_hierarchy_path(gp, 0, 3, hp).empty());

  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  auto hg = hierarchy_path_search(gg, 0, 8);
  CHECK(check_hierarchy_path(gg, 0, 8, hg).empty());
  CHECK(hg.walls.size() <= 2);

  for (auto spec : kFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    WallGeometry g(c);
    for (Vertex x = 0; x < c.vertex_count(); x += 2)
      for (Vertex y = 1; y < c.vertex_count(); y += 3) {
        auto h = hierarchy_path_search(g, x, y);
        REQUIRE(check_hierarchy_path(g, x, y, h) == "");
      }
  }
}

TEST_CASE("verify_chain_gromov") {
  auto p = make("path(12)");
  WallGeometry g(p);
  std::vector<std::size_t> chain;
  for (Vertex v = 0; v + 1 < 12; ++v) chain.push_back(wall_of(p, v, v + 1));
  auto r = verify_chain_gromov(g, chain);
  CHECK(r.violations == 0);
  CHECK(r.cases_checked == 11 * 11 + 9);
  std::vector<std::size_t> reversed(chain.rbegin(), chain.rend());
  CHECK(verify_chain_gromov(g, reversed).violations == 0);
  std::vector<std::size_t> one{chain[0], chain[1]};
  CHECK(verify_chain_gromov(g, one).violations == 0);

  std::vector<std::size_t> shuffled{chain[0], chain[2], chain[1]};
  try {
    verify_chain_gromov(g, shuffled);
    FAIL("out-of-order chain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ChainInvalid);
  }
  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  std::vector<std::size_t> parallel{wall_of(grid, 0, 1), wall_of(grid, 1, 2)};
  CHECK_THROWS_AS(verify_chain_gromov(gg, parallel), Error);

  // chains realized by max_ss_set in random trees and closures
  for (auto spec : kFamilies) {
    auto c = make(spec);
    WallGeometry gc(c);
    for (Vertex x = 0; x < c.vertex_count(); x += 3) {
      auto s = max_ss_set(gc, x, static_cast<Vertex>(c.vertex_count() - 1));
      if (!s.chain.empty()) CHECK(verify_chain_gromov(gc, s.chain).violations == 0);
    }
  }
}

TEST_CASE("verify_box_lemma") {
  for (auto spec : kFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    WallGeometry g(c);
    auto r = verify_box_lemma(g);
    CHECK_FALSE(r.counterexample.has_value());
    CHECK(r.report.cases_checked == std::uint64_t(c.vertex_count()) * c.vertex_count() *
                                        c.vertex_count() * c.vertex_count());
  }
  auto grid = make("grid(3,3)");
  WallGeometry gg(grid);
  CHECK(verify_box_lemma(gg).hypothesis_cases == 0);

  // Depth-6 binary tree: root o, z two levels down, x a sibling of z, y in the
  // other subtree. The two edges above z realize the hypothesis.
  auto bt = make("binary_tree(6)");
  WallGeometry gb(bt);
  auto inst = box_instance(gb, 0, 8, 2, 7);
  CHECK(inst.hypothesis);
  CHECK(inst.m2 == 3);
  CHECK(inst.m1 == 0);
  CHECK(inst.m3 == 0);
  CHECK(inst.m4 == 0);
  REQUIRE(inst.h1.has_value());
  CHECK(gb.subset(*inst.h1, *inst.h2));
  auto sampled = verify_box_lemma(gb, BoxMode::Sampled, 20'000, 3);
  CHECK_FALSE(sampled.counterexample.has_value());
  CHECK(sampled.hypothesis_cases > 0);
}

TEST_CASE("hyperbolicity_delta") {
  auto t = make("tree(5,20)");
  std::vector<std::vector<std::uint32_t>> adj(t.vertex_count());
  for (auto e : t.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  auto dt = hyperbolicity_delta(adj, 1'000'000);
  CHECK(dt.exact);
  CHECK(dt.doubled == 0);

  std::vector<std::vector<std::uint32_t>> c12(12);
  oracle::Graph og;
  og.n = 12;
  for (std::uint32_t i = 0; i < 12; ++i) {
    c12[i].push_back((i + 1) % 12);
    c12[(i + 1) % 12].push_back(i);
    og.edges.emplace_back(i, (i + 1) % 12);
  }
  auto dc = hyperbolicity_delta(c12, 10'000);
  CHECK(dc.exact);
  CHECK(dc.doubled == oracle::doubled_delta(oracle::all_pairs(og)));
  CHECK(dc.value() == 3.0);

  std::vector<std::vector<std::uint32_t>> split(2);
  try {
    hyperbolicity_delta(split, 10);
    FAIL("disconnected graph accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Disconnected);
  }

  auto mc = make("median_closure(4,6,10)");
  WallGeometry g(mc);
  auto dcx = hyperbolicity_delta(g.contact().adjacency(), 500);
  CHECK(dcx.quadruples > 0);
}
