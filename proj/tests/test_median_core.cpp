#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medianwalk/median_core.hpp"
#include "oracles.hpp"

using namespace mw;
using namespace mw::core;

namespace {

FiniteMedianComplex make(const std::string& spec) {
  return generate_family(FamilySpec::parse(spec));
}

oracle::Graph as_graph(const FiniteMedianComplex& c) {
  oracle::Graph g;
  g.n = c.vertex_count();
  for (auto e : c.edges()) g.edges.emplace_back(e.u, e.v);
  return g;
}

ErrorCode build_error(std::size_t n, std::vector<Edge> edges) {
  try {
    FiniteMedianComplex::build(n, edges);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

const std::string kSmallFamilies[] = {
    "path(1)",         "path(2)",          "path(4)",         "tree(3,12)",
    "tree(11,30)",     "binary_tree(3)",   "grid(3,3)",       "grid(2,5)",
    "hypercube(3)",    "hypercube(4)",     "product(tree(5,6),path(3))",
    "median_closure(1,5,6)", "median_closure(9,6,10)", "product(path(3),path(3),path(2))",
};

}  // namespace

TEST_CASE("build_complex: path, cube, triangle") {
  auto p4 = make("path(4)");
  CHECK(p4.wall_count() == oracle::theta_class_count(as_graph(p4)));
  CHECK(p4.wall_count() == 3);

  auto q3 = make("hypercube(3)");
  CHECK(q3.wall_count() == 3);
  for (const auto& w : q3.walls()) {
    CHECK(w.side_zero.size() == 4);
    CHECK(w.side_one.size() == 4);
  }

  CHECK(build_error(3, {{0, 1}, {1, 2}, {2, 0}}) == ErrorCode::NotBipartite);
}

TEST_CASE("build_complex: rejected inputs") {
  CHECK(build_error(4, {{0, 1}, {2, 3}}) == ErrorCode::NotConnected);
  CHECK(build_error(2, {{0, 0}}) == ErrorCode::InvalidArgument);
  CHECK(build_error(2, {{0, 1}, {1, 0}}) == ErrorCode::InvalidArgument);
  CHECK(build_error(2, {{0, 5}}) == ErrorCode::VertexOutOfRange);
  CHECK(build_error(0, {}) == ErrorCode::InvalidArgument);

  // K_{2,3}: bipartite, but the three degree-two vertices have two medians.
  try {
    FiniteMedianComplex::build(5, std::vector<Edge>{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
    FAIL("K_{2,3} accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMedian);
    REQUIRE(e.witness().size() == 3);
  }
  // Hexagon C6: partial cube but not median.
  CHECK(build_error(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}) == ErrorCode::NotMedian);
}

TEST_CASE("wall counts agree with a brute-force Djokovic-Winkler closure") {
  for (auto spec : kSmallFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    CHECK(c.wall_count() == oracle::theta_class_count(as_graph(c)));
  }
  CHECK(make("grid(3,3)").wall_count() == 4);
}

TEST_CASE("generate_family examples") {
  CHECK(make("hypercube(3)").vertex_count() == 8);
  auto c4 = make("product(path(2),path(2))");
  CHECK(c4.vertex_count() == 4);
  CHECK(c4.edge_count() == 4);
  for (core::Vertex v = 0; v < 4; ++v) CHECK(c4.neighbors(v).size() == 2);

  FamilyOptions tight;
  tight.max_vertices = 10;
  CHECK_THROWS_AS(generate_family(FamilySpec::parse("grid(4,4)"), tight), Error);
  try {
    generate_family(FamilySpec::parse("hypercube(5)"), tight);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeBudgetExceeded);
  }
  CHECK(FamilySpec::parse(" product( grid(2,3) , path(2))").to_string() ==
        "product(grid(2,3),path(2))");
  CHECK_THROWS_AS(FamilySpec::parse("torus(3)"), Error);
}

TEST_CASE("median examples") {
  auto q3 = make("hypercube(3)");
  // vertex index bit i = coordinate i; 000 -> 0, 110 -> 3, 101 -> 5, 100 -> 1
  CHECK(median(q3, 0, 3, 5) == 1);
  for (core::Vertex x = 0; x < 8; ++x)
    for (core::Vertex y = 0; y < 8; ++y) CHECK(median(q3, x, x, y) == x);
  CHECK_THROWS_AS(median(q3, 0, 1, 8), Error);
}

TEST_CASE("majority median equals the interval-intersection oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (auto spec : {"tree(" + std::to_string(seed) + ",40)",
                      "median_closure(" + std::to_string(seed) + ",7,9)",
                      "product(tree(" + std::to_string(seed) + ",7),path(4))"}) {
      CAPTURE(spec);
      auto c = make(spec);
      Rng rng(seed);
      for (int i = 0; i < 300; ++i) {
        auto x = static_cast<core::Vertex>(uniform_index(rng, c.vertex_count()));
        auto y = static_cast<core::Vertex>(uniform_index(rng, c.vertex_count()));
        auto z = static_cast<core::Vertex>(uniform_index(rng, c.vertex_count()));
        CHECK(median(c, x, y, z) == median_by_intervals(c, x, y, z));
      }
    }
  }
}

TEST_CASE("median axioms hold exhaustively on small complexes") {
  for (auto spec : {"path(4)", "grid(2,3)", "hypercube(3)", "tree(4,8)",
                    "median_closure(3,4,5)"}) {
    CAPTURE(spec);
    auto c = make(spec);
    const auto n = static_cast<core::Vertex>(c.vertex_count());
    for (core::Vertex x = 0; x < n; ++x)
      for (core::Vertex y = 0; y < n; ++y)
        for (core::Vertex z = 0; z < n; ++z) {
          auto m = median(c, x, y, z);
          REQUIRE(m == median(c, y, x, z));
          REQUIRE(m == median(c, z, y, x));
          REQUIRE(m == median(c, x, z, y));
        }
    // m(a,b,m(x,y,z)) = m(m(a,b,x), m(a,b,y), z)
    Rng rng(99);
    for (int i = 0; i < 2000; ++i) {
      core::Vertex v[5];
      for (auto& w : v) w = static_cast<core::Vertex>(uniform_index(rng, n));
      auto [a, b, x, y, z] = v;
      REQUIRE(median(c, a, b, median(c, x, y, z)) ==
              median(c, median(c, a, b, x), median(c, a, b, y), z));
    }
  }
}

TEST_CASE("distance equals the number of separating walls; sides are convex") {
  for (auto spec : kSmallFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    auto d = oracle::all_pairs(as_graph(c));
    for (core::Vertex x = 0; x < c.vertex_count(); ++x)
      for (core::Vertex y = 0; y < c.vertex_count(); ++y) {
        REQUIRE(static_cast<int>(c.distance(x, y)) == d[x][y]);
        REQUIRE(separating_walls(c, x, y).size() == c.distance(x, y));
      }
    for (const auto& w : c.walls()) {
      CHECK(side_is_convex(c, w.id, false));
      CHECK(side_is_convex(c, w.id, true));
      CHECK(w.side_zero.size() + w.side_one.size() == c.vertex_count());
      CHECK(!w.side_zero.empty());
      CHECK(!w.side_one.empty());
    }
    // every edge dual to exactly one wall
    std::size_t dual = 0;
    for (const auto& w : c.walls()) dual += w.dual_edges.size();
    CHECK(dual == c.edge_count());
  }
}

TEST_CASE("interval") {
  auto p4 = make("path(4)");
  CHECK(interval(p4, 2, 2) == VertexSet{2});
  CHECK(interval(p4, 0, 3) == VertexSet{0, 1, 2, 3});
  auto q3 = make("hypercube(3)");
  CHECK(interval(q3, 0, 7).size() == 8);
  for (auto spec : kSmallFamilies) {
    auto c = make(spec);
    for (core::Vertex x = 0; x < c.vertex_count(); x += 3)
      for (core::Vertex y = 0; y < c.vertex_count(); y += 2)
        REQUIRE(interval(c, x, y) == interval_by_halfspaces(c, x, y));
  }
}

TEST_CASE("convex_hull") {
  auto g = make("grid(3,3)");  // vertex (i,j) -> 3i + j
  std::vector<core::Vertex> s{0, 4};
  CHECK(convex_hull(g, s) == VertexSet{0, 1, 3, 4});
  std::vector<core::Vertex> pair{2, 6};
  CHECK(convex_hull(g, pair) == interval(g, 2, 6));
  CHECK_THROWS_AS(convex_hull(g, std::vector<core::Vertex>{}), Error);

  for (auto spec : kSmallFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    auto d = oracle::all_pairs(as_graph(c));
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
      std::vector<core::Vertex> set;
      for (int k = 0; k < 3; ++k)
        set.push_back(static_cast<core::Vertex>(uniform_index(rng, c.vertex_count())));
      auto h = convex_hull(c, set);
      CHECK(h == oracle::hull_by_intervals(d, set));
      CHECK(convex_hull(c, h) == h);
    }
  }
}

TEST_CASE("gromov_product and horofunction") {
  auto p4 = make("path(4)");
  CHECK(gromov_product(p4, 0, 3, 1) == 0);  // (v1|v4)_{v2}
  CHECK(horofunction(p4, 3, 0, 1) == -1);    // o = v1, x = v4, a = v2
  for (auto spec : kSmallFamilies) {
    CAPTURE(spec);
    auto c = make(spec);
    const auto n = static_cast<core::Vertex>(c.vertex_count());
    for (core::Vertex x = 0; x < n; ++x)
      for (core::Vertex o = 0; o < n; o += 2) {
        CHECK(gromov_product(c, x, x, o) == c.distance(o, x));
        CHECK(horofunction(c, x, o, o) == 0);
        for (core::Vertex y = 0; y < n; y += 3) {
          CHECK(gromov_product(c, x, y, x) == 0);
          const auto g = gromov_product(c, x, y, o);
          CHECK(2 * g == c.distance(x, o) + c.distance(y, o) - c.distance(x, y));
          // h_x(a) = d(x,a) - d(x,o) for interior x
          CHECK(horofunction(c, x, o, y) ==
                static_cast<std::int64_t>(c.distance(x, y)) - c.distance(x, o));
          // 2(a|x)_z = d(a,z) + h_x(z) - h_x(a), with z ranging over o's
          const core::Vertex z = (o + 1) % n;
          CHECK(2 * static_cast<std::int64_t>(gromov_product(c, y, x, z)) ==
                c.distance(y, z) + horofunction(c, x, o, z) - horofunction(c, x, o, y));
        }
      }
  }
}

TEST_CASE("sampled median validation above the exhaustive bound is recorded") {
  BuildOptions opts;
  opts.exhaustive_triple_limit = 100;
  opts.sampled_triples = 500;
  FamilyOptions fo;
  fo.build = opts;
  auto c = generate_family(FamilySpec::parse("grid(4,4)"), fo);
  CHECK(c.median_check() == MedianCheck::Sampled);
  CHECK(c.triples_checked() == 500);
  auto small = make("path(4)");
  CHECK(small.median_check() == MedianCheck::Exhaustive);
  CHECK(small.triples_checked() == 4);
}

TEST_CASE("json interchange") {
  auto j = nlohmann::json::parse(R"({"vertices": 4, "edges": [[0,1],[1,2],[2,3]]})");
  auto c = complex_from_json(j);
  CHECK(c.wall_count() == 3);
  auto out = complex_to_json(c);
  CHECK(out["walls"].size() == 3);
  CHECK(out["walls"][0] == nlohmann::json::array({0}));
  auto again = complex_from_json(out);
  CHECK(again.hash() == c.hash());

  auto labelled = nlohmann::json::parse(
      R"({"vertices": 3, "labels": ["a","b","c"], "edges": [["a","b"],["b","c"]]})");
  CHECK(complex_from_json(labelled).wall_count() == 2);

  try {
    complex_from_json(nlohmann::json::parse(R"({"vertices": 2, "edges": [], "colour": 1})"));
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    CHECK(e.detail() == "colour");
  }
}
