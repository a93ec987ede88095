#include <deque>

#include "medianwalk/raag.hpp"

namespace mw::raag {

namespace {

std::string key_of(std::span<const Letter> canon) { return std::string(canon.begin(), canon.end()); }

}  // namespace

std::optional<core::Vertex> Hull::vertex_of(const Element& e) const {
  auto it = index.find(key_of(e.letters()));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Hull::wall_of(const RaagWall& w) const {
  auto a = vertex_of(w.base);
  const Letter l = make_letter(w.gen, false);
  auto b = vertex_of(mul(w.base, Element(w.base.graph(), std::span<const Letter>(&l, 1))));
  if (!a || !b) return std::nullopt;
  return complex.wall_of_edge(*a, *b);
}

// Breadth-first growth from the first point: an edge is crossed exactly when
// its wall separates the first point from another point. Sides are read off
// from the distances to the points, kept as reduced words s^-1 v.
Hull hull_materialize(std::span<const Element> points, std::size_t budget,
                      const core::BuildOptions& options) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "hull of an empty set");
  const GraphPtr gp = points[0].graph();
  for (const auto& p : points) check_same_graph(gp, p.graph());
  const auto& g = *gp;
  const std::size_t S = points.size();

  Hull hull;
  std::vector<std::vector<ReducedWord>> rel;  // rel[v][s] = points[s]^-1 v
  std::vector<core::Edge> edges;

  auto add_vertex = [&](Element e, std::vector<ReducedWord> r) -> core::Vertex {
    if (hull.vertices.size() >= budget)
      throw Error(ErrorCode::BudgetExceeded,
                  "hull exceeds the budget of " + std::to_string(budget) + " vertices",
                  std::to_string(budget));
    const auto v = static_cast<core::Vertex>(hull.vertices.size());
    hull.index.emplace(key_of(e.letters()), v);
    hull.vertices.push_back(std::move(e));
    rel.push_back(std::move(r));
    return v;
  };

  {
    std::vector<ReducedWord> r;
    const auto& s0 = points[0].letters();
    for (const auto& p : points) {
      ReducedWord w(gp);
      for (auto it = p.letters().rbegin(); it != p.letters().rend(); ++it) w.append(invert(*it));
      w.append(s0);
      r.push_back(std::move(w));
    }
    add_vertex(points[0], std::move(r));
  }

  std::deque<core::Vertex> queue{0};
  while (!queue.empty()) {
    const core::Vertex v = queue.front();
    queue.pop_front();
    for (std::size_t t = 0; t < g.size(); ++t)
      for (int sign = 0; sign < 2; ++sign) {
        const Letter l = make_letter(t, sign != 0);
        std::vector<ReducedWord> next;
        next.reserve(S);
        std::vector<char> closer(S);
        for (std::size_t s = 0; s < S; ++s) {
          next.push_back(rel[v][s]);
          next.back().append(l);
          closer[s] = next.back().size() < rel[v][s].size();
        }
        bool crosses = false;
        for (std::size_t s = 1; s < S && !crosses; ++s) crosses = closer[s] != closer[0];
        if (!crosses) continue;
        const Element u = mul(hull.vertices[v], Element(gp, std::span<const Letter>(&l, 1)));
        auto it = hull.index.find(key_of(u.letters()));
        core::Vertex w;
        if (it == hull.index.end()) {
          w = add_vertex(u, std::move(next));
          queue.push_back(w);
        } else {
          w = it->second;
        }
        if (sign == 0) edges.push_back({v, w});
      }
  }

  hull.complex = core::FiniteMedianComplex::build(hull.vertices.size(), edges, options);
  for (const auto& p : points) hull.points.push_back(hull.index.at(key_of(p.letters())));
  return hull;
}

}  // namespace mw::raag
