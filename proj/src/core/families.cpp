#include <algorithm>
#include <cctype>
#include <sstream>

#include "medianwalk/median_core.hpp"

namespace mw::core {

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "family spec '" + std::string(s) + "': " + what + " at offset " +
                    std::to_string(pos));
  }
  bool eat(char ch) {
    skip();
    if (pos < s.size() && s[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) fail("expected a family name");
    return std::string(s.substr(start, pos - start));
  }
  std::uint64_t number() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected a natural number");
    return std::stoull(std::string(s.substr(start, pos - start)));
  }

  FamilySpec spec() {
    FamilySpec out;
    const auto name = ident();
    using K = FamilySpec::Kind;
    std::size_t arity = 0;
    if (name == "tree") out.kind = K::Tree, arity = 2;
    else if (name == "path") out.kind = K::Path, arity = 1;
    else if (name == "binary_tree") out.kind = K::BinaryTree, arity = 1;
    else if (name == "grid") out.kind = K::Grid, arity = 2;
    else if (name == "hypercube") out.kind = K::Hypercube, arity = 1;
    else if (name == "median_closure") out.kind = K::MedianClosure, arity = 3;
    else if (name == "product") out.kind = K::Product;
    else fail("unknown family '" + name + "'");
    if (!eat('(')) fail("expected '('");
    if (out.kind == K::Product) {
      out.factors.push_back(spec());
      while (eat(',')) out.factors.push_back(spec());
      if (out.factors.size() < 2) fail("product needs at least two factors");
    } else {
      for (std::size_t i = 0; i < arity; ++i) {
        if (i > 0 && !eat(',')) fail("expected ','");
        out.params.push_back(number());
      }
    }
    if (!eat(')')) fail("expected ')'");
    return out;
  }
};

struct RawGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

void check_budget(std::uint64_t n, const FamilyOptions& options) {
  if (n > options.max_vertices)
    throw Error(ErrorCode::SizeBudgetExceeded,
                std::to_string(n) + " vertices exceed budget " +
                    std::to_string(options.max_vertices));
}

RawGraph grid_graph(std::uint64_t p, std::uint64_t q) {
  RawGraph g;
  g.n = p * q;
  for (std::uint64_t i = 0; i < p; ++i)
    for (std::uint64_t j = 0; j < q; ++j) {
      auto v = static_cast<Vertex>(i * q + j);
      if (i + 1 < p) g.edges.push_back({v, static_cast<Vertex>(v + q)});
      if (j + 1 < q) g.edges.push_back({v, static_cast<Vertex>(v + 1)});
    }
  return g;
}

RawGraph median_closure_graph(std::uint64_t seed, unsigned dim, std::uint64_t points,
                              const FamilyOptions& options) {
  if (dim == 0 || dim > 20)
    throw Error(ErrorCode::InvalidArgument, "median_closure dimension must be in [1,20]");
  const std::uint64_t cube = std::uint64_t{1} << dim;
  if (points == 0 || points > cube)
    throw Error(ErrorCode::InvalidArgument, "median_closure point count out of range");
  Rng rng(seed);
  std::vector<char> member(cube, 0);
  std::vector<std::uint32_t> pts;
  while (pts.size() < points) {
    auto x = static_cast<std::uint32_t>(uniform_index(rng, cube));
    if (!member[x]) {
      member[x] = 1;
      pts.push_back(x);
    }
  }
  // Close under coordinatewise majority; each new point is combined with all
  // earlier pairs exactly once.
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const auto a = pts[i], b = pts[j], c = pts[k];
        const auto m = (a & b) | (b & c) | (a & c);
        if (!member[m]) {
          member[m] = 1;
          pts.push_back(m);
          check_budget(pts.size(), options);
        }
      }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<std::uint32_t> index(cube, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<std::uint32_t>(i);

  // a ~ b iff no third point lies coordinatewise between them. Translating by a,
  // "c between a and b" becomes "c^a is a submask of b^a"; a subset-sum
  // transform counts the submasks.
  RawGraph g;
  g.n = pts.size();
  std::vector<std::uint32_t> count(cube);
  for (std::size_t ai = 0; ai < pts.size(); ++ai) {
    const auto a = pts[ai];
    std::fill(count.begin(), count.end(), 0);
    for (auto c : pts)
      if (c != a) ++count[c ^ a];
    for (unsigned bit = 0; bit < dim; ++bit)
      for (std::uint64_t mask = 0; mask < cube; ++mask)
        if (mask >> bit & 1) count[mask] += count[mask ^ (std::uint64_t{1} << bit)];
    for (std::size_t bi = ai + 1; bi < pts.size(); ++bi)
      if (count[pts[bi] ^ a] == 1)
        g.edges.push_back({static_cast<Vertex>(ai), static_cast<Vertex>(bi)});
  }
  return g;
}

RawGraph raw_product(const RawGraph& a, const RawGraph& b) {
  RawGraph g;
  g.n = a.n * b.n;
  for (auto e : a.edges)
    for (std::size_t y = 0; y < b.n; ++y)
      g.edges.push_back({static_cast<Vertex>(e.u * b.n + y), static_cast<Vertex>(e.v * b.n + y)});
  for (std::size_t x = 0; x < a.n; ++x)
    for (auto e : b.edges)
      g.edges.push_back({static_cast<Vertex>(x * b.n + e.u), static_cast<Vertex>(x * b.n + e.v)});
  return g;
}

RawGraph raw_family(const FamilySpec& spec, const FamilyOptions& options) {
  using K = FamilySpec::Kind;
  const auto& p = spec.params;
  switch (spec.kind) {
    case K::Path: {
      if (p.at(0) == 0) throw Error(ErrorCode::InvalidArgument, "path needs a vertex");
      check_budget(p[0], options);
      return grid_graph(p[0], 1);
    }
    case K::Grid: {
      if (p.at(0) == 0 || p.at(1) == 0) throw Error(ErrorCode::InvalidArgument, "empty grid");
      check_budget(p[0] * p[1], options);
      return grid_graph(p[0], p[1]);
    }
    case K::Hypercube: {
      if (p.at(0) > 20) throw Error(ErrorCode::SizeBudgetExceeded, "hypercube dimension");
      const std::uint64_t n = std::uint64_t{1} << p[0];
      check_budget(n, options);
      RawGraph g;
      g.n = n;
      for (std::uint64_t v = 0; v < n; ++v)
        for (unsigned bit = 0; bit < p[0]; ++bit)
          if (!(v >> bit & 1))
            g.edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v | (1u << bit))});
      return g;
    }
    case K::Tree: {
      const auto seed = p.at(0), size = p.at(1);
      if (size == 0) throw Error(ErrorCode::InvalidArgument, "tree needs a vertex");
      check_budget(size, options);
      Rng rng(seed);
      RawGraph g;
      g.n = size;
      for (std::uint64_t v = 1; v < size; ++v)
        g.edges.push_back({static_cast<Vertex>(uniform_index(rng, v)), static_cast<Vertex>(v)});
      return g;
    }
    case K::BinaryTree: {
      if (p.at(0) > 20) throw Error(ErrorCode::SizeBudgetExceeded, "binary tree depth");
      const std::uint64_t n = (std::uint64_t{2} << p[0]) - 1;
      check_budget(n, options);
      RawGraph g;
      g.n = n;
      for (std::uint64_t v = 1; v < n; ++v)
        g.edges.push_back({static_cast<Vertex>((v - 1) / 2), static_cast<Vertex>(v)});
      return g;
    }
    case K::Product: {
      RawGraph g = raw_family(spec.factors.at(0), options);
      for (std::size_t i = 1; i < spec.factors.size(); ++i) {
        auto f = raw_family(spec.factors[i], options);
        check_budget(static_cast<std::uint64_t>(g.n) * f.n, options);
        g = raw_product(g, f);
      }
      return g;
    }
    case K::MedianClosure:
      return median_closure_graph(p.at(0), static_cast<unsigned>(p.at(1)), p.at(2), options);
  }
  throw Error(ErrorCode::Internal, "unhandled family kind");
}

}  // namespace

FamilySpec FamilySpec::parse(std::string_view text) {
  Parser parser{text};
  auto spec = parser.spec();
  parser.skip();
  if (parser.pos != text.size()) parser.fail("trailing input");
  return spec;
}

std::string FamilySpec::to_string() const {
  using K = Kind;
  std::ostringstream os;
  switch (kind) {
    case K::Tree: os << "tree"; break;
    case K::Path: os << "path"; break;
    case K::BinaryTree: os << "binary_tree"; break;
    case K::Grid: os << "grid"; break;
    case K::Hypercube: os << "hypercube"; break;
    case K::Product: os << "product"; break;
    case K::MedianClosure: os << "median_closure"; break;
  }
  os << '(';
  if (kind == K::Product) {
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factors[i].to_string();
  } else {
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
  }
  os << ')';
  return os.str();
}

FiniteMedianComplex generate_family(const FamilySpec& spec, const FamilyOptions& options) {
  auto g = raw_family(spec, options);
  auto build = options.build;
  build.max_vertices = std::max(build.max_vertices, options.max_vertices);
  return FiniteMedianComplex::build(g.n, g.edges, build);
}

FiniteMedianComplex product(const FiniteMedianComplex& a, const FiniteMedianComplex& b,
                            const BuildOptions& options) {
  RawGraph ra{a.vertex_count(), a.edges()};
  RawGraph rb{b.vertex_count(), b.edges()};
  auto g = raw_product(ra, rb);
  return FiniteMedianComplex::build(g.n, g.edges, options);
}

}  // namespace mw::core
