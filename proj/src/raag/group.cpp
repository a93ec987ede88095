#include <algorithm>
#include <cctype>
#include <sstream>

#include "medianwalk/raag.hpp"

namespace mw::raag {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::islower(c) || std::isdigit(c) || ch == '_';
  });
}

GraphPtr build(std::vector<std::string> names,
               const std::vector<std::pair<std::string, std::string>>& edges) {
  return std::make_shared<DefiningGraph>(std::move(names), edges);
}

std::vector<std::string> numbered(const std::string& stem, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<std::string> alphabetic(std::size_t k) {
  if (k > 26) return numbered("g", k);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

}  // namespace

DefiningGraph::DefiningGraph(std::vector<std::string> names,
                             const std::vector<std::pair<std::string, std::string>>& edges)
    : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidArgument, "defining graph needs a generator");
  if (names_.size() > kMaxGenerators)
    throw Error(ErrorCode::InvalidArgument, "at most 64 generators are supported");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_name(names_[i]))
      throw Error(ErrorCode::InvalidArgument, "bad generator name '" + names_[i] + "'", names_[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j])
        throw Error(ErrorCode::InvalidArgument, "duplicate generator '" + names_[i] + "'", names_[i]);
  }
  link_.assign(names_.size(), 0);
  for (const auto& [u, v] : edges) {
    auto a = index(u), b = index(v);
    if (!a) throw Error(ErrorCode::UnknownGenerator, "unknown generator '" + u + "'", u);
    if (!b) throw Error(ErrorCode::UnknownGenerator, "unknown generator '" + v + "'", v);
    if (*a == *b) throw Error(ErrorCode::InvalidArgument, "self-loop at '" + u + "'", u);
    link_[*a] |= 1ULL << *b;
    link_[*b] |= 1ULL << *a;
  }
  std::ostringstream os;
  os << "raag(" << names_.size() << " generators";
  std::size_t e = 0;
  for (auto l : link_) e += std::popcount(l);
  os << ", " << e / 2 << " edges)";
  label_ = os.str();
}

std::optional<std::size_t> DefiningGraph::index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

GraphPtr DefiningGraph::named(const std::string& spec) {
  if (spec == "F2") return build({"a", "b"}, {});
  if (spec == "Z2") return build({"a", "b"}, {{"a", "b"}});
  if (spec == "C5") return named("cycle(5)");
  auto open = spec.find('('), close = spec.rfind(')');
  if (open == std::string::npos || close != spec.size() - 1)
    throw Error(ErrorCode::ParseError, "unknown defining graph '" + spec + "'", spec);
  const auto kind = spec.substr(0, open);
  std::size_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoul(spec.substr(open + 1, close - open - 1), &used);
    if (used != close - open - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad generator count in '" + spec + "'", spec);
  }
  if (k == 0 || k > kMaxGenerators)
    throw Error(ErrorCode::InvalidArgument, "generator count out of range in '" + spec + "'");
  std::vector<std::pair<std::string, std::string>> edges;
  if (kind == "free") return build(alphabetic(k), {});
  if (kind == "abelian") {
    auto names = alphabetic(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) edges.emplace_back(names[i], names[j]);
    return build(names, edges);
  }
  if (kind == "cycle" || kind == "path") {
    auto names = numbered("v", k);
    for (std::size_t i = 0; i + 1 < k; ++i) edges.emplace_back(names[i], names[i + 1]);
    if (kind == "cycle") {
      if (k < 4) throw Error(ErrorCode::InvalidArgument, "cycle defining graphs need k >= 4");
      edges.emplace_back(names[k - 1], names[0]);
    }
    return build(names, edges);
  }
  throw Error(ErrorCode::ParseError, "unknown defining graph '" + spec + "'", spec);
}

GraphPtr DefiningGraph::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "defining graph must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "generators" && it.key() != "edges")
      throw Error(ErrorCode::SchemaViolation, "unknown key '" + it.key() + "'", it.key());
  if (!j.contains("generators") || !j["generators"].is_array())
    throw Error(ErrorCode::SchemaViolation, "'generators' must be an array", "generators");
  std::vector<std::string> names;
  for (const auto& n : j["generators"]) {
    if (!n.is_string()) throw Error(ErrorCode::SchemaViolation, "generator names are strings", "generators");
    names.push_back(n.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw Error(ErrorCode::SchemaViolation, "'edges' must be an array", "edges");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw Error(ErrorCode::SchemaViolation, "edge must be a pair of names", "edges");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  return std::make_shared<DefiningGraph>(std::move(names), edges);
}

nlohmann::json DefiningGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b)
      if (commute(a, b)) edges.push_back({names_[a], names_[b]});
  return {{"generators", names_}, {"edges", edges}};
}

void check_same_graph(const GraphPtr& a, const GraphPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b))
    throw Error(ErrorCode::DefiningGraphMismatch, "elements belong to different groups");
}

// ---- words --------------------------------------------------------------------

void ReducedWord::append(Letter l) {
  const std::size_t s = letter_gen(l);
  if (s >= g_->size()) throw Error(ErrorCode::UnknownGenerator, "letter out of range");
  const std::uint64_t lk = g_->link(s);
  for (std::size_t i = w_.size(); i-- > 0;) {
    const auto t = letter_gen(w_[i]);
    if (t == s) {
      if (w_[i] == invert(l)) {
        w_.erase(w_.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
      break;
    }
    if (!((lk >> t) & 1)) break;
  }
  w_.push_back(l);
}

std::vector<Letter> canonical(const DefiningGraph& g, std::span<const Letter> w) {
  const std::size_t n = w.size(), k = g.size();
  std::vector<std::vector<std::uint32_t>> succ(n);
  std::vector<std::uint32_t> indeg(n, 0);
  std::vector<std::int64_t> last(k, -1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto s = letter_gen(w[j]);
    const std::uint64_t dep = g.all() & ~g.link(s);
    for (std::size_t t = 0; t < k; ++t)
      if (((dep >> t) & 1) && last[t] >= 0) {
        succ[static_cast<std::size_t>(last[t])].push_back(static_cast<std::uint32_t>(j));
        ++indeg[j];
      }
    last[s] = static_cast<std::int64_t>(j);
  }
  // Available pieces never share a generator, so one slot per generator.
  std::vector<std::int64_t> avail(k, -1);
  for (std::size_t j = 0; j < n; ++j)
    if (indeg[j] == 0) avail[letter_gen(w[j])] = static_cast<std::int64_t>(j);
  std::vector<Letter> out;
  out.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = k;
    for (std::size_t t = 0; t < k; ++t)
      if (avail[t] >= 0 && (best == k || w[avail[t]] < w[avail[best]])) best = t;
    const auto j = static_cast<std::size_t>(avail[best]);
    avail[best] = -1;
    out.push_back(w[j]);
    for (auto s : succ[j])
      if (--indeg[s] == 0) avail[letter_gen(w[s])] = s;
  }
  return out;
}

Element::Element(GraphPtr g, std::span<const Letter> word) : g_(std::move(g)) {
  ReducedWord r(g_);
  for (auto l : word) {
    if (letter_gen(l) >= g_->size())
      throw Error(ErrorCode::UnknownGenerator, "letter code " + std::to_string(l) + " out of range");
    r.append(l);
  }
  w_ = canonical(*g_, r.letters());
}

bool operator==(const Element& a, const Element& b) {
  if (a.g_ != b.g_ && !(a.g_ && b.g_ && *a.g_ == *b.g_)) return false;
  return a.w_ == b.w_;
}

Element Element::parse(GraphPtr g, std::string_view text) {
  std::vector<Letter> word;
  bool single_chars = true;
  for (std::size_t i = 0; i < g->size(); ++i) single_chars &= g->name(i).size() == 1;

  auto resolve = [&](std::string tok, bool inverse) {
    if (auto i = g->index(tok)) {
      word.push_back(make_letter(*i, inverse));
      return true;
    }
    std::string lower = tok;
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower != tok)
      if (auto i = g->index(lower)) {
        word.push_back(make_letter(*i, !inverse));
        return true;
      }
    return false;
  };

  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) {
    if (tok == "1" || tok == "e") continue;
    bool inverse = false;
    for (std::string_view suffix : {"^-1", "⁻¹"})
      if (tok.size() > suffix.size() && tok.compare(tok.size() - suffix.size(), suffix.size(), suffix) == 0) {
        tok.resize(tok.size() - suffix.size());
        inverse = true;
        break;
      }
    if (resolve(tok, inverse)) continue;
    bool ok = single_chars && !inverse;
    if (ok) {
      std::vector<Letter> saved = word;
      for (char ch : tok)
        if (!resolve(std::string(1, ch), false)) {
          ok = false;
          break;
        }
      if (!ok) word = saved;
    }
    if (!ok) throw Error(ErrorCode::UnknownGenerator, "unknown generator '" + tok + "'", tok);
  }
  return Element(std::move(g), word);
}

std::string Element::to_string() const {
  if (w_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (i) out += ' ';
    std::string name = g_->name(letter_gen(w_[i]));
    if (letter_inverse(w_[i]))
      for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out += name;
  }
  return out;
}

// ---- group operations -------------------------------------------------------------

Element nf(GraphPtr g, std::span<const Letter> word) { return Element(std::move(g), word); }

Element mul(const Element& a, const Element& b) {
  check_same_graph(a.graph(), b.graph());
  ReducedWord r(a.graph());
  r.append(a.letters());
  r.append(b.letters());
  return Element(a.graph(), r.letters());
}

namespace {

std::vector<Letter> inverse_word(std::span<const Letter> w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (auto& l : out) l = invert(l);
  return out;
}

// Heap with removable minimal pieces.
struct Peeler {
  std::vector<Letter> w;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<std::uint32_t> indeg;
  std::vector<std::int64_t> avail;  // per generator

  Peeler(const DefiningGraph& g, std::span<const Letter> word) : w(word.begin(), word.end()) {
    const std::size_t n = w.size(), k = g.size();
    succ.resize(n);
    indeg.assign(n, 0);
    avail.assign(k, -1);
    std::vector<std::int64_t> last(k, -1);
    for (std::size_t j = 0; j < n; ++j) {
      const auto s = letter_gen(w[j]);
      const std::uint64_t dep = g.all() & ~g.link(s);
      for (std::size_t t = 0; t < k; ++t)
        if (((dep >> t) & 1) && last[t] >= 0) {
          succ[static_cast<std::size_t>(last[t])].push_back(static_cast<std::uint32_t>(j));
          ++indeg[j];
        }
      last[s] = static_cast<std::int64_t>(j);
    }
    for (std::size_t j = 0; j < n; ++j)
      if (indeg[j] == 0) avail[letter_gen(w[j])] = static_cast<std::int64_t>(j);
  }
  // Minimal piece carrying exactly this letter, or -1.
  std::int64_t minimal(Letter l) const {
    const auto j = avail[letter_gen(l)];
    return j >= 0 && w[static_cast<std::size_t>(j)] == l ? j : -1;
  }
  void remove(std::size_t j) {
    avail[letter_gen(w[j])] = -1;
    for (auto s : succ[j])
      if (--indeg[s] == 0) avail[letter_gen(w[s])] = s;
  }
};

}  // namespace

Element inv(const Element& a) { return Element(a.graph(), inverse_word(a.letters())); }

std::uint64_t dist(const Element& a, const Element& b) {
  check_same_graph(a.graph(), b.graph());
  ReducedWord r(a.graph());
  r.append(inverse_word(a.letters()));
  r.append(b.letters());
  return r.size();
}

Element median_raag(const Element& x, const Element& y, const Element& z) {
  check_same_graph(x.graph(), y.graph());
  check_same_graph(x.graph(), z.graph());
  const auto& g = *x.graph();
  ReducedWord u(x.graph()), v(x.graph());
  const auto xi = inverse_word(x.letters());
  u.append(xi);
  u.append(y.letters());
  v.append(xi);
  v.append(z.letters());
  // The median is x times the largest common prefix of x^-1 y and x^-1 z,
  // peeled one common minimal piece at a time.
  Peeler pu(g, u.letters()), pv(g, v.letters());
  std::vector<Letter> common;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t code = 0; code < 2 * g.size(); ++code) {
      const auto l = static_cast<Letter>(code);
      const auto a = pu.minimal(l), b = pv.minimal(l);
      if (a >= 0 && b >= 0) {
        pu.remove(static_cast<std::size_t>(a));
        pv.remove(static_cast<std::size_t>(b));
        common.push_back(l);
        progress = true;
      }
    }
  }
  ReducedWord m(x.graph());
  m.append(x.letters());
  m.append(common);
  return Element(x.graph(), m.letters());
}

std::uint64_t gromov_raag(const Element& x, const Element& y, const Element& o) {
  return dist(o, median_raag(x, y, o));
}

}  // namespace mw::raag
