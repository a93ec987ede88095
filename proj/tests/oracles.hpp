#pragma once

// Test-only brute-force oracles. Nothing here calls into the library paths
// that it is used to check.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::vector<std::vector<std::uint32_t>> adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  }
};

inline std::vector<std::vector<int>> all_pairs(const Graph& g) {
  auto adj = g.adjacency();
  std::vector<std::vector<int>> d(g.n, std::vector<int>(g.n, -1));
  for (std::size_t s = 0; s < g.n; ++s) {
    std::deque<std::uint32_t> q{static_cast<std::uint32_t>(s)};
    d[s][s] = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      for (auto w : adj[v])
        if (d[s][w] < 0) {
          d[s][w] = d[s][v] + 1;
          q.push_back(w);
        }
    }
  }
  return d;
}

// Number of classes of the transitive closure of the Djokovic-Winkler relation,
// computed over all edge pairs with union-find.
inline std::size_t theta_class_count(const Graph& g) {
  auto d = all_pairs(g);
  std::vector<std::size_t> parent(g.edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
      auto [u, v] = g.edges[i];
      auto [x, y] = g.edges[j];
      if (d[u][x] + d[v][y] != d[u][y] + d[v][x]) parent[find(i)] = find(j);
    }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < g.edges.size(); ++i) roots.insert(find(i));
  return roots.size();
}

// Iterated interval closure.
inline std::vector<std::uint32_t> hull_by_intervals(const std::vector<std::vector<int>>& d,
                                                    std::vector<std::uint32_t> s) {
  const std::size_t n = d.size();
  std::vector<char> in(n, 0);
  for (auto v : s) in[v] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint32_t> cur;
    for (std::uint32_t v = 0; v < n; ++v)
      if (in[v]) cur.push_back(v);
    for (auto a : cur)
      for (auto b : cur)
        for (std::uint32_t w = 0; w < n; ++w)
          if (!in[w] && d[a][w] + d[w][b] == d[a][b]) {
            in[w] = 1;
            grew = true;
          }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < n; ++v)
    if (in[v]) out.push_back(v);
  return out;
}

// Gromov four-point defect, doubled, maximised over all quadruples.
inline long long doubled_delta(const std::vector<std::vector<int>>& d) {
  const std::size_t n = d.size();
  long long best = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e) {
          long long s[3] = {d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]};
          std::sort(s, s + 3);
          best = std::max(best, s[2] - s[1]);
        }
  return best;
}

// Free partially commutative group words: letters 2*gen + inverse. Explores every
// word reachable by swapping adjacent commuting letters and deleting adjacent
// inverse pairs, and returns the lexicographically least word of minimal length.
inline std::vector<std::uint8_t> rewrite_normal_form(
    const std::vector<std::uint8_t>& word, const std::vector<std::vector<bool>>& commute) {
  using W = std::vector<std::uint8_t>;
  std::set<W> seen{word};
  std::deque<W> queue{word};
  W best = word;
  while (!queue.empty()) {
    W w = queue.front();
    queue.pop_front();
    if (w.size() < best.size() || (w.size() == best.size() && w < best)) best = w;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const int a = w[i] >> 1, b = w[i + 1] >> 1;
      if ((w[i] ^ 1) == w[i + 1]) {
        W v = w;
        v.erase(v.begin() + static_cast<long>(i), v.begin() + static_cast<long>(i) + 2);
        if (seen.insert(v).second) queue.push_back(std::move(v));
      } else if (a != b && commute[a][b]) {
        W v = w;
        std::swap(v[i], v[i + 1]);
        if (seen.insert(v).second) queue.push_back(std::move(v));
      }
    }
  }
  return best;
}

// Exact law of d(Z_n o, o) for the simple random walk on the free group of
// rank r: a birth-death chain on N, 0 -> 1 surely, k -> k+1 with probability
// (2r-1)/2r. Returns {mean, variance}.
inline std::pair<double, double> free_group_distance_moments(std::size_t n, std::size_t rank = 2) {
  const double up = (2.0 * rank - 1.0) / (2.0 * rank), down = 1.0 - up;
  std::vector<double> p(n + 2, 0.0), q(n + 2, 0.0);
  p[0] = 1.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::fill(q.begin(), q.begin() + static_cast<long>(std::min(n + 2, step + 3)), 0.0);
    q[1] += p[0];
    for (std::size_t k = 1; k <= step; ++k) {
      q[k + 1] += up * p[k];
      q[k - 1] += down * p[k];
    }
    std::swap(p, q);
  }
  double m = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    m += static_cast<double>(k) * p[k];
    m2 += static_cast<double>(k) * static_cast<double>(k) * p[k];
  }
  return {m, m2 - m * m};
}

}  // namespace oracle
