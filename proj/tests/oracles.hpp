#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library beyond the Graph container.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/rng.hpp"

namespace oracle {

using perclab::Graph;

// Transitive closure by Floyd-Warshall over an explicit arc list.
inline std::vector<std::vector<bool>> closure(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) r[v][v] = true;
  for (auto [a, b] : arcs) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

// Arcs kept by an oriented mask: bit 2e is u->v, bit 2e+1 is v->u.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs_of(const Graph& g, std::uint64_t mask) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
    const auto ed = g.edge(e);
    if (mask >> (2 * e) & 1) out.emplace_back(ed.u, ed.v);
    if (mask >> (2 * e + 1) & 1) out.emplace_back(ed.v, ed.u);
  }
  return out;
}

// Undirected edge mask as a symmetric arc list.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_of(const Graph& g, std::uint64_t mask) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
    if (!(mask >> e & 1)) continue;
    const auto ed = g.edge(e);
    out.emplace_back(ed.u, ed.v);
    out.emplace_back(ed.v, ed.u);
  }
  return out;
}

inline double weight(double p, std::size_t kept, std::size_t total) {
  return std::pow(p, static_cast<double>(kept)) * std::pow(1.0 - p, static_cast<double>(total - kept));
}

inline std::size_t row_count(const std::vector<bool>& row) { return static_cast<std::size_t>(std::count(row.begin(), row.end(), true)); }

inline std::size_t column_count(const std::vector<std::vector<bool>>& r, std::size_t v) {
  std::size_t c = 0;
  for (const auto& row : r) c += row[v];
  return c;
}

// Sizes of all SCCs (mutual reachability classes), descending.
inline std::vector<std::size_t> scc_sizes(const std::vector<std::vector<bool>>& r) {
  const std::size_t n = r.size();
  std::vector<bool> done(n, false);
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    if (done[v]) continue;
    std::size_t s = 0;
    for (std::size_t w = 0; w < n; ++w) {
      if (r[v][w] && r[w][v]) {
        done[w] = true;
        ++s;
      }
    }
    sizes.push_back(s);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

// P(|C(v)| >= k) in G(p) by enumeration, plain summation.
inline double component_tail(const Graph& g, double p, std::uint32_t v, std::size_t k) {
  const std::size_t m = g.num_edges();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const auto r = closure(g.num_vertices(), edges_of(g, mask));
    if (row_count(r[v]) >= k) total += weight(p, static_cast<std::size_t>(std::popcount(mask)), m);
  }
  return total;
}

// P(|C+(v)| >= k) (forward) or P(|C-(v)| >= k) in D_G(p).
inline double fan_tail(const Graph& g, double p, std::uint32_t v, std::size_t k, bool forward) {
  const std::size_t a = 2 * g.num_edges();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a); ++mask) {
    const auto r = closure(g.num_vertices(), arcs_of(g, mask));
    const std::size_t size = forward ? row_count(r[v]) : column_count(r, v);
    if (size >= k) total += weight(p, static_cast<std::size_t>(std::popcount(mask)), a);
  }
  return total;
}

// E[|SCC1|] and E[|C1|] by enumeration.
inline double expected_largest_scc(const Graph& g, double p) {
  const std::size_t a = 2 * g.num_edges();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a); ++mask) {
    const auto r = closure(g.num_vertices(), arcs_of(g, mask));
    total += weight(p, static_cast<std::size_t>(std::popcount(mask)), a) * static_cast<double>(scc_sizes(r)[0]);
  }
  return total;
}

inline double expected_largest_component(const Graph& g, double p) {
  const std::size_t m = g.num_edges();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const auto r = closure(g.num_vertices(), edges_of(g, mask));
    total += weight(p, static_cast<std::size_t>(std::popcount(mask)), m) * static_cast<double>(scc_sizes(r)[0]);
  }
  return total;
}

// min over S with ceil(eps n) <= |S| <= n/2 of e(S, S^c) / |S|, enumerating
// subsets as bool vectors. Returns +inf when no size is admissible.
inline double expansion(const Graph& g, double eps) {
  const std::size_t n = g.num_vertices();
  const auto lo = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(n)));
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> in(n);
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    std::size_t size = 0;
    for (std::size_t v = 0; v < n; ++v) {
      in[v] = s >> v & 1;
      size += in[v];
    }
    if (size < std::max<std::size_t>(lo, 1) || 2 * size > n) continue;
    std::size_t cut = 0;
    for (const auto& e : g.edges()) cut += in[e.u] != in[e.v];
    best = std::min(best, static_cast<double>(cut) / static_cast<double>(size));
  }
  return best;
}

// Random simple graph on n vertices, each pair present with probability q.
inline Graph random_graph(std::size_t n, double q, perclab::Rng& rng) {
  std::vector<perclab::Edge> edges;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(q)) edges.push_back({u, v});
  return Graph(n, edges);
}

// Fixed family of small connected test graphs, each with at most 8 edges.
inline std::vector<Graph> small_family() {
  namespace nm = perclab::named;
  return {nm::path(2), nm::path(3), nm::path(4), nm::path(5), nm::path(9), nm::cycle(3), nm::cycle(4), nm::cycle(5),
          nm::cycle(8), nm::complete(3), nm::complete(4), nm::star(3), nm::star(5), nm::star(8)};
}

}  // namespace oracle
