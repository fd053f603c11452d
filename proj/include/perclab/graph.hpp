#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "perclab/bitvec.hpp"
#include "perclab/error.hpp"

namespace perclab {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Vertex vertex;
  EdgeId edge;
};

// Immutable simple undirected graph. Edge ids are positions in the edge list;
// every stored edge has u < v. Adjacency is CSR, each row sorted by neighbor.
class Graph {
 public:
  Graph() = default;

  // Edges may be given in either orientation; they are stored as (min, max).
  // Self-loops, duplicates and out-of-range endpoints are rejected.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ > std::size_t{0xffffffffu}) throw ParameterError("vertex count exceeds 32-bit ids");
    for (auto& e : edges_) {
      if (e.u == e.v) throw InvalidInput("self-loop at vertex " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.v >= n_) throw InvalidInput("edge endpoint " + std::to_string(e.v) + " out of range");
    }
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto [u, v] = edges_[id];
      adjacency_[cursor[u]++] = {v, id};
      adjacency_[cursor[v]++] = {u, id};
    }
    for (std::size_t v = 0; v < n_; ++v) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
      std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
      for (auto it = first; it != last && it + 1 != last; ++it) {
        if (it->vertex == (it + 1)->vertex) {
          throw InvalidInput("duplicate edge {" + std::to_string(std::min<std::size_t>(v, it->vertex)) +
                             "," + std::to_string(std::max<std::size_t>(v, it->vertex)) + "}");
        }
      }
    }
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_arcs() const noexcept { return 2 * edges_.size(); }

  const Edge& edge(EdgeId e) const noexcept { return edges_[e]; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(Vertex v) const noexcept {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::size_t max_degree() const noexcept {
    std::size_t best = 0;
    for (Vertex v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
  }
  std::size_t min_degree() const noexcept {
    if (n_ == 0) return 0;
    std::size_t best = degree(0);
    for (Vertex v = 1; v < n_; ++v) best = std::min(best, degree(v));
    return best;
  }
  double average_degree() const noexcept {
    return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
  }

  // Arc 2e is u->v and arc 2e+1 is v->u for edge e = (u, v), u < v.
  static constexpr std::size_t arc_index(EdgeId e, bool reversed) noexcept {
    return 2 * static_cast<std::size_t>(e) + (reversed ? 1 : 0);
  }
  // Index of the arc from `from` along edge e.
  std::size_t arc_from(Vertex from, EdgeId e) const noexcept {
    return arc_index(e, edges_[e].u != from);
  }

  // FNV-1a over (n, edge list); identifies the base graph in mask headers.
  std::uint64_t hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
      }
    };
    mix(n_);
    mix(edges_.size());
    for (const auto& e : edges_) mix((static_cast<std::uint64_t>(e.u) << 32) | e.v);
    return h;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
};

// Oriented subgraph of a base graph: a bit per arc in the (2e, 2e+1) layout.
// The view does not own the base graph, which must outlive it.
class DiGraphView {
 public:
  DiGraphView(const Graph& base, BitVector arcs) : base_(&base), arcs_(std::move(arcs)) {
    if (arcs_.size() != base.num_arcs()) {
      throw InvalidInput("arc mask has " + std::to_string(arcs_.size()) + " bits, graph has " +
                         std::to_string(base.num_arcs()) + " arcs");
    }
  }

  static DiGraphView full(const Graph& base) { return {base, BitVector(base.num_arcs(), true)}; }
  static DiGraphView empty(const Graph& base) { return {base, BitVector(base.num_arcs(), false)}; }

  const Graph& base() const noexcept { return *base_; }
  const BitVector& arcs() const noexcept { return arcs_; }
  std::size_t num_vertices() const noexcept { return base_->num_vertices(); }

  bool has_arc(Vertex from, EdgeId e) const noexcept { return arcs_.test(base_->arc_from(from, e)); }

  template <typename F>
  void for_each_out(Vertex v, F&& f) const {
    for (const auto& nb : base_->neighbors(v)) {
      if (arcs_.test(base_->arc_from(v, nb.edge))) f(nb.vertex);
    }
  }
  template <typename F>
  void for_each_in(Vertex v, F&& f) const {
    for (const auto& nb : base_->neighbors(v)) {
      if (arcs_.test(base_->arc_from(nb.vertex, nb.edge))) f(nb.vertex);
    }
  }

  // Same base graph with every arc direction exchanged.
  DiGraphView reversed() const {
    BitVector out(arcs_.size());
    for (std::size_t a = 0; a < arcs_.size(); a += 2) {
      out.set(a, arcs_.test(a + 1));
      out.set(a + 1, arcs_.test(a));
    }
    return {*base_, std::move(out)};
  }

 private:
  const Graph* base_;
  BitVector arcs_;
};

// Text edge list: "n m" then m lines "u v" with u < v.
inline Graph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      const auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) throw InvalidInput("edge list: missing header line");
  std::istringstream header(line);
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) throw InvalidInput("edge list: bad header '" + line + "'");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line)) throw InvalidInput("edge list: expected " + std::to_string(m) + " edges");
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) throw InvalidInput("edge list: bad edge line '" + line + "'");
    if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidInput("edge list: vertex out of range in '" + line + "'");
    if (u == v) throw InvalidInput("edge list: self-loop in '" + line + "'");
    if (u > v) throw InvalidInput("edge list: endpoints must satisfy u < v in '" + line + "'");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  if (next_line(line)) throw InvalidInput("edge list: trailing data after " + std::to_string(m) + " edges");
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

// Small named graphs used by tests, oracles and the CLI.
namespace named {

inline Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1)});
  return Graph(n, std::move(edges));
}

inline Graph cycle(std::size_t n) {
  if (n < 3) throw ParameterError("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n)});
  }
  return Graph(n, std::move(edges));
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, std::move(edges));
}

// Star with `leaves` leaves; vertex 0 is the center.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (Vertex i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return Graph(leaves + 1, std::move(edges));
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  const auto shift = static_cast<Vertex>(a.num_vertices());
  for (const auto& e : b.edges()) edges.push_back({e.u + shift, e.v + shift});
  return Graph(a.num_vertices() + b.num_vertices(), std::move(edges));
}

// Two cliques K_k joined by a single bridge edge between vertex k-1 and k.
inline Graph barbell(std::size_t k) {
  Graph g = disjoint_union(complete(k), complete(k));
  std::vector<Edge> edges = g.edges();
  edges.push_back({static_cast<Vertex>(k - 1), static_cast<Vertex>(k)});
  return Graph(2 * k, std::move(edges));
}

}  // namespace named

}  // namespace perclab
