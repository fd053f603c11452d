#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

// Induced subgraph on the vertices within graph distance `radius` of `root`.
// Local vertex 0 is the root; `original` maps local ids back to the parent
// graph and `distance` holds each vertex's distance from the root.
struct RootedBall {
  Vertex root = 0;
  std::size_t radius = 0;
  std::vector<Vertex> original;
  std::vector<std::uint32_t> distance;
  Graph graph;

  std::size_t size() const noexcept { return original.size(); }
  bool is_tree() const noexcept { return graph.num_edges() + 1 == graph.num_vertices(); }
};

inline RootedBall ball(const Graph& g, Vertex root, std::size_t radius) {
  RootedBall b;
  b.root = root;
  b.radius = radius;
  // Sparse bookkeeping so a small ball in a huge graph stays cheap.
  std::map<Vertex, std::uint32_t> local;
  b.original.push_back(root);
  b.distance.push_back(0);
  local[root] = 0;
  for (std::size_t head = 0; head < b.original.size(); ++head) {
    const std::uint32_t dist = b.distance[head];
    if (dist >= radius) continue;
    for (const auto& nb : g.neighbors(b.original[head])) {
      if (local.contains(nb.vertex)) continue;
      local[nb.vertex] = static_cast<std::uint32_t>(b.original.size());
      b.original.push_back(nb.vertex);
      b.distance.push_back(dist + 1);
    }
  }
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < b.original.size(); ++i) {
    for (const auto& nb : g.neighbors(b.original[i])) {
      auto it = local.find(nb.vertex);
      if (it != local.end() && it->second > i) edges.push_back({i, it->second});
    }
  }
  b.graph = Graph(b.original.size(), std::move(edges));
  return b;
}

// Canonical byte key from color refinement seeded with distance-to-root.
// Each round replaces a color with (old color, sorted multiset of neighbor
// colors); colors are renamed by the lexicographic rank of these signatures,
// so the names never depend on vertex ids. The key serializes the signature
// table and class counts of every round.
//
// For trees the root's color after `radius` rounds determines the rooted tree,
// so isomorphic tree balls always share a key and non-isomorphic ones never do.
// For balls with cycles the key is 1-WL: isomorphic balls share keys, but some
// non-isomorphic regular-like balls can collide.
inline std::string canonical_key(const RootedBall& b) {
  const std::size_t n = b.size();
  std::vector<std::uint32_t> color(b.distance.begin(), b.distance.end());
  std::string key = "B" + std::to_string(n) + "/" + std::to_string(b.graph.num_edges()) + "|";
  auto append_u32 = [&key](std::uint32_t x) {
    key += std::to_string(x);
    key += ',';
  };
  const std::size_t rounds = b.radius + 1;
  for (std::size_t round = 0; round < rounds; ++round) {
    std::vector<std::vector<std::uint32_t>> sig(n);
    for (Vertex v = 0; v < n; ++v) {
      sig[v].push_back(color[v]);
      std::vector<std::uint32_t> nbr;
      for (const auto& nb : b.graph.neighbors(v)) nbr.push_back(color[nb.vertex]);
      std::sort(nbr.begin(), nbr.end());
      sig[v].insert(sig[v].end(), nbr.begin(), nbr.end());
    }
    std::vector<std::vector<std::uint32_t>> table(sig);
    std::sort(table.begin(), table.end());
    std::vector<std::size_t> counts;
    std::vector<std::vector<std::uint32_t>> distinct;
    for (const auto& s : table) {
      if (distinct.empty() || distinct.back() != s) {
        distinct.push_back(s);
        counts.push_back(0);
      }
      ++counts.back();
    }
    for (Vertex v = 0; v < n; ++v) {
      color[v] = static_cast<std::uint32_t>(
          std::lower_bound(distinct.begin(), distinct.end(), sig[v]) - distinct.begin());
    }
    key += "r";
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      key += '[';
      for (auto x : distinct[i]) append_u32(x);
      key += ']';
      key += 'x';
      append_u32(static_cast<std::uint32_t>(counts[i]));
    }
    key += "|root=";
    append_u32(color[0]);
  }
  return key;
}

}  // namespace perclab
