#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "perclab/bitvec.hpp"
#include "perclab/error.hpp"
#include "perclab/graph.hpp"
#include "perclab/union_find.hpp"

namespace perclab {

// Partition of the vertex set into blocks ordered by size (descending), ties
// broken by the smallest vertex id contained in the block.
struct Partition {
  std::vector<std::size_t> sizes;
  std::vector<Vertex> smallest;
  std::vector<std::uint32_t> block_of;

  std::size_t count() const noexcept { return sizes.size(); }
  std::size_t size_of(std::size_t i) const noexcept { return i < sizes.size() ? sizes[i] : 0; }

  std::vector<Vertex> members(std::size_t i) const {
    std::vector<Vertex> out;
    out.reserve(size_of(i));
    for (Vertex v = 0; v < block_of.size(); ++v) {
      if (block_of[v] == i) out.push_back(v);
    }
    return out;
  }

  std::vector<std::vector<Vertex>> blocks() const {
    std::vector<std::vector<Vertex>> out(count());
    for (std::size_t i = 0; i < count(); ++i) out[i].reserve(sizes[i]);
    for (Vertex v = 0; v < block_of.size(); ++v) out[block_of[v]].push_back(v);
    return out;
  }
};

namespace detail {

// Relabels arbitrary block ids 0..k-1 into the canonical Partition order.
inline Partition canonical_partition(std::span<const std::uint32_t> raw, std::size_t k) {
  constexpr Vertex kNone = std::numeric_limits<Vertex>::max();
  std::vector<std::size_t> size(k, 0);
  std::vector<Vertex> smallest(k, kNone);
  for (Vertex v = 0; v < raw.size(); ++v) {
    ++size[raw[v]];
    if (smallest[raw[v]] == kNone) smallest[raw[v]] = v;
  }
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (size[a] != size[b]) return size[a] > size[b];
    return smallest[a] < smallest[b];
  });
  std::vector<std::uint32_t> rank(k);
  Partition p;
  p.sizes.resize(k);
  p.smallest.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    rank[order[i]] = i;
    p.sizes[i] = size[order[i]];
    p.smallest[i] = smallest[order[i]];
  }
  p.block_of.resize(raw.size());
  for (Vertex v = 0; v < raw.size(); ++v) p.block_of[v] = rank[raw[v]];
  return p;
}

struct RawScc {
  std::vector<std::uint32_t> label;  // emission order: sinks of the condensation first
  std::size_t count = 0;
};

// Iterative Tarjan. Components are numbered in the order they are completed,
// which is a reverse topological order of the condensation.
inline RawScc tarjan(const DiGraphView& d) {
  const std::size_t n = d.num_vertices();
  const Graph& g = d.base();
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<Vertex> stack;
  struct Frame {
    Vertex v;
    std::uint32_t next;
  };
  std::vector<Frame> calls;
  RawScc out;
  out.label.assign(n, 0);
  std::uint32_t counter = 0;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    calls.push_back({root, 0});
    while (!calls.empty()) {
      Frame& frame = calls.back();
      const Vertex v = frame.v;
      const auto nbrs = g.neighbors(v);
      bool descended = false;
      while (frame.next < nbrs.size()) {
        const Neighbor nb = nbrs[frame.next++];
        if (!d.has_arc(v, nb.edge)) continue;
        const Vertex w = nb.vertex;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        const auto id = static_cast<std::uint32_t>(out.count++);
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.label[w] = id;
        } while (w != v);
      }
      calls.pop_back();
      if (!calls.empty()) {
        const Vertex parent = calls.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return out;
}

}  // namespace detail

// Connected components of the subgraph keeping edge e iff kept[e].
inline Partition connected_components(const Graph& g, const BitVector& kept) {
  if (kept.size() != g.num_edges()) {
    throw InvalidInput("edge mask has " + std::to_string(kept.size()) + " bits, graph has " +
                       std::to_string(g.num_edges()) + " edges");
  }
  const std::size_t n = g.num_vertices();
  UnionFind uf(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (kept.test(e)) uf.unite(g.edge(e).u, g.edge(e).v);
  }
  std::vector<std::uint32_t> raw(n);
  std::vector<std::uint32_t> id_of_root(n, std::numeric_limits<std::uint32_t>::max());
  std::uint32_t k = 0;
  for (Vertex v = 0; v < n; ++v) {
    const auto r = uf.find(v);
    if (id_of_root[r] == std::numeric_limits<std::uint32_t>::max()) id_of_root[r] = k++;
    raw[v] = id_of_root[r];
  }
  return detail::canonical_partition(raw, k);
}

inline Partition strongly_connected_components(const DiGraphView& d) {
  auto raw = detail::tarjan(d);
  return detail::canonical_partition(raw.label, raw.count);
}

enum class Direction { kOut, kIn };

// Vertices reachable from (kOut) or reaching (kIn) any source; sources included.
inline std::vector<std::uint8_t> reach_from(const DiGraphView& d, std::span<const Vertex> sources,
                                            Direction dir) {
  std::vector<std::uint8_t> seen(d.num_vertices(), 0);
  std::vector<Vertex> queue;
  for (Vertex s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  auto visit = [&](Vertex w) {
    if (!seen[w]) {
      seen[w] = 1;
      queue.push_back(w);
    }
  };
  for (std::size_t head = 0; head < queue.size(); ++head) {
    if (dir == Direction::kOut) {
      d.for_each_out(queue[head], visit);
    } else {
      d.for_each_in(queue[head], visit);
    }
  }
  return seen;
}

namespace detail {
inline std::vector<Vertex> to_set(const std::vector<std::uint8_t>& flags) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < flags.size(); ++v) {
    if (flags[v]) out.push_back(v);
  }
  return out;
}
}  // namespace detail

// C+(v): vertices reachable from v by a directed path, v included. Sorted.
inline std::vector<Vertex> fan_out(const DiGraphView& d, Vertex v) {
  const Vertex src[] = {v};
  return detail::to_set(reach_from(d, src, Direction::kOut));
}

// C-(v): vertices with a directed path to v, v included. Sorted.
inline std::vector<Vertex> fan_in(const DiGraphView& d, Vertex v) {
  const Vertex src[] = {v};
  return detail::to_set(reach_from(d, src, Direction::kIn));
}

struct BowTie {
  std::vector<Vertex> scc1;
  std::vector<Vertex> in_set;   // SCC1^-: vertices reaching SCC1
  std::vector<Vertex> out_set;  // SCC1^+: vertices reachable from SCC1
  std::vector<Vertex> left_wing;
  std::vector<Vertex> right_wing;
  std::vector<Vertex> dust;
  // Role per vertex: 0 = scc1, 1 = left wing, 2 = right wing, 3 = dust.
  std::vector<std::uint8_t> role;
};

enum BowTieRole : std::uint8_t { kCore = 0, kLeftWing = 1, kRightWing = 2, kDust = 3 };

inline BowTie bowtie_decompose(const DiGraphView& d, const Partition& sccs) {
  const std::size_t n = d.num_vertices();
  if (n == 0) throw ParameterError("bow-tie decomposition needs n >= 1");
  BowTie bt;
  bt.scc1 = sccs.members(0);
  const auto out = reach_from(d, bt.scc1, Direction::kOut);
  const auto in = reach_from(d, bt.scc1, Direction::kIn);
  bt.role.assign(n, kDust);
  for (Vertex v = 0; v < n; ++v) {
    const bool core = sccs.block_of[v] == 0;
    if (in[v]) bt.in_set.push_back(v);
    if (out[v]) bt.out_set.push_back(v);
    if (core) {
      bt.role[v] = kCore;
    } else if (in[v]) {
      bt.role[v] = kLeftWing;
      bt.left_wing.push_back(v);
    } else if (out[v]) {
      bt.role[v] = kRightWing;
      bt.right_wing.push_back(v);
    } else {
      bt.dust.push_back(v);
    }
  }
  return bt;
}

inline BowTie bowtie_decompose(const DiGraphView& d) {
  return bowtie_decompose(d, strongly_connected_components(d));
}

// Condensation of a digraph: one node per SCC, deduplicated DAG arcs.
// Node ids follow Tarjan completion order, so every arc goes from a higher
// id to a lower id.
struct Condensation {
  std::vector<std::uint32_t> node_of;
  std::vector<std::size_t> node_size;
  std::vector<std::size_t> out_offsets;
  std::vector<std::uint32_t> out_targets;
  std::vector<std::size_t> in_offsets;
  std::vector<std::uint32_t> in_targets;

  std::size_t num_nodes() const noexcept { return node_size.size(); }
  std::span<const std::uint32_t> successors(std::uint32_t c) const noexcept {
    return {out_targets.data() + out_offsets[c], out_offsets[c + 1] - out_offsets[c]};
  }
  std::span<const std::uint32_t> predecessors(std::uint32_t c) const noexcept {
    return {in_targets.data() + in_offsets[c], in_offsets[c + 1] - in_offsets[c]};
  }
};

inline Condensation condense(const DiGraphView& d) {
  auto raw = detail::tarjan(d);
  Condensation c;
  c.node_of = std::move(raw.label);
  c.node_size.assign(raw.count, 0);
  for (auto id : c.node_of) ++c.node_size[id];
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
  const Graph& g = d.base();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge(e);
    const auto cu = c.node_of[u];
    const auto cv = c.node_of[v];
    if (cu == cv) continue;
    if (d.arcs().test(Graph::arc_index(e, false))) arcs.emplace_back(cu, cv);
    if (d.arcs().test(Graph::arc_index(e, true))) arcs.emplace_back(cv, cu);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  auto build = [&](bool forward, std::vector<std::size_t>& offsets, std::vector<std::uint32_t>& targets) {
    offsets.assign(raw.count + 1, 0);
    for (const auto& [a, b] : arcs) ++offsets[(forward ? a : b) + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    targets.resize(arcs.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [a, b] : arcs) targets[cursor[forward ? a : b]++] = forward ? b : a;
  };
  build(true, c.out_offsets, c.out_targets);
  build(false, c.in_offsets, c.in_targets);
  return c;
}

// Flags vertices whose fan-out (kOut) or fan-in (kIn) has at least k vertices.
// Exact. Works on the condensation: a node is large if any DAG successor is
// large; otherwise a capped sum over successors bounds its reach from above,
// and only nodes whose bound reaches k get a capped exploration.
inline std::vector<std::uint8_t> reach_at_least(const DiGraphView& d, std::size_t k, Direction dir,
                                                const Condensation& c) {
  const std::size_t nodes = c.num_nodes();
  std::vector<std::uint8_t> large(nodes, 0);
  if (k <= 1) {
    large.assign(nodes, 1);
  } else {
    auto next = [&](std::uint32_t x) { return dir == Direction::kOut ? c.successors(x) : c.predecessors(x); };
    std::vector<std::size_t> bound(nodes, 0);
    std::vector<std::uint32_t> stamp(nodes, 0);
    std::uint32_t epoch = 0;
    std::vector<std::uint32_t> queue;
    // Successors have lower ids (kOut) or higher ids (kIn); process them first.
    for (std::size_t step = 0; step < nodes; ++step) {
      const auto x = static_cast<std::uint32_t>(dir == Direction::kOut ? step : nodes - 1 - step);
      std::size_t total = c.node_size[x];
      bool any_large = false;
      for (auto y : next(x)) {
        if (large[y]) {
          any_large = true;
          break;
        }
        total = std::min(k, total + bound[y]);
      }
      if (any_large || c.node_size[x] >= k) {
        large[x] = 1;
        bound[x] = k;
        continue;
      }
      bound[x] = total;
      if (total < k) continue;
      // Bound is not conclusive: explore distinct descendants until k is hit.
      ++epoch;
      queue.clear();
      queue.push_back(x);
      stamp[x] = epoch;
      std::size_t reached = 0;
      for (std::size_t head = 0; head < queue.size() && reached < k; ++head) {
        const auto z = queue[head];
        reached += c.node_size[z];
        for (auto y : next(z)) {
          if (stamp[y] != epoch) {
            stamp[y] = epoch;
            queue.push_back(y);
          }
        }
      }
      if (reached >= k) {
        large[x] = 1;
        bound[x] = k;
      } else {
        bound[x] = reached;
      }
    }
  }
  std::vector<std::uint8_t> out(d.num_vertices());
  for (Vertex v = 0; v < out.size(); ++v) out[v] = large[c.node_of[v]];
  return out;
}

inline std::vector<std::uint8_t> reach_at_least(const DiGraphView& d, std::size_t k, Direction dir) {
  return reach_at_least(d, k, dir, condense(d));
}

// Exact |C+(v)| (or |C-(v)|) for every vertex by one search per condensation
// node. Quadratic in the worst case; meant for small graphs and oracles.
inline std::vector<std::size_t> reach_sizes(const DiGraphView& d, Direction dir) {
  const std::size_t n = d.num_vertices();
  std::vector<std::size_t> out(n);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex src[] = {v};
    const auto seen = reach_from(d, src, dir);
    out[v] = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), std::uint8_t{1}));
  }
  return out;
}

}  // namespace perclab
