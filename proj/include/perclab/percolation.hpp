#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "perclab/bitvec.hpp"
#include "perclab/components.hpp"
#include "perclab/error.hpp"
#include "perclab/graph.hpp"
#include "perclab/rng.hpp"

namespace perclab {

enum class MaskKind { kEdge, kArc };

// One percolation sample over a base graph: bit per edge (kEdge) or per arc in
// the (2e, 2e+1) layout (kArc). Regenerating with the same (graph, p, seed)
// reproduces the bits exactly.
struct Mask {
  MaskKind kind = MaskKind::kEdge;
  BitVector kept;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t graph_hash = 0;
};
using EdgeMask = Mask;
using ArcMask = Mask;

namespace detail {
inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("percolation probability must lie in [0,1]");
}
inline BitVector bernoulli_bits(std::size_t count, double p, std::uint64_t seed) {
  BitVector bits(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    if (rng.bernoulli(p)) bits.set(i);
  }
  return bits;
}
}  // namespace detail

// G(p): each edge kept independently with probability p.
inline EdgeMask bond_percolate(const Graph& g, double p, std::uint64_t seed) {
  detail::check_probability(p);
  return {MaskKind::kEdge, detail::bernoulli_bits(g.num_edges(), p, seed), p, seed, g.hash()};
}

// D_G(p): both arcs of every edge kept independently with probability p.
inline ArcMask oriented_percolate(const Graph& g, double p, std::uint64_t seed) {
  detail::check_probability(p);
  return {MaskKind::kArc, detail::bernoulli_bits(g.num_arcs(), p, seed), p, seed, g.hash()};
}

inline Partition connected_components(const Graph& g, const EdgeMask& mask) {
  if (mask.kind != MaskKind::kEdge) throw InvalidInput("connected_components needs an edge mask");
  return connected_components(g, mask.kept);
}

inline DiGraphView digraph(const Graph& g, const ArcMask& mask) {
  if (mask.kind != MaskKind::kArc) throw InvalidInput("digraph needs an arc mask");
  return {g, mask.kept};
}

// Replay format:
//   # perclab mask
//   kind=edge|arc
//   graph_hash=<16 hex digits>
//   p=<%.17g>
//   seed=<u64>
//   bits=<length>
//   hex=<bitstring, see BitVector::to_hex>
inline void write_mask(std::ostream& out, const Mask& mask) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << mask.graph_hash;
  std::ostringstream p;
  p << std::setprecision(17) << mask.p;
  out << "# perclab mask\n"
      << "kind=" << (mask.kind == MaskKind::kEdge ? "edge" : "arc") << '\n'
      << "graph_hash=" << hash.str() << '\n'
      << "p=" << p.str() << '\n'
      << "seed=" << mask.seed << '\n'
      << "bits=" << mask.kept.size() << '\n'
      << "hex=" << mask.kept.to_hex() << '\n';
}

inline Mask read_mask(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("mask: expected key=value, got '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"kind", "graph_hash", "p", "seed", "bits", "hex"}) {
    if (!kv.contains(key)) throw InvalidInput(std::string("mask: missing ") + key);
  }
  Mask mask;
  if (kv["kind"] == "edge") {
    mask.kind = MaskKind::kEdge;
  } else if (kv["kind"] == "arc") {
    mask.kind = MaskKind::kArc;
  } else {
    throw InvalidInput("mask: kind must be edge or arc");
  }
  try {
    mask.graph_hash = std::stoull(kv["graph_hash"], nullptr, 16);
    mask.p = std::stod(kv["p"]);
    mask.seed = std::stoull(kv["seed"]);
    mask.kept = BitVector::from_hex(kv["hex"], std::stoull(kv["bits"]));
  } catch (const std::logic_error&) {
    throw InvalidInput("mask: malformed numeric field");
  }
  return mask;
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// ---------------------------------------------------------------------------
// Exact enumeration over all percolation configurations of a small graph.

inline constexpr std::size_t kMaxEnumeratedEdges = 20;
inline constexpr std::size_t kMaxEnumeratedOrientedEdges = 10;

namespace detail {

// Small graph as bitmasks (n <= 64).
struct SmallGraph {
  std::size_t n = 0;
  std::vector<std::array<std::uint32_t, 2>> ends;  // per edge
};

inline SmallGraph small_graph(const Graph& g) {
  if (g.num_vertices() > 64) throw SizeError("exact enumeration supports at most 64 vertices");
  SmallGraph s;
  s.n = g.num_vertices();
  for (const auto& e : g.edges()) s.ends.push_back({e.u, e.v});
  return s;
}

// Component of v when edge e is present iff bit e of mask is set.
inline std::uint64_t component_set(const SmallGraph& s, std::uint64_t mask, std::uint32_t v) {
  std::uint64_t reach = std::uint64_t{1} << v;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < s.ends.size(); ++e) {
      if (!((mask >> e) & 1u)) continue;
      const std::uint64_t a = std::uint64_t{1} << s.ends[e][0];
      const std::uint64_t b = std::uint64_t{1} << s.ends[e][1];
      if (((reach & a) != 0) != ((reach & b) != 0)) {
        reach |= a | b;
        changed = true;
      }
    }
  }
  return reach;
}

// Directed reach from v inside `allowed` when arc i is present iff bit i of
// arcs is set; forward follows arcs, backward follows them reversed.
inline std::uint64_t reach_set(const SmallGraph& s, std::uint64_t arcs, std::uint32_t v, bool forward,
                               std::uint64_t allowed = ~std::uint64_t{0}) {
  std::uint64_t reach = std::uint64_t{1} << v;
  if (!(reach & allowed)) return 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < s.ends.size(); ++e) {
      for (int dir = 0; dir < 2; ++dir) {
        if (!((arcs >> (2 * e + dir)) & 1u)) continue;
        // Arc 2e: ends[0] -> ends[1]; arc 2e+1: ends[1] -> ends[0].
        std::uint32_t tail = s.ends[e][dir];
        std::uint32_t head = s.ends[e][1 - dir];
        if (!forward) std::swap(tail, head);
        const std::uint64_t t = std::uint64_t{1} << tail;
        const std::uint64_t h = std::uint64_t{1} << head;
        if ((reach & t) && !(reach & h) && (allowed & h)) {
          reach |= h;
          changed = true;
        }
      }
    }
  }
  return reach;
}

// weight[j] = p^j (1-p)^(bits-j)
inline std::vector<double> config_weights(double p, std::size_t bits) {
  std::vector<double> w(bits + 1);
  for (std::size_t j = 0; j <= bits; ++j) {
    w[j] = std::pow(p, static_cast<double>(j)) * std::pow(1.0 - p, static_cast<double>(bits - j));
  }
  return w;
}

inline void check_vertex(const Graph& g, Vertex v) {
  if (v >= g.num_vertices()) throw ParameterError("vertex out of range");
}

}  // namespace detail

enum class ClusterLaw { kComponent, kFanOut, kFanIn };

// Full law of |C(v)|, |C+(v)| or |C-(v)|: entry s is the probability that the
// cluster has exactly s vertices.
inline std::vector<double> exact_cluster_size_law(const Graph& g, double p, Vertex v, ClusterLaw law) {
  detail::check_probability(p);
  detail::check_vertex(g, v);
  const auto s = detail::small_graph(g);
  const std::size_t m = g.num_edges();
  const bool oriented = law != ClusterLaw::kComponent;
  if (!oriented && m > kMaxEnumeratedEdges) {
    throw SizeError("exact_component_law enumerates 2^|E| masks; |E| <= 20 required");
  }
  if (oriented && m > kMaxEnumeratedOrientedEdges) {
    throw SizeError("exact fan-out/fan-in law enumerates 2^(2|E|) arc sets; |E| <= 10 required");
  }
  const std::size_t bits = oriented ? 2 * m : m;
  const auto weights = detail::config_weights(p, bits);
  std::vector<CompensatedSum> acc(g.num_vertices() + 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    std::uint64_t set = 0;
    if (law == ClusterLaw::kComponent) {
      set = detail::component_set(s, mask, v);
    } else {
      set = detail::reach_set(s, mask, v, law == ClusterLaw::kFanOut);
    }
    acc[std::popcount(set)].add(weights[std::popcount(mask)]);
  }
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value();
  return out;
}

namespace detail {
inline double tail_probability(const std::vector<double>& law, std::size_t k) {
  CompensatedSum sum;
  for (std::size_t s = std::max<std::size_t>(k, 0); s < law.size(); ++s) sum.add(law[s]);
  return sum.value();
}
}  // namespace detail

// P(|C(v)| >= k) in G(p), by summing over all 2^|E| edge masks.
inline double exact_component_law(const Graph& g, double p, Vertex v, std::size_t k) {
  return detail::tail_probability(exact_cluster_size_law(g, p, v, ClusterLaw::kComponent), k);
}

// P(|C+(v)| >= k) in D_G(p), by summing over all 2^(2|E|) arc sets.
inline double exact_fanout_law(const Graph& g, double p, Vertex v, std::size_t k) {
  return detail::tail_probability(exact_cluster_size_law(g, p, v, ClusterLaw::kFanOut), k);
}

inline double exact_fanin_law(const Graph& g, double p, Vertex v, std::size_t k) {
  return detail::tail_probability(exact_cluster_size_law(g, p, v, ClusterLaw::kFanIn), k);
}

struct JointLaw {
  double directed_out = 0.0;  // P(|C+(v)| >= k1, |C+_{V \ C+(v)}(u)| >= k2)
  double directed_in = 0.0;   // P(|C+(v)| >= k1, |C-_{V \ C+(v)}(u)| >= k2)
  double undirected = 0.0;    // P(|C(v)| >= k1, |C(u)| >= k2, C(v) != C(u))
};

// Both sides of the two-vertex coupling identity, each by its own enumeration.
inline JointLaw exact_joint_law(const Graph& g, double p, Vertex v, Vertex u, std::size_t k1, std::size_t k2) {
  detail::check_probability(p);
  detail::check_vertex(g, v);
  detail::check_vertex(g, u);
  if (u == v) throw ParameterError("exact_joint_law needs u != v");
  const std::size_t m = g.num_edges();
  if (m > kMaxEnumeratedOrientedEdges) throw SizeError("exact_joint_law requires |E| <= 10");
  const auto s = detail::small_graph(g);
  JointLaw out;

  const auto arc_weights = detail::config_weights(p, 2 * m);
  CompensatedSum dir_out;
  CompensatedSum dir_in;
  const std::uint64_t everything = s.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << s.n) - 1;
  for (std::uint64_t arcs = 0; arcs < (std::uint64_t{1} << (2 * m)); ++arcs) {
    const std::uint64_t out_v = detail::reach_set(s, arcs, v, true);
    if (static_cast<std::size_t>(std::popcount(out_v)) < k1) continue;
    const std::uint64_t rest = everything & ~out_v;
    const double w = arc_weights[std::popcount(arcs)];
    if (static_cast<std::size_t>(std::popcount(detail::reach_set(s, arcs, u, true, rest))) >= k2) dir_out.add(w);
    if (static_cast<std::size_t>(std::popcount(detail::reach_set(s, arcs, u, false, rest))) >= k2) dir_in.add(w);
  }
  out.directed_out = dir_out.value();
  out.directed_in = dir_in.value();

  const auto edge_weights = detail::config_weights(p, m);
  CompensatedSum undirected;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const std::uint64_t cv = detail::component_set(s, mask, v);
    if (static_cast<std::size_t>(std::popcount(cv)) < k1 || ((cv >> u) & 1u)) continue;
    const std::uint64_t cu = detail::component_set(s, mask, u);
    if (static_cast<std::size_t>(std::popcount(cu)) >= k2) undirected.add(edge_weights[std::popcount(mask)]);
  }
  out.undirected = undirected.value();
  return out;
}

struct MutualReach {
  double both = 0.0;     // P(u in C+(v) and v in C+(u))
  double u_from_v = 0.0; // P(u in C+(v))
  double v_from_u = 0.0; // P(v in C+(u))
};

inline MutualReach exact_mutual_reach(const Graph& g, double p, Vertex u, Vertex v) {
  detail::check_probability(p);
  detail::check_vertex(g, u);
  detail::check_vertex(g, v);
  const std::size_t m = g.num_edges();
  if (m > kMaxEnumeratedOrientedEdges) throw SizeError("exact_mutual_reach requires |E| <= 10");
  const auto s = detail::small_graph(g);
  const auto weights = detail::config_weights(p, 2 * m);
  CompensatedSum both;
  CompensatedSum uv;
  CompensatedSum vu;
  for (std::uint64_t arcs = 0; arcs < (std::uint64_t{1} << (2 * m)); ++arcs) {
    const bool a = (detail::reach_set(s, arcs, v, true) >> u) & 1u;
    const bool b = (detail::reach_set(s, arcs, u, true) >> v) & 1u;
    const double w = weights[std::popcount(arcs)];
    if (a) uv.add(w);
    if (b) vu.add(w);
    if (a && b) both.add(w);
  }
  return {both.value(), uv.value(), vu.value()};
}

// E|C1| in G(p) and E|SCC1| in D_G(p), by enumeration.
inline double exact_expected_largest_component(const Graph& g, double p) {
  detail::check_probability(p);
  const std::size_t m = g.num_edges();
  if (m > kMaxEnumeratedEdges) throw SizeError("exact_expected_largest_component requires |E| <= 20");
  const auto s = detail::small_graph(g);
  const auto weights = detail::config_weights(p, m);
  CompensatedSum acc;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::uint64_t seen = 0;
    int best = 0;
    for (std::uint32_t v = 0; v < s.n; ++v) {
      if ((seen >> v) & 1u) continue;
      const auto c = detail::component_set(s, mask, v);
      seen |= c;
      best = std::max(best, std::popcount(c));
    }
    acc.add(weights[std::popcount(mask)] * best);
  }
  return acc.value();
}

inline double exact_expected_largest_scc(const Graph& g, double p) {
  detail::check_probability(p);
  const std::size_t m = g.num_edges();
  if (m > kMaxEnumeratedOrientedEdges) throw SizeError("exact_expected_largest_scc requires |E| <= 10");
  const auto s = detail::small_graph(g);
  const auto weights = detail::config_weights(p, 2 * m);
  CompensatedSum acc;
  for (std::uint64_t arcs = 0; arcs < (std::uint64_t{1} << (2 * m)); ++arcs) {
    std::uint64_t seen = 0;
    int best = 0;
    for (std::uint32_t v = 0; v < s.n; ++v) {
      if ((seen >> v) & 1u) continue;
      const auto scc = detail::reach_set(s, arcs, v, true) & detail::reach_set(s, arcs, v, false);
      seen |= scc;
      best = std::max(best, std::popcount(scc));
    }
    acc.add(weights[std::popcount(arcs)] * best);
  }
  return acc.value();
}

}  // namespace perclab
