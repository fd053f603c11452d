#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "perclab/error.hpp"
#include "perclab/graph.hpp"
#include "perclab/rng.hpp"

namespace perclab {

enum class ModelKind { kPreferentialAttachment, kRandomRegular, kErdosRenyi, kComplete, kDisjointUnion };

// Random graph model plus its seed. Compact text form, used inside config
// blocks and CSV rows:
//   pa(m=2,n=1000)  rr(d=3,n=100)  er(c=3,n=100)  complete(n=5)
//   union(complete(n=3),complete(n=3))
struct ModelSpec {
  ModelKind kind = ModelKind::kComplete;
  std::size_t m = 2;
  std::size_t d = 3;
  double mean_degree = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<ModelSpec> parts;

  static ModelSpec pa(std::size_t m, std::size_t n, std::uint64_t seed = 0) {
    ModelSpec s;
    s.kind = ModelKind::kPreferentialAttachment;
    s.m = m;
    s.n = n;
    s.seed = seed;
    return s;
  }
  static ModelSpec random_regular(std::size_t d, std::size_t n, std::uint64_t seed = 0) {
    ModelSpec s;
    s.kind = ModelKind::kRandomRegular;
    s.d = d;
    s.n = n;
    s.seed = seed;
    return s;
  }
  static ModelSpec erdos_renyi(double mean_degree, std::size_t n, std::uint64_t seed = 0) {
    ModelSpec s;
    s.kind = ModelKind::kErdosRenyi;
    s.mean_degree = mean_degree;
    s.n = n;
    s.seed = seed;
    return s;
  }
  static ModelSpec complete(std::size_t n) {
    ModelSpec s;
    s.kind = ModelKind::kComplete;
    s.n = n;
    return s;
  }
  static ModelSpec disjoint_union(std::vector<ModelSpec> parts, std::uint64_t seed = 0) {
    ModelSpec s;
    s.kind = ModelKind::kDisjointUnion;
    s.seed = seed;
    for (const auto& p : parts) s.n += p.n;
    s.parts = std::move(parts);
    return s;
  }

  void validate() const {
    switch (kind) {
      case ModelKind::kPreferentialAttachment:
        if (m < 2) throw ParameterError("pa: m must be >= 2");
        if (n < 2 * m + 1) throw ParameterError("pa: n must be >= 2m+1");
        break;
      case ModelKind::kRandomRegular:
        if (d < 3) throw ParameterError("rr: d must be >= 3");
        if ((d * n) % 2 != 0) throw ParameterError("rr: d*n must be even");
        if (n <= d) throw ParameterError("rr: n must exceed d");
        break;
      case ModelKind::kErdosRenyi:
        if (!(mean_degree >= 0.0)) throw ParameterError("er: mean degree must be >= 0");
        if (n >= 2 && mean_degree > static_cast<double>(n - 1)) throw ParameterError("er: mean degree exceeds n-1");
        break;
      case ModelKind::kComplete:
        break;
      case ModelKind::kDisjointUnion:
        if (parts.empty()) throw ParameterError("union: needs at least one part");
        for (const auto& p : parts) p.validate();
        break;
    }
  }

  // Compact form without the seed.
  std::string to_string() const {
    std::ostringstream os;
    switch (kind) {
      case ModelKind::kPreferentialAttachment:
        os << "pa(m=" << m << ",n=" << n << ")";
        break;
      case ModelKind::kRandomRegular:
        os << "rr(d=" << d << ",n=" << n << ")";
        break;
      case ModelKind::kErdosRenyi:
        os.precision(17);
        os << "er(c=" << mean_degree << ",n=" << n << ")";
        break;
      case ModelKind::kComplete:
        os << "complete(n=" << n << ")";
        break;
      case ModelKind::kDisjointUnion:
        os << "union(";
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i].to_string();
        os << ")";
        break;
    }
    return os.str();
  }

  static ModelSpec parse(std::string_view text) {
    std::size_t pos = 0;
    ModelSpec s = parse_at(text, pos);
    if (pos != text.size()) throw InvalidInput("model spec: trailing text in '" + std::string(text) + "'");
    return s;
  }

  // Flat key=value block: model=<compact form>, seed=<u64>.
  std::string to_config() const {
    return "model=" + to_string() + "\nseed=" + std::to_string(seed) + "\n";
  }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) {
    return a.to_string() == b.to_string() && a.seed == b.seed;
  }

 private:
  static ModelSpec parse_at(std::string_view text, std::size_t& pos) {
    const auto open = text.find('(', pos);
    if (open == std::string_view::npos) throw InvalidInput("model spec: expected '(' in '" + std::string(text) + "'");
    const std::string name(text.substr(pos, open - pos));
    pos = open + 1;
    ModelSpec s;
    if (name == "union") {
      s.kind = ModelKind::kDisjointUnion;
      while (true) {
        s.parts.push_back(parse_at(text, pos));
        s.n += s.parts.back().n;
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
      if (pos >= text.size() || text[pos] != ')') throw InvalidInput("model spec: unterminated union");
      ++pos;
      return s;
    }
    if (name == "pa") {
      s.kind = ModelKind::kPreferentialAttachment;
    } else if (name == "rr") {
      s.kind = ModelKind::kRandomRegular;
    } else if (name == "er") {
      s.kind = ModelKind::kErdosRenyi;
    } else if (name == "complete") {
      s.kind = ModelKind::kComplete;
    } else {
      throw InvalidInput("model spec: unknown model '" + name + "'");
    }
    const auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw InvalidInput("model spec: missing ')'");
    std::string body(text.substr(pos, close - pos));
    pos = close + 1;
    std::istringstream fields(body);
    std::string field;
    bool have_n = false;
    while (std::getline(fields, field, ',')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw InvalidInput("model spec: bad field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      try {
        if (key == "n") {
          s.n = std::stoull(value);
          have_n = true;
        } else if (key == "m") {
          s.m = std::stoull(value);
        } else if (key == "d") {
          s.d = std::stoull(value);
        } else if (key == "c") {
          s.mean_degree = std::stod(value);
        } else {
          throw InvalidInput("model spec: unknown field '" + key + "'");
        }
      } catch (const std::logic_error&) {
        throw InvalidInput("model spec: bad value in '" + field + "'");
      }
    }
    if (!have_n) throw InvalidInput("model spec: missing n in '" + name + "'");
    return s;
  }
};

inline ModelSpec parse_model_config(std::string_view block) {
  std::istringstream in{std::string(block)};
  std::string line;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("config: expected key=value, got '" + line + "'");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  if (!kv.contains("model")) throw InvalidInput("config: missing model=");
  ModelSpec s = ModelSpec::parse(kv["model"]);
  if (kv.contains("seed")) {
    try {
      s.seed = std::stoull(kv["seed"]);
    } catch (const std::logic_error&) {
      throw InvalidInput("config: bad seed '" + kv["seed"] + "'");
    }
  }
  return s;
}

// Degree-proportional vertex choice by the endpoint-replication trick: a
// uniform pick from the list of all edge endpoints picks vertex i with
// probability deg(i) / 2|E|. Appending an edge appends both endpoints.
class DegreeProportionalSampler {
 public:
  DegreeProportionalSampler() = default;
  explicit DegreeProportionalSampler(const Graph& g) {
    endpoints_.reserve(2 * g.num_edges());
    for (const auto& e : g.edges()) add_edge(e.u, e.v);
  }

  void reserve(std::size_t edges) { endpoints_.reserve(2 * edges); }
  void add_edge(Vertex u, Vertex v) {
    endpoints_.push_back(u);
    endpoints_.push_back(v);
  }
  bool empty() const noexcept { return endpoints_.empty(); }

  Vertex sample(Rng& rng) const { return endpoints_[rng.below(endpoints_.size())]; }

 private:
  std::vector<Vertex> endpoints_;
};

// Start clique K_{2m+1} with the edges of vertex t (0-based) at ids
// [t*m, (t+1)*m): vertex t owns the edges to t+1, ..., t+m (mod 2m+1), listed
// in lexicographic order within the block.
inline std::vector<Edge> pa_start_clique(std::size_t m) {
  const std::size_t t0 = 2 * m + 1;
  std::vector<Edge> edges;
  edges.reserve(m * t0);
  for (std::size_t t = 0; t < t0; ++t) {
    std::vector<Edge> block;
    for (std::size_t j = 1; j <= m; ++j) {
      const auto a = static_cast<Vertex>(t);
      const auto b = static_cast<Vertex>((t + j) % t0);
      block.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(block.begin(), block.end());
    edges.insert(edges.end(), block.begin(), block.end());
  }
  return edges;
}

// Conditional preferential attachment: each new vertex draws m targets i.i.d.
// degree-proportionally and redraws the whole m-tuple until all are distinct.
// Edges of vertex t get ids m*t .. m*t+m-1.
inline Graph preferential_attachment(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 2) throw ParameterError("preferential_attachment: m must be >= 2");
  if (n < 2 * m + 1) throw ParameterError("preferential_attachment: n must be >= 2m+1");
  std::vector<Edge> edges = pa_start_clique(m);
  edges.reserve(m * n);
  DegreeProportionalSampler sampler;
  sampler.reserve(m * n);
  for (const auto& e : edges) sampler.add_edge(e.u, e.v);
  Rng rng(seed);
  std::vector<Vertex> targets(m);
  for (std::size_t t = 2 * m + 1; t < n; ++t) {
    while (true) {
      for (auto& w : targets) w = sampler.sample(rng);
      bool distinct = true;
      for (std::size_t i = 0; i < m && distinct; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          if (targets[i] == targets[j]) {
            distinct = false;
            break;
          }
        }
      }
      if (distinct) break;
    }
    // The m edges of one vertex are added together, after the draw.
    for (auto w : targets) edges.push_back({w, static_cast<Vertex>(t)});
    for (auto w : targets) sampler.add_edge(w, static_cast<Vertex>(t));
  }
  return Graph(n, std::move(edges));
}

// Uniform simple d-regular graph: pairing model, rejecting the whole matching
// on any self-loop or repeated pair. Edges are sorted lexicographically.
inline Graph random_regular(std::size_t d, std::size_t n, std::uint64_t seed) {
  if ((d * n) % 2 != 0) throw ParameterError("random_regular: d*n must be even");
  if (n <= d) throw ParameterError("random_regular: n must exceed d");
  if (d == 0) return Graph(n, {});
  Rng rng(seed);
  std::vector<Vertex> points(d * n);
  std::vector<Edge> edges(d * n / 2);
  while (true) {
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / d);
    // Fisher-Yates with the project RNG so the matching is reproducible.
    for (std::size_t i = points.size() - 1; i > 0; --i) std::swap(points[i], points[rng.below(i + 1)]);
    bool simple = true;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Vertex a = points[2 * i];
      const Vertex b = points[2 * i + 1];
      if (a == b) {
        simple = false;
        break;
      }
      edges[i] = {std::min(a, b), std::max(a, b)};
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return Graph(n, edges);
  }
}

// G(n, q) with q = c / (n - 1), by geometric skipping over the pair list.
inline Graph erdos_renyi(double mean_degree, std::size_t n, std::uint64_t seed) {
  if (!(mean_degree >= 0.0)) throw ParameterError("erdos_renyi: mean degree must be >= 0");
  std::vector<Edge> edges;
  if (n < 2) return Graph(n, {});
  const double q = mean_degree / static_cast<double>(n - 1);
  if (q > 1.0) throw ParameterError("erdos_renyi: mean degree exceeds n-1");
  if (q == 0.0) return Graph(n, {});
  if (q == 1.0) return named::complete(n);
  Rng rng(seed);
  const double log_q = std::log1p(-q);
  // Walk pairs (v, w), w < v, in row order.
  long long v = 1;
  long long w = -1;
  const auto nn = static_cast<long long>(n);
  while (v < nn) {
    const double r = 1.0 - rng.uniform();
    w += 1 + static_cast<long long>(std::floor(std::log(r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v)});
  }
  std::sort(edges.begin(), edges.end());
  return Graph(n, std::move(edges));
}

inline Graph generate(const ModelSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ModelKind::kPreferentialAttachment:
      return preferential_attachment(spec.m, spec.n, spec.seed);
    case ModelKind::kRandomRegular:
      return random_regular(spec.d, spec.n, spec.seed);
    case ModelKind::kErdosRenyi:
      return erdos_renyi(spec.mean_degree, spec.n, spec.seed);
    case ModelKind::kComplete:
      return named::complete(spec.n);
    case ModelKind::kDisjointUnion: {
      Graph out(0, {});
      for (std::size_t i = 0; i < spec.parts.size(); ++i) {
        ModelSpec part = spec.parts[i];
        part.seed = derive_seed(spec.seed, Stream::kPart, i);
        out = named::disjoint_union(out, generate(part));
      }
      return out;
    }
  }
  throw ParameterError("generate: unknown model kind");
}

struct MaxDegreeCheck {
  std::size_t max_degree = 0;
  double bound = 0.0;  // n^{7/8}
  bool pass = false;
};

inline MaxDegreeCheck max_degree_check(const Graph& g) {
  MaxDegreeCheck c;
  c.max_degree = g.max_degree();
  c.bound = std::pow(static_cast<double>(g.num_vertices()), 7.0 / 8.0);
  c.pass = static_cast<double>(c.max_degree) < c.bound;
  return c;
}

}  // namespace perclab
