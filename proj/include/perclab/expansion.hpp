#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "perclab/bitvec.hpp"
#include "perclab/components.hpp"
#include "perclab/error.hpp"
#include "perclab/graph.hpp"
#include "perclab/rng.hpp"

namespace perclab {

inline constexpr std::size_t kMaxExactExpansionVertices = 20;

struct CutValue {
  double value = 0.0;
  std::size_t boundary = 0;  // e(A, V \ A)
  std::vector<Vertex> witness;
};

namespace detail {

inline void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("epsilon must lie in (0, 1/2)");
}

// Admissible |A| range for φ(G, ε): ε n <= |A| <= n / 2.
inline std::pair<std::size_t, std::size_t> admissible_sizes(std::size_t n, double epsilon) {
  const double lo = epsilon * static_cast<double>(n);
  std::size_t min_size = static_cast<std::size_t>(std::ceil(lo));
  if (min_size == 0) min_size = 1;
  const std::size_t max_size = n / 2;
  if (min_size > max_size) throw ParameterError("no admissible set: epsilon * n exceeds n / 2");
  return {min_size, max_size};
}

inline bool connected(const Graph& g) {
  if (g.num_vertices() == 0) return false;
  return connected_components(g, BitVector(g.num_edges(), true)).count() == 1;
}

}  // namespace detail

// φ(G, ε) = min over ε n <= |A| <= n/2 of e(A, V\A) / |A|, by enumerating all
// subsets. Ratios are compared exactly; the witness is the first minimizer in
// increasing subset-bitmask order.
inline CutValue phi_exact(const Graph& g, double epsilon) {
  detail::check_epsilon(epsilon);
  const std::size_t n = g.num_vertices();
  if (n > kMaxExactExpansionVertices) throw SizeError("phi_exact enumerates 2^n subsets; n <= 20 required");
  const auto [min_size, max_size] = detail::admissible_sizes(n, epsilon);
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= 1u << e.v;
    adj[e.v] |= 1u << e.u;
  }
  std::size_t best_cut = 0;
  std::size_t best_size = 0;
  std::uint32_t best_set = 0;
  for (std::uint32_t set = 1; set < (1u << n); ++set) {
    const auto size = static_cast<std::size_t>(std::popcount(set));
    if (size < min_size || size > max_size) continue;
    std::size_t cut = 0;
    for (std::uint32_t rest = set; rest; rest &= rest - 1) {
      cut += static_cast<std::size_t>(std::popcount(adj[std::countr_zero(rest)] & ~set));
    }
    if (best_size == 0 || cut * best_size < best_cut * size) {
      best_cut = cut;
      best_size = size;
      best_set = set;
    }
  }
  CutValue out;
  out.boundary = best_cut;
  out.value = static_cast<double>(best_cut) / static_cast<double>(best_size);
  for (Vertex v = 0; v < n; ++v) {
    if ((best_set >> v) & 1u) out.witness.push_back(v);
  }
  return out;
}

struct FiedlerResult {
  double lambda2 = 0.0;  // second eigenvalue of the normalized Laplacian
  std::vector<double> vector;  // D^{-1/2} times the eigenvector of D^{-1/2} A D^{-1/2}
  std::size_t iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double tolerance = 1e-6;
  std::size_t max_iterations = 20000;
  std::size_t restarts = 10;
  std::uint64_t seed = 0x5eed;
};

// Second eigenpair of the normalized Laplacian by deflated power iteration on
// (I + D^{-1/2} A D^{-1/2}) / 2, whose spectrum lies in [0, 1] and whose top
// eigenvector sqrt(deg) is projected out. The best of several random starts
// (largest Rayleigh quotient) is kept.
inline FiedlerResult fiedler(const Graph& g, const PowerIterationOptions& opt = {}) {
  const std::size_t n = g.num_vertices();
  FiedlerResult best;
  if (n < 2) return best;
  std::vector<double> inv_sqrt_deg(n, 0.0);
  std::vector<double> top(n, 0.0);
  double top_norm = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    const double d = static_cast<double>(g.degree(v));
    inv_sqrt_deg[v] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
    top[v] = std::sqrt(d);
    top_norm += d;
  }
  top_norm = std::sqrt(top_norm);
  if (top_norm > 0) {
    for (auto& x : top) x /= top_norm;
  }
  auto project = [&](std::vector<double>& x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += x[i] * top[i];
    for (std::size_t i = 0; i < n; ++i) x[i] -= dot * top[i];
  };
  auto normalize = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    s = std::sqrt(s);
    if (s > 0) {
      for (auto& xi : x) xi /= s;
    }
    return s;
  };
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (Vertex v = 0; v < n; ++v) {
      double acc = 0.0;
      for (const auto& nb : g.neighbors(v)) acc += inv_sqrt_deg[nb.vertex] * x[nb.vertex];
      y[v] = 0.5 * (x[v] + inv_sqrt_deg[v] * acc);
    }
  };

  double best_rq = -1.0;
  std::vector<double> best_x;
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t r = 0; r < opt.restarts; ++r) {
    Rng rng(derive_seed(opt.seed, Stream::kSpectral, r));
    for (auto& xi : x) xi = rng.uniform() - 0.5;
    project(x);
    if (normalize(x) == 0.0) continue;
    double rq = 0.0;
    double prev = -2.0;
    bool converged = false;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
      apply(x, y);
      project(y);
      rq = 0.0;
      for (std::size_t i = 0; i < n; ++i) rq += x[i] * y[i];
      if (normalize(y) == 0.0) {
        rq = 0.0;
        converged = true;
        break;
      }
      std::swap(x, y);
      // Eigenvalue tolerance relative to lambda2 = 2 (1 - rq).
      const double gap = std::max(2.0 * (1.0 - rq), 1e-300);
      if (it > 8 && std::abs(rq - prev) * 2.0 <= 1e-3 * opt.tolerance * gap) {
        converged = true;
        break;
      }
      prev = rq;
    }
    best.iterations += it + 1;
    if (rq > best_rq) {
      best_rq = rq;
      best_x = x;
      best.converged = converged;
    }
  }
  best.lambda2 = std::max(0.0, 2.0 * (1.0 - best_rq));
  best.vector.resize(n);
  for (Vertex v = 0; v < n; ++v) best.vector[v] = best_x.empty() ? 0.0 : best_x[v] * inv_sqrt_deg[v];
  return best;
}

struct SpectralCertificate {
  double lambda2 = 0.0;
  double conductance_lower = 0.0;  // λ2 / 2 (Cheeger)
  double expansion_lower = 0.0;    // λ2 / 2 · d_min, a lower bound on e(A,Ā)/|A| for |A| <= n/2
  bool connected = false;
  bool converged = false;
};

// The expansion bound uses d_min because conductance normalizes by volume:
// for |A| <= n/2, e(A,Ā) >= h · min(vol A, vol Ā) >= h · d_min · |A|.
inline SpectralCertificate spectral_certificate(const Graph& g, const PowerIterationOptions& opt = {}) {
  SpectralCertificate c;
  c.connected = detail::connected(g) && g.num_vertices() >= 2;
  if (!c.connected) {
    c.converged = true;
    return c;
  }
  const auto f = fiedler(g, opt);
  c.lambda2 = f.lambda2;
  c.converged = f.converged;
  c.conductance_lower = c.lambda2 / 2.0;
  c.expansion_lower = c.conductance_lower * static_cast<double>(g.min_degree());
  return c;
}

// Best admissible sweep cut along the Fiedler ordering, scanning prefixes from
// both ends. Its value is e(A,Ā)/|A| of an admissible A, hence >= φ(G, ε).
inline CutValue sweep_upper(const Graph& g, double epsilon, const PowerIterationOptions& opt = {}) {
  detail::check_epsilon(epsilon);
  const std::size_t n = g.num_vertices();
  const auto [min_size, max_size] = detail::admissible_sizes(n, epsilon);
  const auto f = fiedler(g, opt);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return f.vector[a] < f.vector[b]; });

  CutValue best;
  std::size_t best_cut = 0;
  std::size_t best_size = 0;
  bool best_from_back = false;
  std::vector<std::uint8_t> in_set(n);
  for (int pass = 0; pass < 2; ++pass) {
    std::fill(in_set.begin(), in_set.end(), 0);
    long long cut = 0;
    for (std::size_t i = 0; i < max_size; ++i) {
      const Vertex v = pass == 0 ? order[i] : order[n - 1 - i];
      long long inside = 0;
      for (const auto& nb : g.neighbors(v)) inside += in_set[nb.vertex];
      cut += static_cast<long long>(g.degree(v)) - 2 * inside;
      in_set[v] = 1;
      const std::size_t size = i + 1;
      if (size < min_size) continue;
      const auto c = static_cast<std::size_t>(cut);
      if (best_size == 0 || c * best_size < best_cut * size) {
        best_cut = c;
        best_size = size;
        best_from_back = pass == 1;
      }
    }
  }
  best.boundary = best_cut;
  best.value = static_cast<double>(best_cut) / static_cast<double>(best_size);
  for (std::size_t i = 0; i < best_size; ++i) best.witness.push_back(best_from_back ? order[n - 1 - i] : order[i]);
  std::sort(best.witness.begin(), best.witness.end());
  return best;
}

enum class Verdict { kCertifiedYes, kCertifiedNo, kUnknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kCertifiedYes:
      return "certified-yes";
    case Verdict::kCertifiedNo:
      return "certified-no";
    case Verdict::kUnknown:
      return "unknown";
  }
  return "unknown";
}

struct ExpansionReport {
  double epsilon = 0.0;
  double alpha = 0.0;
  double dbar = 0.0;
  std::optional<double> exact;
  std::vector<Vertex> exact_witness;
  double lambda2 = 0.0;
  double spectral_lower = 0.0;
  double sweep_upper = 0.0;
  std::vector<Vertex> sweep_witness;
  double avg_degree = 0.0;
  bool connected = false;
  bool spectral_converged = false;
  Verdict verdict = Verdict::kUnknown;
};

// Checks the (α, ε, d̄) large-set expander property at one ε.
inline ExpansionReport is_large_set_expander(const Graph& g, double alpha, double epsilon, double dbar,
                                             const PowerIterationOptions& opt = {}) {
  ExpansionReport r;
  r.epsilon = epsilon;
  r.alpha = alpha;
  r.dbar = dbar;
  r.avg_degree = g.average_degree();
  if (g.num_vertices() <= kMaxExactExpansionVertices) {
    const auto exact = phi_exact(g, epsilon);
    r.exact = exact.value;
    r.exact_witness = exact.witness;
  }
  const auto cert = spectral_certificate(g, opt);
  r.lambda2 = cert.lambda2;
  r.spectral_lower = cert.expansion_lower;
  r.connected = cert.connected;
  r.spectral_converged = cert.converged;
  const auto sweep = sweep_upper(g, epsilon, opt);
  r.sweep_upper = sweep.value;
  r.sweep_witness = sweep.witness;

  if (r.avg_degree > dbar || r.sweep_upper < alpha) {
    r.verdict = Verdict::kCertifiedNo;
  } else if ((r.exact && *r.exact >= alpha) || r.spectral_lower >= alpha) {
    r.verdict = Verdict::kCertifiedYes;
  } else if (r.exact) {
    r.verdict = Verdict::kCertifiedNo;
  } else {
    r.verdict = Verdict::kUnknown;
  }
  return r;
}

// One report per ε; a certificate uniform in ε cannot come from spectra alone.
inline std::vector<ExpansionReport> certify_epsilon_grid(const Graph& g, double alpha,
                                                         const std::vector<double>& epsilons, double dbar,
                                                         const PowerIterationOptions& opt = {}) {
  std::vector<ExpansionReport> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) out.push_back(is_large_set_expander(g, alpha, eps, dbar, opt));
  return out;
}

}  // namespace perclab
