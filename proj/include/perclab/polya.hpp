#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

#include "perclab/error.hpp"
#include "perclab/parallel.hpp"
#include "perclab/rng.hpp"

namespace perclab::polya {

// Discrete node label of the Pólya-point tree.
enum class Kind { kRoot, kLeft, kRight };

// Number of left children of a node with label `kind`: m for the root and
// left nodes, m - 1 for right nodes.
constexpr std::size_t left_children(Kind kind, std::size_t m) noexcept {
  return kind == Kind::kRight ? m - 1 : m;
}

// Gamma shape of the right-child intensity: m + 1 for left nodes, m otherwise.
constexpr std::size_t gamma_shape(Kind kind, std::size_t m) noexcept {
  return kind == Kind::kLeft ? m + 1 : m;
}

inline void check_m(std::size_t m) {
  if (m < 2) throw ParameterError("Polya-point model needs m >= 2");
}
inline void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0,1]");
}

// ---------------------------------------------------------------------------
// Tree sampling

struct Node {
  Kind kind;
  double x;
  std::uint32_t parent;  // self for the root
  std::uint32_t depth;
};

struct Tree {
  std::vector<Node> nodes;  // breadth-first; nodes[0] is the root
  std::size_t overflowed = 0;  // nodes whose right-child count hit the cap
};

inline constexpr std::size_t kRightChildCap = 10000;
inline constexpr double kTinyPosition = 1e-6;

namespace detail {

// Right-child count of a node at position x, capped; `overflow` is set if the
// cap was hit.
inline std::size_t sample_right_count(Kind kind, double x, std::size_t m, Rng& rng, bool& overflow) {
  overflow = false;
  if (x >= 1.0) return 0;
  std::gamma_distribution<double> gamma(static_cast<double>(gamma_shape(kind, m)), 1.0);
  const double rate = gamma(rng.engine()) * (1.0 - x) / x;
  if (!(rate < static_cast<double>(kRightChildCap))) {
    overflow = true;
    return kRightChildCap;
  }
  std::poisson_distribution<std::size_t> poisson(rate);
  const std::size_t count = rate > 0.0 ? poisson(rng.engine()) : 0;
  if (count >= kRightChildCap) {
    overflow = true;
    return kRightChildCap;
  }
  return count;
}

}  // namespace detail

// Typed Pólya-point tree cut at `depth`. The root sits at sqrt(U); a node
// (S, x) gets left_children(S) children (L, U[0,x]) and Poisson(γ (1-x)/x)
// children (R, U[x,1]) with γ ~ Gamma(gamma_shape(S), 1).
inline Tree sample_polya_tree(std::size_t m, std::size_t depth, std::uint64_t seed) {
  check_m(m);
  Rng rng(seed);
  Tree tree;
  tree.nodes.push_back({Kind::kRoot, std::sqrt(rng.uniform()), 0, 0});
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const Node node = tree.nodes[i];
    if (node.depth >= depth) continue;
    const auto id = static_cast<std::uint32_t>(i);
    for (std::size_t c = 0; c < left_children(node.kind, m); ++c) {
      tree.nodes.push_back({Kind::kLeft, node.x * rng.uniform(), id, node.depth + 1});
    }
    bool overflow = false;
    const std::size_t right = detail::sample_right_count(node.kind, node.x, m, rng, overflow);
    if (overflow) ++tree.overflowed;
    for (std::size_t c = 0; c < right; ++c) {
      tree.nodes.push_back({Kind::kRight, node.x + (1.0 - node.x) * rng.uniform(), id, node.depth + 1});
    }
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Percolated degree law

// Law of the number of right children that survive bond percolation for a
// node (kind, x): negative binomial with success probability
// q = x / (x + p - x p) and shape m(S)+1 (left/right nodes) or m (root).
inline double neg_binom_degree_pmf(std::size_t m, Kind kind, double x, double p, std::size_t k) {
  check_m(m);
  check_p(p);
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("neg_binom_degree_pmf needs x in (0, 1]");
  const double q = x / (x + p - x * p);
  const double shape = kind == Kind::kRoot ? static_cast<double>(m) : static_cast<double>(left_children(kind, m) + 1);
  if (q >= 1.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  const double log_pmf = std::lgamma(kk + shape) - std::lgamma(kk + 1.0) - std::lgamma(shape) +
                         shape * std::log(q) + kk * std::log1p(-q);
  return std::exp(log_pmf);
}

// One draw of the percolated right-degree: Gamma-mixed Poisson, then thinned.
inline std::size_t sample_percolated_right_degree(std::size_t m, Kind kind, double x, double p, Rng& rng) {
  bool overflow = false;
  const std::size_t total = detail::sample_right_count(kind, x, m, rng, overflow);
  std::binomial_distribution<std::size_t> keep(total, p);
  return keep(rng.engine());
}

// ---------------------------------------------------------------------------
// Survival fixed point on a position grid

struct GridOptions {
  std::size_t cells = 2048;          // uniform cells on [0, 1]
  std::size_t refine_decades = 60;   // geometric refinement of the first cell
  std::size_t points_per_decade = 20;
};

// x_0 = 0, then geometric points h·10^{-j/ppd} for j = decades·ppd..1, then
// the uniform points i·h, i = 1..cells, where h = 1/cells.
inline std::vector<double> make_grid(const GridOptions& opt) {
  if (opt.cells < 1) throw ParameterError("grid needs at least one cell");
  const double h = 1.0 / static_cast<double>(opt.cells);
  std::vector<double> x{0.0};
  const std::size_t fine = opt.refine_decades * opt.points_per_decade;
  for (std::size_t j = fine; j >= 1; --j) {
    x.push_back(h * std::pow(10.0, -static_cast<double>(j) / static_cast<double>(opt.points_per_decade)));
  }
  for (std::size_t i = 1; i <= opt.cells; ++i) x.push_back(static_cast<double>(i) * h);
  x.back() = 1.0;
  return x;
}

struct SurvivalTable {
  std::size_t m = 2;
  double p = 0.0;
  std::vector<double> x;
  std::vector<double> rho_left;
  std::vector<double> rho_right;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;  // sup |Φρ - ρ|
};

// The all-ones table, Φ^0 1.
inline SurvivalTable ones_table(std::size_t m, double p, const GridOptions& grid = {}) {
  check_m(m);
  check_p(p);
  SurvivalTable t;
  t.m = m;
  t.p = p;
  t.x = make_grid(grid);
  t.rho_left.assign(t.x.size(), 1.0);
  t.rho_right.assign(t.x.size(), 1.0);
  return t;
}

namespace detail {

// Cumulative trapezoid: out[i] = ∫_0^{x_i} f.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  return out;
}

struct Integrals {
  std::vector<double> left_below;   // ∫_0^x f(L)
  std::vector<double> right_above;  // ∫_x^1 f(R)
  double right_total = 0.0;
};

inline Integrals integrals(const SurvivalTable& t) {
  Integrals in;
  in.left_below = cumulative_trapezoid(t.x, t.rho_left);
  const auto right = cumulative_trapezoid(t.x, t.rho_right);
  in.right_total = right.back();
  in.right_above.resize(right.size());
  for (std::size_t i = 0; i < right.size(); ++i) in.right_above[i] = std::max(0.0, in.right_total - right[i]);
  return in;
}

// Value at x = 0: the limit 1 when p ∫ f(R) > 0, else 0.
inline double origin_value(double p, double right_total) { return p > 0.0 && right_total > 0.0 ? 1.0 : 0.0; }

// 1 - x (x - p IL)^a / (x + p IR)^(a+1) written as a product of ratios.
inline double phi_value(double x, double p, double il, double ir, std::size_t a) {
  const double den = x + p * ir;
  const double num = std::max(0.0, x - p * il);
  const double ratio = num / den;
  return 1.0 - (x / den) * std::pow(ratio, static_cast<double>(a));
}

inline double phi_root_value(double x, double p, double il, double ir, std::size_t m) {
  const double den = x + p * ir;
  const double num = std::max(0.0, x - p * il);
  return 1.0 - std::pow(num / den, static_cast<double>(m));
}

}  // namespace detail

// One step of the survival map, on every grid point, for S = L and S = R:
//   (Φf)(S,x) = 1 - x (x - p ∫_0^x f(L)) ^ m(S) / (x + p ∫_x^1 f(R)) ^ (m(S)+1).
inline SurvivalTable phi_apply(const SurvivalTable& t) {
  const auto in = detail::integrals(t);
  SurvivalTable out = t;
  const std::size_t m = t.m;
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (t.x[i] == 0.0) {
      out.rho_left[i] = out.rho_right[i] = detail::origin_value(t.p, in.right_total);
      continue;
    }
    out.rho_left[i] = detail::phi_value(t.x[i], t.p, in.left_below[i], in.right_above[i], left_children(Kind::kLeft, m));
    out.rho_right[i] = detail::phi_value(t.x[i], t.p, in.left_below[i], in.right_above[i], left_children(Kind::kRight, m));
  }
  return out;
}

// (Φf)(∅, x) = 1 - ((x - p ∫_0^x f(L)) / (x + p ∫_x^1 f(R)))^m on the grid.
inline std::vector<double> phi_root(const SurvivalTable& t) {
  const auto in = detail::integrals(t);
  std::vector<double> out(t.x.size());
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    out[i] = t.x[i] == 0.0 ? detail::origin_value(t.p, in.right_total)
                           : detail::phi_root_value(t.x[i], t.p, in.left_below[i], in.right_above[i], t.m);
  }
  return out;
}

// ζ = ∫_0^1 (Φρ)(∅, x) 2x dx, the root position being sqrt(U).
inline double zeta_of_p(const SurvivalTable& t) {
  const auto root = phi_root(t);
  double acc = 0.0;
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    acc += 0.5 * (root[i] * 2.0 * t.x[i] + root[i - 1] * 2.0 * t.x[i - 1]) * (t.x[i] - t.x[i - 1]);
  }
  return std::clamp(acc, 0.0, 1.0);
}

inline double sup_distance(const SurvivalTable& a, const SurvivalTable& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    d = std::max({d, std::abs(a.rho_left[i] - b.rho_left[i]), std::abs(a.rho_right[i] - b.rho_right[i])});
  }
  return d;
}

struct SolveOptions {
  GridOptions grid;
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
};

// Iterates Φ from the all-ones table (the maximal fixed point is reached from
// above). Stops once the sup-norm step is below the tolerance and ζ has also
// settled to that relative tolerance: for small p the whole profile is far
// below any absolute tolerance.
inline SurvivalTable solve_rho(std::size_t m, double p, const SolveOptions& opt = {}) {
  if (!(opt.tolerance > 0.0)) throw ParameterError("solve_rho: tolerance must be positive");
  if (opt.grid.cells < 256) throw ParameterError("solve_rho: at least 256 grid cells required");
  SurvivalTable t = ones_table(m, p, opt.grid);
  double zeta_prev = zeta_of_p(t);
  for (std::size_t k = 1; k <= opt.max_iterations; ++k) {
    SurvivalTable next = phi_apply(t);
    const double step = sup_distance(next, t);
    t = std::move(next);
    t.iterations = k;
    const double zeta = zeta_of_p(t);
    const bool settled = std::abs(zeta - zeta_prev) <= opt.tolerance * zeta;
    zeta_prev = zeta;
    if (step < opt.tolerance && (settled || zeta == 0.0)) {
      t.converged = true;
      break;
    }
  }
  t.residual = sup_distance(phi_apply(t), t);
  return t;
}

// ζ_k = ∫ (Φ^k 1)(∅, x) 2x dx: probability that the percolated root cluster
// reaches depth k.
inline double zeta_k(std::size_t m, double p, std::size_t k, const GridOptions& grid = {}) {
  if (k == 0) return 1.0;
  SurvivalTable t = ones_table(m, p, grid);
  for (std::size_t i = 1; i < k; ++i) t = phi_apply(t);
  return zeta_of_p(t);
}

inline void write_survival_csv(std::ostream& out, const SurvivalTable& t) {
  out << "x,rhoL,rhoR\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < t.x.size(); ++i) out << t.x[i] << ',' << t.rho_left[i] << ',' << t.rho_right[i] << '\n';
}

// ---------------------------------------------------------------------------
// Closed-form envelope and the F, F̃ recursions

namespace detail {

// ∫_0^1 (1 - (x / (x + eps))^power) dx after x = e^{-s}, by adaptive Simpson.
inline double saturation_integral(double eps, double power) {
  if (eps <= 0.0) return 0.0;
  auto g = [eps, power](double s) {
    const double y = eps * std::exp(s);
    return -std::expm1(-power * std::log1p(y)) * std::exp(-s);
  };
  struct Simpson {
    std::function<double(double)> f;
    double adapt(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return adapt(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adapt(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
    double integrate(double a, double b, double rel) const {
      const double fa = f(a);
      const double fb = f(b);
      const double fm = f(0.5 * (a + b));
      const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
      const double tol = std::max(std::abs(whole) * rel, 1e-300);
      return adapt(a, b, fa, fm, fb, whole, tol, 60);
    }
  };
  const Simpson simpson{g};
  // The integrand is ≈ power·eps on [0, log(1/eps)] and ≈ e^{-s} beyond it.
  const double knee = std::max(0.0, -std::log(eps));
  const double end = knee + 60.0;
  double total = 0.0;
  const double pieces[] = {0.0, std::max(0.0, knee - 5.0), knee, knee + 5.0, end};
  for (int i = 0; i < 4; ++i) {
    if (pieces[i + 1] > pieces[i]) total += simpson.integrate(pieces[i], pieces[i + 1], 1e-12);
  }
  return total + std::exp(-end);
}

// Largest root of eps = map(eps) in (0, hi], by bisection on log(eps).
inline double nontrivial_fixed_point(const std::function<double(double)>& map, double hi) {
  auto excess = [&](double e) { return map(e) - e; };
  double lo = 1e-300;
  if (excess(lo) <= 0.0) return 0.0;
  if (excess(hi) >= 0.0) return hi;
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (excess(std::exp(mid)) > 0.0) {
      log_lo = mid;
    } else {
      log_hi = mid;
    }
    if (std::exp(log_hi) - std::exp(log_lo) <= 1e-13 * std::exp(log_hi)) break;
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

}  // namespace detail

// F(ε) = p/(1-p) ∫_0^1 (1 - (1 + ε/x)^{-(m+1)}) dx
inline double upper_recursion(std::size_t m, double p, double eps) {
  return p / (1.0 - p) * detail::saturation_integral(eps, static_cast<double>(m + 1));
}

// F̃(ε) = p ∫_0^1 (1 - (1 + ε/x)^{-(m-1)}) dx
inline double lower_recursion(std::size_t m, double p, double eps) {
  return p * detail::saturation_integral(eps, static_cast<double>(m - 1));
}

struct ZetaBounds {
  double lower = 0.0;          // e^{-1/(p(m-1))}
  double upper_raw = 0.0;      // 2m e^{-(1-2p)/((m+1)p)}
  double upper = 0.0;          // min(upper_raw, 1)
  bool vacuous = false;        // upper_raw > 1
  double eps_plus = 0.0;       // non-trivial fixed point of F on (0, p/(1-p)]
  double eps_minus = 0.0;      // non-trivial fixed point of F̃ on (0, p]
};

inline ZetaBounds zeta_bounds(std::size_t m, double p) {
  check_m(m);
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("zeta_bounds needs p in (0,1)");
  ZetaBounds b;
  const double md = static_cast<double>(m);
  b.lower = std::exp(-1.0 / (p * (md - 1.0)));
  b.upper_raw = 2.0 * md * std::exp(-(1.0 - 2.0 * p) / ((md + 1.0) * p));
  b.vacuous = b.upper_raw > 1.0;
  b.upper = std::min(b.upper_raw, 1.0);
  b.eps_plus = detail::nontrivial_fixed_point([&](double e) { return upper_recursion(m, p, e); }, p / (1.0 - p));
  b.eps_minus = detail::nontrivial_fixed_point([&](double e) { return lower_recursion(m, p, e); }, p);
  return b;
}

struct ZetaRow {
  double p = 0.0;
  double zeta = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

inline ZetaRow zeta_row(std::size_t m, double p, const SolveOptions& opt = {}) {
  ZetaRow row;
  row.p = p;
  const auto table = solve_rho(m, p, opt);
  row.zeta = zeta_of_p(table);
  row.iterations = table.iterations;
  row.converged = table.converged;
  if (p > 0.0 && p < 1.0) {
    const auto b = zeta_bounds(m, p);
    row.lower = b.lower;
    row.upper = b.upper;
    row.eps_plus = b.eps_plus;
    row.eps_minus = b.eps_minus;
  } else {
    row.lower = row.upper = p >= 1.0 ? 1.0 : 0.0;
  }
  return row;
}

inline void write_zeta_csv_header(std::ostream& out) { out << "p,zeta,lower,upper,eps_plus,eps_minus\n"; }
inline void write_zeta_csv_row(std::ostream& out, const ZetaRow& r) {
  out << std::setprecision(17) << r.p << ',' << r.zeta << ',' << r.lower << ',' << r.upper << ',' << r.eps_plus
      << ',' << r.eps_minus << '\n';
}

// ---------------------------------------------------------------------------
// Monte Carlo reach probabilities

inline constexpr std::size_t kMaxMonteCarloDepth = 8;

struct ReachStats {
  std::size_t overflowed = 0;   // right-child counts that hit the cap
  std::size_t tiny = 0;         // nodes below kTinyPosition, declared surviving
};

namespace detail {

// Whether a node of label `kind` at x reaches `levels` generations below it in
// the percolated tree. Children are generated lazily and the search stops at
// the first successful child.
inline bool reaches(Kind kind, double x, std::size_t levels, std::size_t m, double p, Rng& rng, ReachStats& stats) {
  if (levels == 0) return true;
  if (x < kTinyPosition) {
    ++stats.tiny;
    return true;
  }
  for (std::size_t c = 0; c < left_children(kind, m); ++c) {
    const double child = x * rng.uniform();
    if (rng.bernoulli(p) && reaches(Kind::kLeft, child, levels - 1, m, p, rng, stats)) return true;
  }
  bool overflow = false;
  const std::size_t right = sample_right_count(kind, x, m, rng, overflow);
  if (overflow) ++stats.overflowed;
  for (std::size_t c = 0; c < right; ++c) {
    const double child = x + (1.0 - x) * rng.uniform();
    if (rng.bernoulli(p) && reaches(Kind::kRight, child, levels - 1, m, p, rng, stats)) return true;
  }
  return false;
}

}  // namespace detail

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

struct SurvivalMonteCarlo {
  MonteCarloEstimate zeta;                  // root reaches depth k
  std::vector<double> x;                    // positions of the planted nodes
  std::vector<MonteCarloEstimate> rho_left;
  std::vector<MonteCarloEstimate> rho_right;
  ReachStats stats;
};

namespace detail {
inline MonteCarloEstimate bernoulli_estimate(std::size_t hits, std::size_t trials) {
  MonteCarloEstimate e;
  e.trials = trials;
  if (trials == 0) return e;
  e.mean = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = trials > 1 ? std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials - 1)) : 0.0;
  return e;
}
}  // namespace detail

// Depth-k reach frequencies of the percolated Pólya-point tree: ζ̂_k from a
// root at sqrt(U), and ρ̂_k(S, x) from planted nodes at the given positions.
inline SurvivalMonteCarlo survival_mc(std::size_t m, double p, std::size_t depth, std::size_t trials,
                                      std::uint64_t seed, const std::vector<double>& planted = {},
                                      std::size_t threads = default_threads()) {
  check_m(m);
  check_p(p);
  if (trials < 1) throw ParameterError("survival_mc needs trials >= 1");
  if (depth > kMaxMonteCarloDepth) throw ParameterError("survival_mc depth is capped at 8");
  for (double x : planted) {
    if (!(x > 0.0 && x <= 1.0)) throw ParameterError("planted positions must lie in (0, 1]");
  }
  const std::size_t columns = 1 + 2 * planted.size();
  std::vector<std::uint8_t> hit(trials * columns, 0);
  std::vector<ReachStats> stats(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, Stream::kTree, t));
    const double root = std::sqrt(rng.uniform());
    hit[t * columns] = detail::reaches(Kind::kRoot, root, depth, m, p, rng, stats[t]);
    for (std::size_t j = 0; j < planted.size(); ++j) {
      hit[t * columns + 1 + 2 * j] = detail::reaches(Kind::kLeft, planted[j], depth, m, p, rng, stats[t]);
      hit[t * columns + 2 + 2 * j] = detail::reaches(Kind::kRight, planted[j], depth, m, p, rng, stats[t]);
    }
  });
  SurvivalMonteCarlo out;
  out.x = planted;
  std::vector<std::size_t> counts(columns, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t c = 0; c < columns; ++c) counts[c] += hit[t * columns + c];
    out.stats.overflowed += stats[t].overflowed;
    out.stats.tiny += stats[t].tiny;
  }
  out.zeta = detail::bernoulli_estimate(counts[0], trials);
  for (std::size_t j = 0; j < planted.size(); ++j) {
    out.rho_left.push_back(detail::bernoulli_estimate(counts[1 + 2 * j], trials));
    out.rho_right.push_back(detail::bernoulli_estimate(counts[2 + 2 * j], trials));
  }
  return out;
}


namespace detail {

// Deepest generation (capped at `levels`) reached below a node in the
// percolated tree; stops exploring as soon as the cap is reached.
inline std::size_t reach_depth(Kind kind, double x, std::size_t levels, std::size_t m, double p, Rng& rng,
                               ReachStats& stats) {
  if (levels == 0) return 0;
  if (x < kTinyPosition) {
    ++stats.tiny;
    return levels;
  }
  std::size_t best = 0;
  for (std::size_t c = 0; c < left_children(kind, m); ++c) {
    const double child = x * rng.uniform();
    if (!rng.bernoulli(p)) continue;
    best = std::max(best, 1 + reach_depth(Kind::kLeft, child, levels - 1, m, p, rng, stats));
    if (best == levels) return best;
  }
  bool overflow = false;
  const std::size_t right = sample_right_count(kind, x, m, rng, overflow);
  if (overflow) ++stats.overflowed;
  for (std::size_t c = 0; c < right; ++c) {
    const double child = x + (1.0 - x) * rng.uniform();
    if (!rng.bernoulli(p)) continue;
    best = std::max(best, 1 + reach_depth(Kind::kRight, child, levels - 1, m, p, rng, stats));
    if (best == levels) return best;
  }
  return best;
}

}  // namespace detail

struct DepthProfile {
  std::vector<MonteCarloEstimate> zeta;  // zeta[k]: root cluster reaches depth k, k = 0..max_depth
  ReachStats stats;
};

// ζ̂_k for every k <= max_depth from one set of trees: each tree is explored
// once and contributes to all depths it reaches.
inline DepthProfile depth_profile_mc(std::size_t m, double p, std::size_t max_depth, std::size_t trials,
                                     std::uint64_t seed, std::size_t threads = default_threads()) {
  check_m(m);
  check_p(p);
  if (trials < 1) throw ParameterError("depth_profile_mc needs trials >= 1");
  if (max_depth > kMaxMonteCarloDepth) throw ParameterError("depth_profile_mc depth is capped at 8");
  std::vector<std::uint8_t> depth(trials, 0);
  std::vector<ReachStats> stats(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, Stream::kTree, t));
    const double root = std::sqrt(rng.uniform());
    depth[t] = static_cast<std::uint8_t>(detail::reach_depth(Kind::kRoot, root, max_depth, m, p, rng, stats[t]));
  });
  DepthProfile out;
  std::vector<std::size_t> at_least(max_depth + 1, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t k = 0; k <= depth[t]; ++k) ++at_least[k];
    out.stats.overflowed += stats[t].overflowed;
    out.stats.tiny += stats[t].tiny;
  }
  for (std::size_t k = 0; k <= max_depth; ++k) out.zeta.push_back(detail::bernoulli_estimate(at_least[k], trials));
  return out;
}

}  // namespace perclab::polya
