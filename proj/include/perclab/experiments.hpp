#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "perclab/components.hpp"
#include "perclab/error.hpp"
#include "perclab/generators.hpp"
#include "perclab/graph.hpp"
#include "perclab/parallel.hpp"
#include "perclab/percolation.hpp"
#include "perclab/polya.hpp"
#include "perclab/rng.hpp"

namespace perclab {

// Statistics of one trial: one graph, one G(p) mask, one D_G(p) mask.
struct ExperimentRecord {
  std::string model;
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  double c1_frac = 0.0;
  double c2_frac = 0.0;
  double scc1_frac = 0.0;
  double scc2_frac = 0.0;
  double in_frac = 0.0;           // |SCC1^-| / n
  double out_frac = 0.0;          // |SCC1^+| / n
  double left_wing_frac = 0.0;
  double right_wing_frac = 0.0;
  double dust_frac = 0.0;
  double large_out_frac = 0.0;    // |L+| / n: fan-out >= fanout_fraction * n
  double large_in_frac = 0.0;     // |L-| / n
  double dust_large_out = 0.0;    // share of dust vertices with fan-out >= fanout_fraction * n
  double zpm_frac = 0.0;          // vertices with fan-in and fan-out >= fanout_fraction * n, over n
  double wall_ms = 0.0;
};

struct TrialOptions {
  double fanout_fraction = 0.05;
};

inline std::size_t fraction_threshold(double fraction, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
}

inline double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

// Graph seed of a trial: the model's own seed is replaced so that every trial
// draws a fresh graph.
inline Graph trial_graph(const ModelSpec& spec, std::uint64_t trial_seed) {
  ModelSpec s = spec;
  s.seed = derive_seed(trial_seed, Stream::kGraph);
  return generate(s);
}

inline ExperimentRecord run_trial(const ModelSpec& spec, double p, std::uint64_t seed, const TrialOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (!(opt.fanout_fraction > 0.0 && opt.fanout_fraction <= 1.0)) {
    throw ParameterError("fan-out threshold fraction must lie in (0,1]");
  }
  const Graph g = trial_graph(spec, seed);
  const std::size_t n = g.num_vertices();
  ExperimentRecord r;
  r.model = spec.to_string();
  r.n = n;
  r.p = p;
  r.seed = seed;

  const auto bond = bond_percolate(g, p, derive_seed(seed, Stream::kBond));
  const auto cc = connected_components(g, bond);
  r.c1_frac = ratio(cc.size_of(0), n);
  r.c2_frac = ratio(cc.size_of(1), n);

  const auto arcs = oriented_percolate(g, p, derive_seed(seed, Stream::kOriented));
  const DiGraphView d = digraph(g, arcs);
  const auto sccs = strongly_connected_components(d);
  r.scc1_frac = ratio(sccs.size_of(0), n);
  r.scc2_frac = ratio(sccs.size_of(1), n);
  const auto bt = bowtie_decompose(d, sccs);
  r.in_frac = ratio(bt.in_set.size(), n);
  r.out_frac = ratio(bt.out_set.size(), n);
  r.left_wing_frac = ratio(bt.left_wing.size(), n);
  r.right_wing_frac = ratio(bt.right_wing.size(), n);
  r.dust_frac = ratio(bt.dust.size(), n);

  const std::size_t k = fraction_threshold(opt.fanout_fraction, n);
  const auto cond = condense(d);
  const auto big_out = reach_at_least(d, k, Direction::kOut, cond);
  const auto big_in = reach_at_least(d, k, Direction::kIn, cond);
  std::size_t out_count = 0, in_count = 0, both = 0, dust_big = 0;
  for (Vertex v = 0; v < n; ++v) {
    out_count += big_out[v];
    in_count += big_in[v];
    both += big_out[v] & big_in[v];
  }
  for (Vertex v : bt.dust) dust_big += big_out[v];
  r.large_out_frac = ratio(out_count, n);
  r.large_in_frac = ratio(in_count, n);
  r.zpm_frac = ratio(both, n);
  r.dust_large_out = ratio(dust_big, bt.dust.size());
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Per-field accessors, in CSV column order.
struct RecordField {
  const char* name;
  double ExperimentRecord::*member;
};

inline constexpr RecordField kRecordFields[] = {
    {"c1_frac", &ExperimentRecord::c1_frac},
    {"c2_frac", &ExperimentRecord::c2_frac},
    {"scc1_frac", &ExperimentRecord::scc1_frac},
    {"scc2_frac", &ExperimentRecord::scc2_frac},
    {"in_frac", &ExperimentRecord::in_frac},
    {"out_frac", &ExperimentRecord::out_frac},
    {"left_wing_frac", &ExperimentRecord::left_wing_frac},
    {"right_wing_frac", &ExperimentRecord::right_wing_frac},
    {"dust_frac", &ExperimentRecord::dust_frac},
    {"large_out_frac", &ExperimentRecord::large_out_frac},
    {"large_in_frac", &ExperimentRecord::large_in_frac},
    {"dust_large_out", &ExperimentRecord::dust_large_out},
    {"zpm_frac", &ExperimentRecord::zpm_frac},
};

// Wall time is left out so that reruns give byte-identical bodies.
inline void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "model,n,p,seed";
  for (const auto& f : kRecordFields) out << ',' << f.name;
  out << '\n' << std::setprecision(17);
  for (const auto& r : records) {
    out << '"' << r.model << "\"," << r.n << ',' << r.p << ',' << r.seed;
    for (const auto& f : kRecordFields) out << ',' << r.*(f.member);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Reference limits

// Giant fraction of the d-regular tree under bond percolation. y is the
// probability that an edge leads nowhere (closed, or open into a finite
// branch): the smallest root of y = 1 - p + p y^{d-1}; then ζ = 1 - y^d.
inline double regular_tree_zeta(std::size_t d, double p) {
  if (d < 2) return 0.0;
  double y = 0.0;
  for (int it = 0; it < 1000000; ++it) {
    const double next = 1.0 - p + p * std::pow(y, static_cast<double>(d - 1));
    if (std::abs(next - y) < 1e-15) {
      y = next;
      break;
    }
    y = next;
  }
  return std::max(0.0, 1.0 - std::pow(y, static_cast<double>(d)));
}

// Giant fraction of the Poisson(c p) Galton-Watson tree: ζ = 1 - e^{-c p ζ}.
inline double poisson_tree_zeta(double mean_degree, double p) {
  const double lambda = mean_degree * p;
  double z = 1.0;
  for (int it = 0; it < 100000; ++it) {
    const double next = 1.0 - std::exp(-lambda * z);
    if (std::abs(next - z) < 1e-15) return next;
    z = next;
  }
  return z;
}

// ζ(p) of the local limit, when one is known for the model.
inline std::optional<double> reference_zeta(const ModelSpec& spec, double p) {
  switch (spec.kind) {
    case ModelKind::kRandomRegular:
      return regular_tree_zeta(spec.d, p);
    case ModelKind::kErdosRenyi:
      return poisson_tree_zeta(spec.mean_degree, p);
    case ModelKind::kPreferentialAttachment:
      return polya::zeta_of_p(polya::solve_rho(spec.m, p));
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Sweeps

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return m;
}

struct SweepRow {
  double p = 0.0;
  std::size_t trials = 0;
  std::vector<Moments> fields;  // one per kRecordFields entry
  std::optional<double> zeta;
  std::optional<double> zeta_squared;

  Moments field(std::string_view name) const {
    for (std::size_t i = 0; i < std::size(kRecordFields); ++i) {
      if (name == kRecordFields[i].name) return fields[i];
    }
    throw ParameterError("unknown record field: " + std::string(name));
  }
};

struct SweepSummary {
  std::string model;
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;
  std::vector<ExperimentRecord> records;
};

// Seed of trial t under a master seed. The same trial index reuses the same
// graph and percolation uniforms at every p, so curves are monotonically
// coupled across the grid.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t t) {
  return derive_seed(master, Stream::kTrial, t);
}

inline SweepRow summarize(double p, const std::vector<ExperimentRecord>& records, const ModelSpec& spec,
                          bool with_reference) {
  SweepRow row;
  row.p = p;
  row.trials = records.size();
  for (const auto& f : kRecordFields) {
    std::vector<double> xs;
    xs.reserve(records.size());
    for (const auto& r : records) xs.push_back(r.*(f.member));
    row.fields.push_back(moments(xs));
  }
  if (with_reference) {
    row.zeta = reference_zeta(spec, p);
    if (row.zeta) row.zeta_squared = *row.zeta * *row.zeta;
  }
  return row;
}

inline SweepSummary sweep(const ModelSpec& spec, const std::vector<double>& p_grid, std::size_t trials,
                          std::uint64_t seed, const TrialOptions& opt = {}, std::size_t threads = default_threads(),
                          bool with_reference = true) {
  if (p_grid.empty()) throw ParameterError("sweep needs a non-empty p grid");
  if (trials < 1) throw ParameterError("sweep needs trials >= 1");
  spec.validate();
  SweepSummary s;
  s.model = spec.to_string();
  s.seed = seed;
  s.records.resize(p_grid.size() * trials);
  parallel_for(s.records.size(), threads, [&](std::size_t i) {
    const std::size_t pi = i / trials;
    s.records[i] = run_trial(spec, p_grid[pi], trial_seed(seed, i % trials), opt);
  });
  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    std::vector<ExperimentRecord> slice(s.records.begin() + static_cast<std::ptrdiff_t>(pi * trials),
                                        s.records.begin() + static_cast<std::ptrdiff_t>((pi + 1) * trials));
    s.rows.push_back(summarize(p_grid[pi], slice, spec, with_reference));
  }
  return s;
}

inline void write_sweep_csv(std::ostream& out, const SweepSummary& s) {
  out << "model,seed,p,trials";
  for (const auto& f : kRecordFields) out << ',' << f.name << "_mean," << f.name << "_se";
  out << ",zeta,zeta_sq\n" << std::setprecision(17);
  for (const auto& row : s.rows) {
    out << '"' << s.model << "\"," << s.seed << ',' << row.p << ',' << row.trials;
    for (const auto& m : row.fields) out << ',' << m.mean << ',' << m.std_error;
    out << ',';
    if (row.zeta) out << *row.zeta;
    out << ',';
    if (row.zeta_squared) out << *row.zeta_squared;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Threshold bisection

// |C1|/n of one G(p) sample on the trial's graph.
inline double giant_fraction(const Graph& g, double p, std::uint64_t trial) {
  const auto cc = connected_components(g, bond_percolate(g, p, derive_seed(trial, Stream::kBond)));
  return ratio(cc.size_of(0), g.num_vertices());
}

struct Probe {
  double p = 0.0;
  double event_frequency = 0.0;  // share of trials with |C1|/n >= c
  double mean_c1 = 0.0;
};

struct PcEstimate {
  double p_hat = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<Probe> probes;
};

// Bisection on p for the event {|C1|/n >= c} having frequency at least 1/2
// over `trials` samples. Trial graphs are drawn once and reused by every
// probe, with coupled percolation uniforms, so the frequency is monotone in p.
inline PcEstimate estimate_pc(const ModelSpec& spec, double c, double tolerance, std::size_t trials,
                              std::uint64_t seed, std::size_t threads = default_threads()) {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("estimate_pc needs c in (0,1)");
  if (!(tolerance >= 0.005)) throw ParameterError("estimate_pc needs tolerance >= 0.005");
  if (trials < 1) throw ParameterError("estimate_pc needs trials >= 1");
  spec.validate();
  std::vector<Graph> graphs;
  graphs.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) graphs.push_back(trial_graph(spec, trial_seed(seed, t)));
  PcEstimate est;
  double lo = 0.0, hi = 1.0;
  std::vector<double> fractions(trials);
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    parallel_for(trials, threads, [&](std::size_t t) { fractions[t] = giant_fraction(graphs[t], mid, trial_seed(seed, t)); });
    Probe probe;
    probe.p = mid;
    std::size_t hits = 0;
    for (double f : fractions) {
      hits += f >= c;
      probe.mean_c1 += f;
    }
    probe.mean_c1 /= static_cast<double>(trials);
    probe.event_frequency = ratio(hits, trials);
    est.probes.push_back(probe);
    if (probe.event_frequency >= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  est.lower = lo;
  est.upper = hi;
  est.p_hat = 0.5 * (lo + hi);
  return est;
}

// ---------------------------------------------------------------------------
// Vertices with large fan-in and fan-out

// Mean over trials of #{v : |C+(v)| >= k and |C-(v)| >= k} / n in D_G(p).
inline Moments zeta_pm_estimate(const ModelSpec& spec, double p, std::size_t k, std::size_t trials,
                                std::uint64_t seed, std::size_t threads = default_threads()) {
  if (k < 1) throw ParameterError("zeta_pm_estimate needs k >= 1");
  if (trials < 1) throw ParameterError("zeta_pm_estimate needs trials >= 1");
  spec.validate();
  std::vector<double> xs(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto ts = trial_seed(seed, t);
    const Graph g = trial_graph(spec, ts);
    const DiGraphView d = digraph(g, oriented_percolate(g, p, derive_seed(ts, Stream::kOriented)));
    const auto cond = condense(d);
    const auto out = reach_at_least(d, k, Direction::kOut, cond);
    const auto in = reach_at_least(d, k, Direction::kIn, cond);
    std::size_t both = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) both += out[v] & in[v];
    xs[t] = ratio(both, g.num_vertices());
  });
  return moments(xs);
}

// ---------------------------------------------------------------------------
// Influence sums

inline std::size_t largest_scc_size(const DiGraphView& d) {
  const auto raw = detail::tarjan(d);
  std::vector<std::size_t> sizes(raw.count, 0);
  for (auto id : raw.label) ++sizes[id];
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

// Monte Carlo estimate of d/dp E|SCC1| in D_G(p) through the influence sum
// Σ_e E|Δ_e f| = 2p(1-p) d/dp E f, with f = |SCC1| and
// Δ_e f = f - (p f_e+ + (1-p) f_e-) over the 2|E| arcs.
inline Moments russo_derivative(const Graph& g, double p, std::size_t trials, std::uint64_t seed,
                                std::size_t threads = default_threads()) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("russo_derivative needs p in (0,1)");
  if (trials < 1) throw ParameterError("russo_derivative needs trials >= 1");
  std::vector<double> xs(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    BitVector arcs = oriented_percolate(g, p, derive_seed(seed, Stream::kRusso, t)).kept;
    const double f = static_cast<double>(largest_scc_size(DiGraphView(g, arcs)));
    double influence = 0.0;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const bool present = arcs.test(a);
      arcs.set(a, !present);
      const double flipped = static_cast<double>(largest_scc_size(DiGraphView(g, arcs)));
      arcs.set(a, present);
      const double f_plus = present ? f : flipped;
      const double f_minus = present ? flipped : f;
      influence += std::abs(f - (p * f_plus + (1.0 - p) * f_minus));
    }
    xs[t] = influence / (2.0 * p * (1.0 - p));
  });
  return moments(xs);
}

// Plain Monte Carlo E|SCC1| in D_G(p). Trial t uses the same uniforms at
// every p, so differences across p are coupled.
inline Moments expected_largest_scc_mc(const Graph& g, double p, std::size_t trials, std::uint64_t seed,
                                       std::size_t threads = default_threads()) {
  if (trials < 1) throw ParameterError("expected_largest_scc_mc needs trials >= 1");
  std::vector<double> xs(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    xs[t] = static_cast<double>(largest_scc_size(digraph(g, oriented_percolate(g, p, derive_seed(seed, Stream::kRusso, t)))));
  });
  return moments(xs);
}

// ---------------------------------------------------------------------------
// Concentration

struct VarianceRow {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance of |SCC1|/n
};

inline std::vector<VarianceRow> variance_diagnostic(const ModelSpec& spec, double p, const std::vector<std::size_t>& sizes,
                                                    std::size_t trials, std::uint64_t seed,
                                                    std::size_t threads = default_threads()) {
  if (sizes.size() < 2) throw ParameterError("variance_diagnostic needs at least two sizes");
  if (trials < 2) throw ParameterError("variance_diagnostic needs trials >= 2");
  std::vector<VarianceRow> rows;
  for (std::size_t n : sizes) {
    ModelSpec s = spec;
    s.n = n;
    s.validate();
    std::vector<double> xs(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      const auto ts = trial_seed(seed, t);
      const Graph g = trial_graph(s, ts);
      const DiGraphView d = digraph(g, oriented_percolate(g, p, derive_seed(ts, Stream::kOriented)));
      xs[t] = ratio(largest_scc_size(d), n);
    });
    const auto m = moments(xs);
    VarianceRow row;
    row.n = n;
    row.mean = m.mean;
    row.variance = m.std_error * m.std_error * static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace perclab
