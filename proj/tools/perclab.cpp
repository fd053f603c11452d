#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "perclab/components.hpp"
#include "perclab/error.hpp"
#include "perclab/expansion.hpp"
#include "perclab/experiments.hpp"
#include "perclab/generators.hpp"
#include "perclab/percolation.hpp"
#include "perclab/polya.hpp"

using namespace perclab;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string model = "rr";
  std::size_t m = 2;
  std::size_t d = 3;
  std::size_t n = 1000;
  double mean_degree = 2.0;
  double p = 0.5;
  std::string p_grid;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::string eps = "0.25";
  double alpha = 0.5;
  double dbar = 1e9;
  double frac = 0.05;
  double fanout = 0.05;
  std::size_t grid_n = 2048;
  double tol = 1e-10;
  std::string out;
  std::string svg;
  std::string graph;
  std::string mask;
  std::string kind = "arc";
  std::string table;
  std::size_t threads = default_threads();
};

ModelSpec model_spec(const Options& o) {
  ModelSpec s;
  if (o.model.find('(') != std::string::npos) {
    s = ModelSpec::parse(o.model);
  } else if (o.model == "pa") {
    s = ModelSpec::pa(o.m, o.n);
  } else if (o.model == "rr") {
    s = ModelSpec::random_regular(o.d, o.n);
  } else if (o.model == "er") {
    s = ModelSpec::erdos_renyi(o.mean_degree, o.n);
  } else if (o.model == "complete") {
    s = ModelSpec::complete(o.n);
  } else {
    throw ParameterError("unknown model: " + o.model);
  }
  s.seed = o.seed;
  s.validate();
  return s;
}

Graph load_graph(const Options& o) {
  if (o.graph.empty()) return generate(model_spec(o));
  std::ifstream in(o.graph);
  if (!in) throw IoError("cannot open graph file: " + o.graph);
  return read_edge_list(in);
}

double rounded(double x) { return std::round(x * 1e12) / 1e12; }

std::vector<double> p_values(const Options& o) {
  if (o.p_grid.empty()) return {o.p};
  std::vector<double> parts;
  std::stringstream ss(o.p_grid);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("malformed --p-grid, expected a:b:step");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw ParameterError("malformed --p-grid, expected a:b:step with step > 0 and a <= b");
  }
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double p = rounded(parts[0] + static_cast<double>(i) * parts[2]);
    if (p > parts[1] + 1e-9) break;
    if (p < 0.0 || p > 1.0) throw ParameterError("p-grid leaves [0,1]");
    grid.push_back(p);
  }
  return grid;
}

std::vector<double> eps_values(const Options& o) {
  std::vector<double> out;
  std::stringstream ss(o.eps);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParameterError("malformed --eps: " + o.eps);
    }
  }
  if (out.empty()) throw ParameterError("--eps needs at least one value");
  return out;
}

// Runs `body` against the --out file, or stdout when none is given.
template <class F>
void with_output(const std::string& path, F&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  body(out);
  if (!out) throw IoError("write failed: " + path);
}

void cmd_generate(const Options& o) {
  const Graph g = generate(model_spec(o));
  with_output(o.out, [&](std::ostream& out) { write_edge_list(out, g); });
}

void cmd_percolate(const Options& o) {
  const Graph g = load_graph(o);
  if (o.kind != "edge" && o.kind != "arc") throw ParameterError("--kind must be edge or arc");
  const Mask m = o.kind == "edge" ? bond_percolate(g, o.p, o.seed) : oriented_percolate(g, o.p, o.seed);
  with_output(o.out, [&](std::ostream& out) { write_mask(out, m); });
}

json partition_json(const Partition& part, std::size_t n) {
  json j;
  j["count"] = part.count();
  j["largest"] = part.size_of(0);
  j["second"] = part.size_of(1);
  j["largest_frac"] = ratio(part.size_of(0), n);
  return j;
}

void cmd_analyze(const Options& o) {
  const Graph g = load_graph(o);
  const std::size_t n = g.num_vertices();
  Mask arcs;
  if (o.mask.empty()) {
    arcs = oriented_percolate(g, o.p, o.seed);
  } else {
    std::ifstream in(o.mask);
    if (!in) throw IoError("cannot open mask file: " + o.mask);
    arcs = read_mask(in);
    if (arcs.kind != MaskKind::kArc) throw InvalidInput("analyze needs an arc mask");
    if (arcs.graph_hash != g.hash()) throw InvalidInput("mask was drawn on a different graph");
  }
  const auto bond = bond_percolate(g, arcs.p, arcs.seed);
  const DiGraphView d = digraph(g, arcs);
  const auto sccs = strongly_connected_components(d);
  const auto bt = bowtie_decompose(d, sccs);
  json j;
  j["n"] = n;
  j["edges"] = g.num_edges();
  j["p"] = arcs.p;
  j["seed"] = arcs.seed;
  j["components"] = partition_json(connected_components(g, bond), n);
  j["scc"] = partition_json(sccs, n);
  j["bowtie"] = {{"core", bt.scc1.size()},      {"in", bt.in_set.size()},   {"out", bt.out_set.size()},
                 {"left_wing", bt.left_wing.size()}, {"right_wing", bt.right_wing.size()}, {"dust", bt.dust.size()}};
  with_output(o.out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void cmd_pc(const Options& o) {
  const double tolerance = o.tol < 0.005 ? 0.005 : o.tol;
  const auto est = estimate_pc(model_spec(o), o.frac, tolerance, o.trials, o.seed, o.threads);
  json j;
  j["model"] = model_spec(o).to_string();
  j["c"] = o.frac;
  j["p_hat"] = est.p_hat;
  j["lower"] = est.lower;
  j["upper"] = est.upper;
  j["probes"] = json::array();
  for (const auto& pr : est.probes) {
    j["probes"].push_back({{"p", pr.p}, {"event_frequency", pr.event_frequency}, {"mean_c1", pr.mean_c1}});
  }
  with_output(o.out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void write_svg(const std::string& path, const SweepSummary& s) {
  const double w = 640, h = 400, pad = 50;
  auto px = [&](double p) { return pad + p * (w - 2 * pad); };
  auto py = [&](double y) { return h - pad - y * (h - 2 * pad); };
  auto polyline = [&](const std::string& color, auto value) {
    std::ostringstream pts;
    for (const auto& row : s.rows) {
      const auto v = value(row);
      if (v) pts << px(row.p) << ',' << py(*v) << ' ';
    }
    return "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + pts.str() + "\"/>\n";
  };
  with_output(path, [&](std::ostream& out) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << pad << "\" y2=\"" << py(1) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double t = i / 4.0;
      out << "<text x=\"" << px(t) << "\" y=\"" << h - pad + 18 << "\" font-size=\"11\" text-anchor=\"middle\">" << t << "</text>\n";
      out << "<text x=\"" << pad - 8 << "\" y=\"" << py(t) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << t << "</text>\n";
    }
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" font-size=\"12\" text-anchor=\"middle\">p</text>\n";
    out << polyline("steelblue", [](const SweepRow& r) { return std::optional<double>(r.field("c1_frac").mean); });
    out << polyline("firebrick", [](const SweepRow& r) { return std::optional<double>(r.field("scc1_frac").mean); });
    out << polyline("gray", [](const SweepRow& r) { return r.zeta; });
    out << "<text x=\"" << pad + 10 << "\" y=\"" << pad << "\" font-size=\"12\" fill=\"steelblue\">c1_frac</text>\n";
    out << "<text x=\"" << pad + 10 << "\" y=\"" << pad + 16 << "\" font-size=\"12\" fill=\"firebrick\">scc1_frac</text>\n";
    out << "<text x=\"" << pad + 10 << "\" y=\"" << pad + 32 << "\" font-size=\"12\" fill=\"gray\">zeta</text>\n";
    out << "</svg>\n";
  });
}

void cmd_sweep(const Options& o) {
  TrialOptions topt;
  topt.fanout_fraction = o.fanout;
  const auto s = sweep(model_spec(o), p_values(o), o.trials, o.seed, topt, o.threads);
  with_output(o.out, [&](std::ostream& out) { write_sweep_csv(out, s); });
  if (!o.svg.empty()) write_svg(o.svg, s);
}

void cmd_polya(const Options& o) {
  polya::SolveOptions sopt;
  sopt.grid.cells = o.grid_n;
  sopt.tolerance = o.tol;
  std::vector<polya::ZetaRow> rows;
  for (double p : p_values(o)) rows.push_back(polya::zeta_row(o.m, p, sopt));
  with_output(o.out, [&](std::ostream& out) {
    polya::write_zeta_csv_header(out);
    for (const auto& r : rows) polya::write_zeta_csv_row(out, r);
  });
  if (!o.table.empty()) {
    const auto t = polya::solve_rho(o.m, o.p, sopt);
    with_output(o.table, [&](std::ostream& out) { polya::write_survival_csv(out, t); });
  }
}

void cmd_expansion(const Options& o) {
  const Graph g = load_graph(o);
  json arr = json::array();
  for (const auto& r : certify_epsilon_grid(g, o.alpha, eps_values(o), o.dbar)) {
    json j;
    j["epsilon"] = r.epsilon;
    j["alpha"] = r.alpha;
    j["dbar"] = r.dbar;
    j["avg_degree"] = r.avg_degree;
    j["exact"] = r.exact ? json(*r.exact) : json(nullptr);
    j["exact_witness"] = r.exact_witness;
    j["lambda2"] = r.lambda2;
    j["spectral_lower"] = r.spectral_lower;
    j["sweep_upper"] = r.sweep_upper;
    j["sweep_witness"] = r.sweep_witness;
    j["connected"] = r.connected;
    j["spectral_converged"] = r.spectral_converged;
    j["verdict"] = to_string(r.verdict);
    arr.push_back(j);
  }
  with_output(o.out, [&](std::ostream& out) { out << arr.dump(2) << '\n'; });
}

void cmd_oracle(const Options& o) {
  const Graph g = load_graph(o);
  with_output(o.out, [&](std::ostream& out) {
    out << "v,k,component_law,fanout_law,fanin_law,max_abs_diff\n" << std::setprecision(17);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      const auto comp = exact_cluster_size_law(g, o.p, v, ClusterLaw::kComponent);
      const auto fo = exact_cluster_size_law(g, o.p, v, ClusterLaw::kFanOut);
      const auto fi = exact_cluster_size_law(g, o.p, v, ClusterLaw::kFanIn);
      for (std::size_t k = 1; k <= g.num_vertices(); ++k) {
        const double a = detail::tail_probability(comp, k);
        const double b = detail::tail_probability(fo, k);
        const double c = detail::tail_probability(fi, k);
        out << v << ',' << k << ',' << a << ',' << b << ',' << c << ','
            << std::max(std::abs(a - b), std::abs(a - c)) << '\n';
      }
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perclab: percolation experiments on finite graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file, '#' comments");
  Options o;
  app.add_option("--model", o.model, "pa | rr | er | complete, or a compact spec such as pa(m=2,n=1000)")->capture_default_str();
  app.add_option("--m", o.m, "attachment edges per vertex")->capture_default_str();
  app.add_option("--d", o.d, "degree of the random regular graph")->capture_default_str();
  app.add_option("--n", o.n, "number of vertices")->capture_default_str();
  app.add_option("--mean-degree", o.mean_degree, "Erdos-Renyi mean degree")->capture_default_str();
  app.add_option("--p", o.p, "retention probability")->capture_default_str();
  app.add_option("--p-grid", o.p_grid, "a:b:step, inclusive");
  app.add_option("--trials", o.trials, "independent trials")->capture_default_str();
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--eps", o.eps, "epsilon, or a comma separated list")->capture_default_str();
  app.add_option("--alpha", o.alpha, "expansion target")->capture_default_str();
  app.add_option("--dbar", o.dbar, "average degree cap")->capture_default_str();
  app.add_option("--c", o.frac, "giant fraction for the threshold estimate")->capture_default_str();
  app.add_option("--fanout", o.fanout, "fan-out threshold as a fraction of n")->capture_default_str();
  app.add_option("--grid-n", o.grid_n, "uniform cells in the survival solver grid")->capture_default_str();
  app.add_option("--tol", o.tol, "solver tolerance, or bisection width for pc")->capture_default_str();
  app.add_option("--out", o.out, "output file (stdout when omitted)");
  app.add_option("--svg", o.svg, "sweep chart output");
  app.add_option("--graph", o.graph, "edge-list file instead of a model");
  app.add_option("--mask", o.mask, "arc mask file for analyze");
  app.add_option("--kind", o.kind, "edge | arc")->capture_default_str();
  app.add_option("--table", o.table, "survival table CSV at --p for polya");
  app.add_option("--threads", o.threads, "worker threads")->capture_default_str();

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Options&);
  };
  const Command commands[] = {
      {"generate", "write a sampled graph as an edge list", cmd_generate},
      {"percolate", "write a bond or oriented percolation mask", cmd_percolate},
      {"analyze", "component, SCC and bow-tie report as JSON", cmd_analyze},
      {"pc", "threshold estimate for a giant of fraction c", cmd_pc},
      {"sweep", "CSV of trial statistics over a p grid", cmd_sweep},
      {"polya", "survival probability curve with bounds", cmd_polya},
      {"expansion", "large-set expansion report as JSON", cmd_expansion},
      {"oracle", "exact cluster-size laws by enumeration", cmd_oracle},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& c : commands) {
      if (app.got_subcommand(c.name)) c.run(o);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
