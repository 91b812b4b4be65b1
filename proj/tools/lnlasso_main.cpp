#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "lnlasso/csv.hpp"
#include "lnlasso/experiment.hpp"
#include "lnlasso/graph.hpp"
#include "lnlasso/model.hpp"
#include "lnlasso/solver.hpp"
#include "lnlasso/synth.hpp"

namespace fs = std::filesystem;
using namespace lnlasso;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string lambda_tag(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lambda);
  return buf;
}

Topology parse_topology(const std::string& s) {
  if (s == "chain") return Topology::kChain;
  if (s == "grid") return Topology::kGrid;
  throw CLI::ValidationError("--topology", "must be 'chain' or 'grid'");
}

struct SynthFlags {
  std::string topology = "chain";
  std::size_t num_nodes = 400;
  std::size_t clusters = 8;
  std::size_t grid_side = 20;
  double intra_weight = 100.0;
  double inter_weight = 1.0;
  std::size_t dim = 3;
  bool no_normalize = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--topology", topology, "chain or grid")
        ->check(CLI::IsMember({"chain", "grid"}));
    cmd->add_option("--nodes", num_nodes, "chain length");
    cmd->add_option("--clusters", clusters, "chain cluster count");
    cmd->add_option("--grid-side", grid_side, "grid side length");
    cmd->add_option("--intra-weight", intra_weight, "within-cluster weight");
    cmd->add_option("--inter-weight", inter_weight, "between-cluster weight");
    cmd->add_option("--dim", dim, "feature dimension");
    cmd->add_flag("--no-normalize", no_normalize,
                  "skip feature l2 normalization");
  }

  SyntheticSpec to_spec(double p, std::uint64_t seed) const {
    SyntheticSpec s;
    s.topology = parse_topology(topology);
    s.num_nodes = num_nodes;
    s.clusters = clusters;
    s.grid_side = grid_side;
    s.intra_weight = intra_weight;
    s.inter_weight = inter_weight;
    s.feature_dim = dim;
    s.labeling_rate = p;
    s.seed = seed;
    s.normalize_features = !no_normalize;
    return s;
  }
};

struct SolverFlags {
  std::size_t max_iters = 1000;
  double rel_tol = 1e-6;
  double tau_scale = 0.9;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-iters", max_iters, "outer iteration budget");
    cmd->add_option("--rel-tol", rel_tol, "relative primal-change tolerance");
    cmd->add_option("--tau-scale", tau_scale, "primal step scale in (0,1)")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  }

  SolverConfig to_config(double lambda) const {
    SolverConfig c;
    c.lambda = lambda;
    c.max_iters = max_iters;
    c.rel_tol = rel_tol;
    c.tau_scale = tau_scale;
    return c;
  }
};

// Minimal SVG line chart; one polyline per series plus axes and labels.
void write_svg_chart(const std::string& path, const std::string& x_label,
                     const std::string& y_label,
                     const std::vector<std::pair<std::string,
                                                 std::vector<std::pair<double, double>>>>&
                         series) {
  const double width = 640, height = 480, ml = 60, mr = 140, mt = 20, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, pts] : series) {
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x); xmax = std::max(xmax, x);
      ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) { xmax = xmin + 1; }
  if (!(ymax > ymin)) { ymax = ymin + 1; }
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2"};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='"
      << width - mr << "' y2='" << height - mb << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << height - mb << "' stroke='black'/>\n";
  out << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 10
      << "' text-anchor='middle'>" << x_label << "</text>\n";
  out << "<text x='15' y='" << (mt + height - mb) / 2
      << "' text-anchor='middle' transform='rotate(-90 15 "
      << (mt + height - mb) / 2 << ")'>" << y_label << "</text>\n";
  char buf[64];
  for (int t = 0; t <= 4; ++t) {
    double xv = xmin + (xmax - xmin) * t / 4.0;
    double yv = ymin + (ymax - ymin) * t / 4.0;
    std::snprintf(buf, sizeof(buf), "%.3g", xv);
    out << "<text x='" << px(xv) << "' y='" << height - mb + 18
        << "' text-anchor='middle' font-size='11'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.3g", yv);
    out << "<text x='" << ml - 6 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-size='11'>" << buf << "</text>\n";
  }
  std::size_t si = 0;
  for (const auto& [name, pts] : series) {
    const char* color = colors[si % 7];
    out << "<polyline fill='none' stroke='" << color << "' points='";
    for (const auto& [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
    out << "'/>\n";
    out << "<text x='" << width - mr + 8 << "' y='" << mt + 16 + 16 * si
        << "' fill='" << color << "' font-size='12'>" << name << "</text>\n";
    ++si;
  }
  out << "</svg>\n";
}

int cmd_generate(const SynthFlags& synth, double p, std::uint64_t seed,
                 const std::string& out_dir) {
  fs::create_directories(out_dir);
  SyntheticInstance inst = generate(synth.to_spec(p, seed));
  save_edges_csv(out_dir + "/edges.csv", inst.graph);
  save_nodes_csv(out_dir + "/nodes.csv", inst.dataset);
  save_truth_csv(out_dir + "/truth.csv", inst);
  std::cout << "wrote " << out_dir << "/{edges,nodes,truth}.csv (N="
            << inst.graph.num_nodes() << ", E=" << inst.graph.num_edges()
            << ", |M|=" << inst.dataset.training_size() << ")\n";
  return 0;
}

int cmd_solve(const std::string& edges_path, const std::string& nodes_path,
              double lambda, const SolverFlags& flags, bool normalized,
              const std::string& out_dir) {
  fs::create_directories(out_dir);
  EmpiricalGraph graph = load_edges_csv(edges_path);
  NodeDataset dataset = load_nodes_csv(nodes_path, normalized);
  SolverConfig cfg = flags.to_config(lambda);
  cfg.record_diagnostics = true;
  SolverRun run = solve(graph, dataset, cfg);
  save_solution_csv(out_dir + "/solution.csv", run.final_primal,
                    predict(dataset, run.final_primal));
  save_diagnostics_csv(out_dir + "/diagnostics.csv", run);
  Objective obj{graph, dataset, lambda};
  std::cout << "solved in " << run.iterations_used << " iterations, objective "
            << format_double(objective_value(obj, run.final_primal)) << "\n";
  return 0;
}

ExperimentSpec make_experiment_spec(const SynthFlags& synth,
                                    const SolverFlags& solver,
                                    const std::vector<double>& p_grid,
                                    const std::vector<double>& lambda_grid,
                                    std::size_t reps, std::uint64_t seed,
                                    bool freeze) {
  ExperimentSpec spec;
  spec.base = synth.to_spec(0.5, seed);
  if (!p_grid.empty()) spec.p_grid = p_grid;
  if (!lambda_grid.empty()) spec.lambda_grid = lambda_grid;
  spec.repetitions = reps;
  spec.solver = solver.to_config(1e-1);
  spec.master_seed = seed;
  spec.freeze_instance = freeze;
  return spec;
}

int cmd_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto cells = run_experiment(spec);
  save_experiment_csv(out_dir + "/experiment.csv", cells);
  save_summary_csv(out_dir + "/summary.csv", summarize(cells));
  std::size_t failed = 0;
  for (const auto& c : cells)
    if (c.failed) ++failed;
  std::cout << "wrote " << out_dir << "/experiment.csv (" << cells.size()
            << " cells, " << failed << " failed)\n";
  return failed == cells.size() && !cells.empty() ? kExitNumerical : 0;
}

int cmd_convergence(const ExperimentSpec& spec, double p,
                    const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto curves = run_convergence(spec, p);
  for (const auto& curve : curves)
    save_convergence_csv(
        out_dir + "/convergence_lambda_" + lambda_tag(curve.lambda) + ".csv",
        curve);
  std::cout << "wrote " << curves.size() << " convergence curves to "
            << out_dir << "\n";
  return 0;
}

int cmd_figures(const std::string& experiment_path,
                const std::vector<std::string>& convergence_paths,
                const std::string& out_dir) {
  fs::create_directories(out_dir);
  if (!experiment_path.empty()) {
    auto cells = load_experiment_csv(experiment_path);
    auto rows = summarize(cells);
    save_summary_csv(out_dir + "/accuracy_vs_p.csv", rows);

    std::map<double, std::vector<std::pair<double, double>>> by_lambda;
    std::vector<std::pair<double, double>> bayes;
    for (const auto& r : rows) {
      if (std::isnan(r.mean_accuracy)) continue;
      by_lambda[r.lambda].push_back({r.p, r.mean_accuracy});
      if (bayes.empty() || bayes.back().first != r.p)
        bayes.push_back({r.p, r.mean_bayes_accuracy});
    }
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>
        series;
    for (auto& [lambda, pts] : by_lambda)
      series.push_back({"lambda=" + lambda_tag(lambda), std::move(pts)});
    series.push_back({"bayes optimal", std::move(bayes)});
    write_svg_chart(out_dir + "/accuracy_vs_p.svg", "labeling rate p",
                    "accuracy", series);
  }
  if (!convergence_paths.empty()) {
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>
        series;
    for (const auto& path : convergence_paths) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open " + path);
      std::string line;
      std::getline(in, line);
      std::vector<std::pair<double, double>> pts;
      std::size_t line_no = 1;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++line_no;
        double it, acc;
        if (std::sscanf(line.c_str(), "%lf,%lf", &it, &acc) != 2)
          throw CsvError(path, line_no, "malformed row");
        pts.push_back({it, acc});
      }
      series.push_back({fs::path(path).stem().string(), std::move(pts)});
    }
    write_svg_chart(out_dir + "/accuracy_vs_iter.svg", "iteration",
                    "accuracy", series);
  }
  std::cout << "wrote figure data to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logistic network Lasso on graphs: synthetic data generation, "
               "primal-dual solves and sweep experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "master seed")->configurable(true);
  app.add_option("--out-dir", out_dir, "output directory")->configurable(true);

  SynthFlags synth;
  SolverFlags solver;
  double p = 0.5;
  double lambda = 1e-1;
  std::vector<double> p_grid, lambda_grid;
  std::size_t reps = 20;
  bool freeze = false, normalized = false;
  std::string edges_path, nodes_path, experiment_path;
  std::vector<std::string> convergence_paths;

  auto* gen = app.add_subcommand("generate", "write a synthetic instance");
  synth.attach(gen);
  gen->add_option("--p", p, "labeling rate");

  auto* slv = app.add_subcommand("solve", "solve one instance from CSV files");
  slv->add_option("--edges", edges_path, "edge CSV")->required();
  slv->add_option("--nodes", nodes_path, "node CSV")->required();
  slv->add_option("--lambda", lambda, "regularization strength");
  slv->add_flag("--normalized", normalized, "enforce unit-norm features");
  solver.attach(slv);

  auto* exp = app.add_subcommand("experiment", "sweep (p, lambda) cells");
  synth.attach(exp);
  solver.attach(exp);
  exp->add_option("--p-grid", p_grid, "labeling rates")->delimiter(',');
  exp->add_option("--lambda-grid", lambda_grid, "lambda values")
      ->delimiter(',');
  exp->add_option("--reps", reps, "repetitions per cell");
  exp->add_flag("--freeze", freeze,
                "reuse graph/weights/features across repetitions");

  auto* conv = app.add_subcommand("convergence",
                                  "accuracy-vs-iteration curves at fixed p");
  synth.attach(conv);
  solver.attach(conv);
  conv->add_option("--p", p, "labeling rate");
  conv->add_option("--lambda-grid", lambda_grid, "lambda values")
      ->delimiter(',');
  conv->add_option("--reps", reps, "repetitions per curve");

  auto* fig = app.add_subcommand("figures",
                                 "aggregate experiment CSVs into figure data");
  fig->add_option("--experiment", experiment_path, "experiment long CSV");
  fig->add_option("--convergence", convergence_paths,
                  "convergence curve CSVs")->delimiter(',');

  // lets --seed/--out-dir/--config appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(synth, p, seed, out_dir);
    if (slv->parsed())
      return cmd_solve(edges_path, nodes_path, lambda, solver, normalized,
                       out_dir);
    if (exp->parsed())
      return cmd_experiment(make_experiment_spec(synth, solver, p_grid,
                                                 lambda_grid, reps, seed,
                                                 freeze),
                            out_dir);
    if (conv->parsed()) {
      ExperimentSpec spec = make_experiment_spec(synth, solver, {}, lambda_grid,
                                                 reps, seed, false);
      return cmd_convergence(spec, p, out_dir);
    }
    if (fig->parsed())
      return cmd_figures(experiment_path, convergence_paths, out_dir);
  } catch (const CsvError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
