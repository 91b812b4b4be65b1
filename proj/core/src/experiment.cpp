#include "lnlasso/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "lnlasso/csv.hpp"
#include "lnlasso/rng.hpp"

namespace lnlasso {

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t p_index,
                        std::size_t lambda_index, std::size_t rep) {
  std::uint64_t s = derive_seed(master_seed, 0x10 + p_index);
  s = derive_seed(s, 0x1000 + lambda_index);
  return derive_seed(s, 0x100000 + rep);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

SyntheticInstance make_cell_instance(const ExperimentSpec& spec, double p,
                                     std::uint64_t seed,
                                     const SyntheticInstance* frozen) {
  if (frozen) return resample_labels(*frozen, p, seed);
  SyntheticSpec s = spec.base;
  s.labeling_rate = p;
  s.seed = seed;
  return generate(s);
}

}  // namespace

std::vector<CellResult> run_experiment(const ExperimentSpec& spec) {
  std::vector<CellResult> cells;
  cells.reserve(spec.p_grid.size() * spec.lambda_grid.size() *
                spec.repetitions);

  std::optional<SyntheticInstance> frozen_storage;
  if (spec.freeze_instance) {
    SyntheticSpec s = spec.base;
    s.labeling_rate = 1.0;  // placeholder; labels are redrawn per cell
    s.seed = spec.master_seed;
    frozen_storage = generate(s);
  }
  const SyntheticInstance* frozen =
      frozen_storage ? &*frozen_storage : nullptr;

  for (std::size_t pi = 0; pi < spec.p_grid.size(); ++pi) {
    for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li) {
      for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
        const double p = spec.p_grid[pi];
        const double lambda = spec.lambda_grid[li];
        CellResult cell{p, lambda, rep, kNan, kNan, false, {}};
        try {
          SyntheticInstance inst = make_cell_instance(
              spec, p, cell_seed(spec.master_seed, pi, li, rep), frozen);
          SolverConfig cfg = spec.solver;
          cfg.lambda = lambda;
          SolverRun run = solve(inst.graph, inst.dataset, cfg);
          auto yhat = predict(inst.dataset, run.final_primal);
          cell.accuracy =
              accuracy_unlabeled(inst.dataset, yhat, inst.true_labels);
          cell.bayes_accuracy = bayes_accuracy(inst.true_probabilities);
        } catch (const std::exception& ex) {
          cell.failed = true;
          cell.error = ex.what();
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<SummaryRow> summarize(const std::vector<CellResult>& cells) {
  std::vector<SummaryRow> rows;
  for (const CellResult& c : cells) {
    if (rows.empty() || rows.back().p != c.p || rows.back().lambda != c.lambda)
      rows.push_back({c.p, c.lambda, 0.0, 0.0, 0.0, 0});
  }
  for (SummaryRow& row : rows) {
    double sum = 0.0, sum_sq = 0.0, bayes = 0.0;
    std::size_t n = 0;
    for (const CellResult& c : cells) {
      if (c.p != row.p || c.lambda != row.lambda) continue;
      if (c.failed) {
        ++row.n_failed;
        continue;
      }
      sum += c.accuracy;
      sum_sq += c.accuracy * c.accuracy;
      bayes += c.bayes_accuracy;
      ++n;
    }
    if (n == 0) {
      row.mean_accuracy = row.std_accuracy = row.mean_bayes_accuracy = kNan;
      continue;
    }
    row.mean_accuracy = sum / n;
    row.mean_bayes_accuracy = bayes / n;
    double var = sum_sq / n - row.mean_accuracy * row.mean_accuracy;
    row.std_accuracy = std::sqrt(std::max(0.0, var));
  }
  return rows;
}

void save_experiment_csv(const std::string& path,
                         const std::vector<CellResult>& cells) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "p,lambda,rep,accuracy,bayes_accuracy\n";
  for (const CellResult& c : cells) {
    out << format_double(c.p) << ',' << format_double(c.lambda) << ','
        << c.rep << ',' << format_double(c.accuracy) << ','
        << format_double(c.bayes_accuracy) << '\n';
  }
}

std::vector<CellResult> load_experiment_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "p,lambda,rep,accuracy,bayes_accuracy")
    throw CsvError(path, 1,
                   "expected header 'p,lambda,rep,accuracy,bayes_accuracy'");
  std::vector<CellResult> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++line_no;
    std::stringstream ss(line);
    CellResult c{};
    char comma;
    if (!(ss >> c.p >> comma >> c.lambda >> comma >> c.rep >> comma >>
          c.accuracy >> comma >> c.bayes_accuracy))
      throw CsvError(path, line_no, "malformed row");
    c.failed = std::isnan(c.accuracy);
    cells.push_back(std::move(c));
  }
  return cells;
}

void save_summary_csv(const std::string& path,
                      const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "p,lambda,mean_accuracy,std_accuracy,mean_bayes_accuracy,n_failed\n";
  for (const SummaryRow& r : rows) {
    out << format_double(r.p) << ',' << format_double(r.lambda) << ','
        << format_double(r.mean_accuracy) << ','
        << format_double(r.std_accuracy) << ','
        << format_double(r.mean_bayes_accuracy) << ',' << r.n_failed << '\n';
  }
}

std::vector<ConvergenceCurve> run_convergence(const ExperimentSpec& spec,
                                              double labeling_rate) {
  std::vector<ConvergenceCurve> curves;
  const std::size_t iters = spec.solver.max_iters;

  for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li) {
    ConvergenceCurve curve{spec.lambda_grid[li],
                           std::vector<double>(iters, 0.0)};
    std::size_t successes = 0;
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      try {
        // Instance seed ignores the lambda index so all lambdas see the same
        // data within a repetition.
        SyntheticInstance inst = make_cell_instance(
            spec, labeling_rate, cell_seed(spec.master_seed, 0, 0, rep),
            nullptr);
        SolverConfig cfg = spec.solver;
        cfg.lambda = curve.lambda;
        std::vector<double> acc(iters, 0.0);
        std::size_t last = 0;
        solve(inst.graph, inst.dataset, cfg,
              [&](std::size_t k, const PrimalSignal& w) {
                acc[k] = accuracy_unlabeled(
                    inst.dataset, predict(inst.dataset, w), inst.true_labels);
                last = k;
              });
        for (std::size_t k = last + 1; k < iters; ++k) acc[k] = acc[last];
        for (std::size_t k = 0; k < iters; ++k)
          curve.mean_accuracy[k] += acc[k];
        ++successes;
      } catch (const std::exception&) {
        // failed repetitions are skipped from the average
      }
    }
    if (successes > 0)
      for (double& v : curve.mean_accuracy) v /= successes;
    curves.push_back(std::move(curve));
  }
  return curves;
}

void save_convergence_csv(const std::string& path,
                          const ConvergenceCurve& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iter,mean_accuracy\n";
  for (std::size_t k = 0; k < curve.mean_accuracy.size(); ++k)
    out << k << ',' << format_double(curve.mean_accuracy[k]) << '\n';
}

}  // namespace lnlasso
