#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lnlasso/solver.hpp"
#include "lnlasso/synth.hpp"

namespace lnlasso {

// Sweep over labeling rates and regularization strengths with repetitions.
struct ExperimentSpec {
  SyntheticSpec base;  // labeling_rate and seed are overridden per cell
  std::vector<double> p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> lambda_grid = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  std::size_t repetitions = 20;
  SolverConfig solver;
  std::uint64_t master_seed = 0;
  // Reuse graph, true weights and features across repetitions, redrawing only
  // labels and the training mask. Default regenerates everything per rep.
  bool freeze_instance = false;
};

struct CellResult {
  double p;
  double lambda;
  std::size_t rep;
  double accuracy;        // NaN when failed
  double bayes_accuracy;  // NaN when failed
  bool failed;
  std::string error;
};

struct SummaryRow {
  double p;
  double lambda;
  double mean_accuracy;
  double std_accuracy;
  double mean_bayes_accuracy;
  std::size_t n_failed;
};

// Deterministic per-cell seed derived from the master seed and the cell's
// grid indices, so cells are independent and order-insensitive.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t p_index,
                        std::size_t lambda_index, std::size_t rep);

// Runs every (p, lambda, rep) cell; solver failures are recorded in the cell
// and the run continues. Results are ordered by (p, lambda, rep).
std::vector<CellResult> run_experiment(const ExperimentSpec& spec);

std::vector<SummaryRow> summarize(const std::vector<CellResult>& cells);

// Long-format contract CSV: `p,lambda,rep,accuracy,bayes_accuracy`.
void save_experiment_csv(const std::string& path,
                         const std::vector<CellResult>& cells);
std::vector<CellResult> load_experiment_csv(const std::string& path);

// Summary CSV: `p,lambda,mean_accuracy,std_accuracy,mean_bayes_accuracy,
// n_failed`.
void save_summary_csv(const std::string& path,
                      const std::vector<SummaryRow>& rows);

// Accuracy of the running iterate after every outer iteration, averaged over
// repetitions, one curve per lambda. Curves have length max_iters; when a
// solve stops early its final accuracy is carried forward.
struct ConvergenceCurve {
  double lambda;
  std::vector<double> mean_accuracy;  // index = outer iteration
};

std::vector<ConvergenceCurve> run_convergence(const ExperimentSpec& spec,
                                              double labeling_rate);

// Curve CSV: `iter,mean_accuracy`, one file per lambda.
void save_convergence_csv(const std::string& path,
                          const ConvergenceCurve& curve);

}  // namespace lnlasso
