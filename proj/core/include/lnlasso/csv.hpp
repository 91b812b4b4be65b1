#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lnlasso/graph.hpp"
#include "lnlasso/model.hpp"
#include "lnlasso/solver.hpp"
#include "lnlasso/synth.hpp"

namespace lnlasso {

// Parse failure with the offending file and 1-based line number.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Deterministic double formatting (shortest round-trip form via %.17g).
std::string format_double(double v);

// Edge file: header `i,j,weight`; rows with i > j are normalized on load.
EmpiricalGraph load_edges_csv(const std::string& path);
void save_edges_csv(const std::string& path, const EmpiricalGraph& graph);

// Node file: header `id,label,in_training,f0,...,f{d-1}`; empty label column
// means unlabeled.
NodeDataset load_nodes_csv(const std::string& path, bool normalized = false);
void save_nodes_csv(const std::string& path, const NodeDataset& dataset);

// Truth file: header `id,cluster,p_true,w0,...,w{d-1}`.
void save_truth_csv(const std::string& path, const SyntheticInstance& inst);

// Solution file: header `id,w0,...,w{d-1},y_hat`.
void save_solution_csv(const std::string& path, const PrimalSignal& w,
                       const std::vector<int>& predicted);

// Diagnostics: header `iter,objective,primal_rel_change,dual_feas_margin,
// inner_iters_total`.
void save_diagnostics_csv(const std::string& path, const SolverRun& run);

}  // namespace lnlasso
