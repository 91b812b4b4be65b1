#include "lnlasso/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lnlasso {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CsvError(path, line, std::string("expected ") + what + ", got '" +
                                   s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& path,
                    std::size_t line, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CsvError(path, line, std::string("expected ") + what + ", got '" +
                                   s + "'");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string read_line_trimmed(std::istream& in) {
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

EmpiricalGraph load_edges_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string header = read_line_trimmed(in);
  if (header != "i,j,weight")
    throw CsvError(path, 1, "expected header 'i,j,weight'");
  std::vector<Edge> edges;
  std::size_t max_node = 0;
  std::size_t line_no = 1;
  while (in) {
    std::string line = read_line_trimmed(in);
    if (line.empty()) continue;
    ++line_no;
    auto fields = split_row(line);
    if (fields.size() != 3)
      throw CsvError(path, line_no, "expected 3 fields");
    long long i = parse_int(fields[0], path, line_no, "node id");
    long long j = parse_int(fields[1], path, line_no, "node id");
    double w = parse_double(fields[2], path, line_no, "weight");
    if (i < 0 || j < 0) throw CsvError(path, line_no, "negative node id");
    Edge e{static_cast<std::size_t>(i), static_cast<std::size_t>(j), w};
    max_node = std::max({max_node, e.i, e.j});
    edges.push_back(e);
  }
  if (edges.empty()) throw CsvError(path, line_no, "no edges");
  return EmpiricalGraph(max_node + 1, std::move(edges));
}

void save_edges_csv(const std::string& path, const EmpiricalGraph& graph) {
  std::ofstream out = open_out(path);
  out << "i,j,weight\n";
  for (const Edge& e : graph.edges())
    out << e.i << ',' << e.j << ',' << format_double(e.weight) << '\n';
}

NodeDataset load_nodes_csv(const std::string& path, bool normalized) {
  std::ifstream in = open_in(path);
  std::string header = read_line_trimmed(in);
  auto head_fields = split_row(header);
  if (head_fields.size() < 4 || head_fields[0] != "id" ||
      head_fields[1] != "label" || head_fields[2] != "in_training")
    throw CsvError(path, 1, "expected header 'id,label,in_training,f0,...'");
  const std::size_t d = head_fields.size() - 3;

  struct Row {
    std::optional<int> label;
    bool in_training;
    std::vector<double> f;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (in) {
    std::string line = read_line_trimmed(in);
    if (line.empty()) continue;
    ++line_no;
    auto fields = split_row(line);
    if (fields.size() != 3 + d)
      throw CsvError(path, line_no, "wrong field count");
    long long id = parse_int(fields[0], path, line_no, "node id");
    if (id != static_cast<long long>(rows.size()))
      throw CsvError(path, line_no, "node ids must be 0,1,2,... in order");
    Row row;
    if (!fields[1].empty()) {
      long long y = parse_int(fields[1], path, line_no, "label");
      if (y != 1 && y != -1)
        throw CsvError(path, line_no, "label must be -1 or 1");
      row.label = static_cast<int>(y);
    }
    long long t = parse_int(fields[2], path, line_no, "0/1 flag");
    if (t != 0 && t != 1)
      throw CsvError(path, line_no, "in_training must be 0 or 1");
    row.in_training = t == 1;
    row.f.resize(d);
    for (std::size_t k = 0; k < d; ++k)
      row.f[k] = parse_double(fields[3 + k], path, line_no, "feature");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(path, line_no, "no nodes");

  BlockVector features(rows.size(), d);
  std::vector<std::optional<int>> labels(rows.size());
  std::vector<std::size_t> training;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) features.block(i)[k] = rows[i].f[k];
    labels[i] = rows[i].label;
    if (rows[i].in_training) training.push_back(i);
  }
  return NodeDataset(std::move(features), std::move(labels),
                     std::move(training), normalized);
}

void save_nodes_csv(const std::string& path, const NodeDataset& dataset) {
  std::ofstream out = open_out(path);
  out << "id,label,in_training";
  for (std::size_t k = 0; k < dataset.dim(); ++k) out << ",f" << k;
  out << '\n';
  for (std::size_t i = 0; i < dataset.num_nodes(); ++i) {
    out << i << ',';
    if (dataset.labels()[i].has_value()) out << *dataset.labels()[i];
    out << ',' << (dataset.in_training(i) ? 1 : 0);
    for (std::size_t k = 0; k < dataset.dim(); ++k)
      out << ',' << format_double(dataset.feature(i)[k]);
    out << '\n';
  }
}

void save_truth_csv(const std::string& path, const SyntheticInstance& inst) {
  std::ofstream out = open_out(path);
  out << "id,cluster,p_true";
  for (std::size_t k = 0; k < inst.true_weights.dim; ++k) out << ",w" << k;
  out << '\n';
  for (std::size_t i = 0; i < inst.true_weights.blocks; ++i) {
    out << i << ',' << inst.cluster_assignment[i] << ','
        << format_double(inst.true_probabilities[i]);
    for (std::size_t k = 0; k < inst.true_weights.dim; ++k)
      out << ',' << format_double(inst.true_weights.block(i)[k]);
    out << '\n';
  }
}

void save_solution_csv(const std::string& path, const PrimalSignal& w,
                       const std::vector<int>& predicted) {
  std::ofstream out = open_out(path);
  out << "id";
  for (std::size_t k = 0; k < w.dim; ++k) out << ",w" << k;
  out << ",y_hat\n";
  for (std::size_t i = 0; i < w.blocks; ++i) {
    out << i;
    for (std::size_t k = 0; k < w.dim; ++k)
      out << ',' << format_double(w.block(i)[k]);
    out << ',' << predicted[i] << '\n';
  }
}

void save_diagnostics_csv(const std::string& path, const SolverRun& run) {
  std::ofstream out = open_out(path);
  out << "iter,objective,primal_rel_change,dual_feas_margin,inner_iters_total\n";
  for (const IterationRecord& r : run.diagnostics) {
    out << r.iter << ',' << format_double(r.objective) << ','
        << format_double(r.primal_rel_change) << ','
        << format_double(r.dual_feas_margin) << ',' << r.inner_iters_total
        << '\n';
  }
}

}  // namespace lnlasso
