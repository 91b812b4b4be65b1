#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("LNLASSO_CLI");
  REQUIRE_MESSAGE(env != nullptr, "LNLASSO_CLI must point at the binary");
  return env;
}

// Runs the binary with stdout+stderr captured; returns the exit status.
int run_cli(const std::string& args, const std::string& log) {
  std::string cmd = cli_path() + " " + args + " >" + log + " 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

struct TempDir {
  fs::path dir;
  explicit TempDir(const char* name) : dir(fs::path("/tmp") / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string operator/(const char* leaf) const { return (dir / leaf).string(); }
};

}  // namespace

TEST_CASE("missing subcommand and unknown flags exit with usage code 2") {
  TempDir tmp("lnlasso_cli_usage");
  CHECK(run_cli("", tmp / "log1") == 2);
  CHECK(run_cli("generate --no-such-flag", tmp / "log2") == 2);
  CHECK(run_cli("solve --edges a.csv", tmp / "log3") == 2);  // --nodes missing
  CHECK(run_cli("solve --edges a.csv --nodes b.csv --tau-scale 1.5",
                tmp / "log4") == 2);
  CHECK(run_cli("--help", tmp / "log5") == 0);
}

TEST_CASE("generate, solve and figures round trip") {
  TempDir tmp("lnlasso_cli_roundtrip");
  std::string gen = "generate --nodes 40 --clusters 4 --intra-weight 10 "
                    "--p 0.5 --seed 7 --out-dir " + (tmp / "data");
  REQUIRE(run_cli(gen, tmp / "gen.log") == 0);
  CHECK(first_line(tmp.dir / "data/edges.csv") == "i,j,weight");
  CHECK(first_line(tmp.dir / "data/truth.csv") == "id,cluster,p_true,w0,w1,w2");
  {
    std::string hdr = first_line(tmp.dir / "data/nodes.csv");
    CHECK(hdr == "id,label,in_training,f0,f1,f2");
  }

  std::string slv = "solve --edges " + (tmp / "data") + "/edges.csv --nodes " +
                    (tmp / "data") + "/nodes.csv --lambda 1e-1 --normalized "
                    "--max-iters 300 --rel-tol 0 --out-dir " + (tmp / "run");
  REQUIRE(run_cli(slv, tmp / "solve.log") == 0);
  CHECK(first_line(tmp.dir / "run/solution.csv") == "id,w0,w1,w2,y_hat");
  CHECK(first_line(tmp.dir / "run/diagnostics.csv") ==
        "iter,objective,primal_rel_change,dual_feas_margin,inner_iters_total");
  // one solution row per node plus the header
  std::string sol = slurp(tmp.dir / "run/solution.csv");
  std::size_t rows = 0;
  for (char c : sol)
    if (c == '\n') ++rows;
  CHECK(rows == 41);

  std::string exp = "experiment --nodes 40 --clusters 4 --intra-weight 10 "
                    "--p-grid 0.3,0.6 --lambda-grid 1e-3,1e-1 --reps 2 "
                    "--max-iters 100 --rel-tol 0 --seed 3 --out-dir " +
                    (tmp / "exp");
  REQUIRE(run_cli(exp, tmp / "exp.log") == 0);
  CHECK(first_line(tmp.dir / "exp/experiment.csv") ==
        "p,lambda,rep,accuracy,bayes_accuracy");

  std::string fig = "figures --experiment " + (tmp / "exp") +
                    "/experiment.csv --out-dir " + (tmp / "fig");
  REQUIRE(run_cli(fig, tmp / "fig.log") == 0);
  CHECK(fs::exists(tmp.dir / "fig/accuracy_vs_p.csv"));
  std::string svg = slurp(tmp.dir / "fig/accuracy_vs_p.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("convergence writes one curve file per lambda") {
  TempDir tmp("lnlasso_cli_conv");
  std::string conv = "convergence --nodes 30 --clusters 3 --intra-weight 10 "
                     "--p 0.4 --lambda-grid 1e-3,1e-1 --reps 2 "
                     "--max-iters 50 --rel-tol 0 --seed 5 --out-dir " +
                     (tmp / "conv");
  REQUIRE(run_cli(conv, tmp / "conv.log") == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(tmp.dir / "conv")) {
    CHECK(first_line(entry.path().string()) == "iter,mean_accuracy");
    ++files;
  }
  CHECK(files == 2);
}

TEST_CASE("malformed edge CSV is reported with its line number") {
  TempDir tmp("lnlasso_cli_badcsv");
  {
    std::ofstream out(tmp.dir / "edges.csv");
    out << "i,j,weight\n0,1,1.0\n5,3,abc\n";
    std::ofstream nodes(tmp.dir / "nodes.csv");
    nodes << "id,label,in_training,f0\n0,1,1,1.0\n1,,0,1.0\n";
  }
  std::string slv = "solve --edges " + (tmp / "edges.csv") + " --nodes " +
                    (tmp / "nodes.csv") + " --out-dir " + (tmp / "run");
  int code = run_cli(slv, tmp / "log");
  CHECK(code == 1);
  std::string log = slurp(tmp / "log");
  CHECK(log.find("edges.csv") != std::string::npos);
  CHECK(log.find("3") != std::string::npos);  // offending line number
}

TEST_CASE("generate is byte-for-byte deterministic") {
  TempDir tmp("lnlasso_cli_det");
  std::string base = "generate --nodes 40 --clusters 4 --intra-weight 10 "
                     "--p 0.5 --seed 42 --out-dir ";
  REQUIRE(run_cli(base + (tmp / "a"), tmp / "a.log") == 0);
  REQUIRE(run_cli(base + (tmp / "b"), tmp / "b.log") == 0);
  for (const char* leaf : {"edges.csv", "nodes.csv", "truth.csv"}) {
    CHECK(slurp((tmp.dir / "a" / leaf).string()) ==
          slurp((tmp.dir / "b" / leaf).string()));
  }
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir tmp("lnlasso_cli_config");
  {
    std::ofstream cfg(tmp.dir / "lnlasso.cfg");
    cfg << "seed=9\nout-dir=" << (tmp / "from_cfg") << "\n";
  }
  std::string gen = "generate --nodes 20 --clusters 2 --intra-weight 10 "
                    "--config " + (tmp / "lnlasso.cfg");
  REQUIRE(run_cli(gen, tmp / "log") == 0);
  CHECK(fs::exists(tmp.dir / "from_cfg/edges.csv"));
}
