#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nmr/experiment.hpp"

using namespace nmr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NEWTON_MR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config file parsing with sections, comments and overrides") {
  const std::string path = "cli_test_config.txt";
  {
    std::ofstream os(path);
    os << "# an experiment\n"
       << "[problem]\n"
       << "problem = pl_quadratic\n"
       << "quad_d = 12\n"
       << "[solver]\n"
       << "eps-g = 1e-6\n"
       << "eta = 0.05\n"
       << "seed = 9\n";
  }
  ExperimentConfig cfg = ExperimentConfig::from_file(path);
  CHECK(cfg.problem == "pl_quadratic");
  CHECK(cfg.quad_d == 12);
  CHECK(cfg.solver_config.eps_g == 1e-6);
  CHECK(cfg.solver_config.eta == 0.05);
  CHECK(cfg.solver_config.seed == 9);
  CHECK_THROWS_AS(cfg.set_key("no_such_key", "1"), std::invalid_argument);
  {
    std::ofstream os(path);
    os << "eps_g 1e-6\n";
  }
  CHECK_THROWS_AS(ExperimentConfig::from_file(path), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("default quadratic experiment: exit 0 and strictly decreasing trace") {
  ExperimentConfig cfg;
  cfg.output_dir = "cli_out_quad";
  cfg.solver_config.seed = 4;
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.report.reason.tag == TerminationReason::Tag::FirstOrderOptimal);

  std::ifstream is("cli_out_quad/trace.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "k,f,grad_norm,step_tag,alpha,inner_iters,oracle_calls");
  double prev_f = std::numeric_limits<double>::infinity();
  double prev_oracle = -1.0;
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');  // k
    std::getline(ls, cell, ',');  // f
    const double f = std::stod(cell);
    CHECK(f < prev_f);
    prev_f = f;
    for (int skip = 0; skip < 4; ++skip) std::getline(ls, cell, ',');
    std::getline(ls, cell, ',');  // oracle_calls
    const double oracle = std::stod(cell);
    CHECK(oracle >= prev_oracle);
    prev_oracle = oracle;
    ++rows;
  }
  CHECK(rows == static_cast<int>(res.report.records.size()));
  fs::remove_all("cli_out_quad");
}

TEST_CASE("csv doubles round-trip at 17 significant digits") {
  ExperimentConfig cfg;
  cfg.quad_d = 10;
  cfg.output_dir = "cli_out_roundtrip";
  const ExperimentResult res = run_experiment(cfg);
  std::ifstream is("cli_out_roundtrip/trace.csv");
  std::string line;
  std::getline(is, line);
  std::size_t row = 0;
  while (std::getline(is, line) && row < res.report.records.size()) {
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    std::getline(ls, cell, ',');
    CHECK(std::stod(cell) == res.report.records[row].f);
    ++row;
  }
  fs::remove_all("cli_out_roundtrip");
}

TEST_CASE("forced budget exhaustion exits with code 2") {
  ExperimentConfig cfg;
  cfg.solver_config.max_oracle_calls = 10.0;
  cfg.output_dir = "cli_out_budget";
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.exit_code == 2);
  fs::remove_all("cli_out_budget");
}

TEST_CASE("cli binary: determinism of trace.csv under a fixed seed") {
  REQUIRE(fs::exists(NEWTON_MR_CLI_PATH));
  const int c1 = run_cli("--problem pl_quadratic --seed 11 --eps-g 1e-7 --out cli_run_a");
  const int c2 = run_cli("--problem pl_quadratic --seed 11 --eps-g 1e-7 --out cli_run_b");
  CHECK(c1 == 0);
  CHECK(c2 == 0);
  CHECK(slurp("cli_run_a/trace.csv") == slurp("cli_run_b/trace.csv"));
  CHECK(slurp("cli_run_a/summary.csv") == slurp("cli_run_b/summary.csv"));
  fs::remove_all("cli_run_a");
  fs::remove_all("cli_run_b");
}

TEST_CASE("cli binary: dataset ingestion and the example suite") {
  {
    std::ofstream os("cli_tiny.libsvm");
    // Linearly separated toy set.
    for (int i = 0; i < 20; ++i)
      os << (i % 2) << " 1:" << (i % 2 ? 1.0 : -1.0) + 0.1 * i << " 2:"
         << (i % 2 ? -0.5 : 0.5) << "\n";
  }
  const int code = run_cli(
      "--problem logistic --dataset cli_tiny.libsvm --label-rule sign "
      "--hessian sub:0.5 --eps-g 1e-4 --seed 3 --out cli_out_data");
  CHECK(code == 0);
  CHECK(run_cli("--problem logistic --dataset missing_file.libsvm") == 1);
  std::remove("cli_tiny.libsvm");
  fs::remove_all("cli_out_data");

  CHECK(run_cli("--examples --out cli_out_examples") == 0);
  CHECK(fs::exists("cli_out_examples/eig_min_study.csv"));
  CHECK(fs::exists("cli_out_examples/relative_residual_study.csv"));
  CHECK(fs::exists("cli_out_examples/examples_report.txt"));
  fs::remove_all("cli_out_examples");
}

TEST_CASE("the shipped sample config parses and runs") {
  ExperimentConfig cfg = ExperimentConfig::from_file(NEWTON_MR_SAMPLE_CONFIG);
  CHECK(cfg.problem == "pl_quadratic");
  CHECK(cfg.hessian == "noisy:0.5");
  cfg.output_dir = "cli_out_sample";
  cfg.solver_config.eps_g = 1e-6;  // keep the test quick
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.exit_code == 0);
  fs::remove_all("cli_out_sample");
}

TEST_CASE("second-order driver through the experiment runner") {
  ExperimentConfig cfg;
  cfg.solver = "second";
  cfg.quad_d = 15;
  cfg.solver_config.eps_g = 1e-7;
  cfg.solver_config.eps_H = 0.5;
  cfg.solver_config.lipschitz_g = 10.0;
  cfg.output_dir = "cli_out_second";
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.report.reason.tag == TerminationReason::Tag::SecondOrderOptimal);
  CHECK(res.report.certificate_solves >= 1);
  fs::remove_all("cli_out_second");
}

TEST_CASE("theta wiring derives eta at run time") {
  ExperimentConfig cfg;
  cfg.quad_d = 8;
  cfg.solver_config.eps_g = 1e-4;
  cfg.theta = 2.0;  // eta = 2 * sqrt(1e-4) = 0.02
  cfg.output_dir = "cli_out_theta";
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.exit_code == 0);
  fs::remove_all("cli_out_theta");
}

TEST_CASE("noisy hessian spec wires the declared bound into the solver") {
  ExperimentConfig cfg;
  cfg.hessian = "noisy:0.5";
  cfg.quad_d = 20;
  cfg.solver_config.eps_g = 1e-6;
  cfg.output_dir = "cli_out_noisy";
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.exit_code == 0);
  fs::remove_all("cli_out_noisy");
}
