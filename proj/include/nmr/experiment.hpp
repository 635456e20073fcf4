#pragma once

#include <string>
#include <vector>

#include "nmr/newton_mr.hpp"

namespace nmr {

/// One experiment = problem + Hessian approximation + driver + solver
/// settings. Flat key=value text config; every key can be overridden by the
/// CLI flag of the same name.
struct ExperimentConfig {
  std::string problem = "pl_quadratic";  // logistic | nls | pl_quadratic | synthetic_blobs
  std::string dataset_path;
  std::string label_rule = "sign";  // sign | parity | threshold:<c>
  std::string hessian = "exact";    // exact | sub:<fraction> | noisy:<eps>
  std::string solver = "first";     // first | second
  std::string output_dir = ".";
  SolverConfig solver_config;
  /// When positive, eta is derived as theta * sqrt(eps_g) at run time.
  double theta = 0.0;
  double reg_weight = 0.0;
  // Synthetic problem shapes.
  Index blob_n = 2000;
  Index blob_d = 50;
  Index quad_d = 50;
  double quad_mu = 0.1;
  double quad_lg = 10.0;

  static ExperimentConfig from_file(const std::string& path);
  /// Applies one normalized key. Unknown keys are an error.
  void set_key(const std::string& key, const std::string& value);
};

struct ExperimentResult {
  SolveReport report;
  int exit_code = 1;  // 0 optimal, 2 budget exhausted, 1 error
};

/// Runs the configured experiment and writes trace.csv and summary.csv into
/// output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// trace.csv schema: k,f,grad_norm,step_tag,alpha,inner_iters,oracle_calls.
void write_solver_trace_csv(const SolveReport& report, const std::string& path);
void write_summary_csv(const SolveReport& report, const std::string& path);

struct ExampleSuiteReport {
  struct Line {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Line> lines;
  bool all_pass = true;

  void add(const std::string& name, bool pass, const std::string& detail = "");
};

/// Closed-form checks on the 2 x 2 noisy instances plus the 30 x 30
/// epsilon-sweep; writes eig_min_study.csv, relative_residual_study.csv and
/// examples_report.txt into out_dir.
ExampleSuiteReport run_example_suite(const std::string& out_dir);

}  // namespace nmr
