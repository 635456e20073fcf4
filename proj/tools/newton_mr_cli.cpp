#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "nmr/experiment.hpp"

// Experiment runner. One invocation = one experiment (or the example suite);
// results land in --out as CSV for external plotting.

int main(int argc, char** argv) {
  CLI::App app{"Newton-MR with inexact Hessians: experiment runner"};

  std::string config_path, problem, dataset, label_rule, hessian, solver, out_dir;
  double eps_g = -1, eps_h = -1, eta = -1, eps_noise = -1, max_oracle = -1, lipschitz_g = -1;
  std::int64_t seed = -1, max_outer = -1;
  bool examples = false, instrument = false;

  app.add_option("--config", config_path, "key=value config file; flags override it");
  app.add_option("--problem", problem, "logistic | nls | pl_quadratic | synthetic_blobs");
  app.add_option("--dataset", dataset, "LIBSVM-format dataset path");
  app.add_option("--label-rule", label_rule, "sign | parity | threshold:<c>");
  app.add_option("--hessian", hessian, "exact | sub:<fraction> | noisy:<eps>");
  app.add_option("--solver", solver, "first | second");
  app.add_option("--eps-g", eps_g, "first-order tolerance");
  app.add_option("--eps-h", eps_h, "second-order tolerance");
  app.add_option("--eta", eta, "sub-problem inexactness tolerance");
  double theta = -1;
  app.add_option("--theta", theta, "derive eta as theta * sqrt(eps_g)");
  app.add_option("--eps-noise", eps_noise, "declared Hessian noise bound");
  app.add_option("--seed", seed, "rng seed; identical seeds reproduce runs byte-for-byte");
  app.add_option("--max-oracle", max_oracle, "weighted oracle-call budget");
  app.add_option("--max-outer", max_outer, "outer iteration budget");
  app.add_option("--lipschitz-g", lipschitz_g,
                 "gradient-Lipschitz estimate for sizing the certificate solve");
  std::int64_t minres_max_iter = -1;
  app.add_option("--minres-max-iter", minres_max_iter,
                 "inner iteration cap (default: the problem dimension)");
  app.add_option("--out", out_dir, "output directory for trace.csv / summary.csv");
  app.add_flag("--examples", examples, "run the closed-form example suite and exit");
  app.add_flag("--instrument", instrument, "collect lambda_min traces (sigma/omega estimates)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (examples) {
      const std::string dir = out_dir.empty() ? "." : out_dir;
      const nmr::ExampleSuiteReport report = nmr::run_example_suite(dir);
      for (const auto& line : report.lines)
        std::printf("%s  %s%s\n", line.pass ? "PASS" : "FAIL", line.name.c_str(),
                    line.detail.empty() ? "" : ("  (" + line.detail + ")").c_str());
      return report.all_pass ? 0 : 1;
    }

    nmr::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = nmr::ExperimentConfig::from_file(config_path);
    if (!problem.empty()) cfg.set_key("problem", problem);
    if (!dataset.empty()) cfg.set_key("dataset", dataset);
    if (!label_rule.empty()) cfg.set_key("label_rule", label_rule);
    if (!hessian.empty()) cfg.set_key("hessian", hessian);
    if (!solver.empty()) cfg.set_key("solver", solver);
    if (!out_dir.empty()) cfg.set_key("out", out_dir);
    if (eps_g >= 0) cfg.solver_config.eps_g = eps_g;
    if (eps_h >= 0) cfg.solver_config.eps_H = eps_h;
    if (eta >= 0) cfg.solver_config.eta = eta;
    if (theta > 0) cfg.theta = theta;
    if (eps_noise >= 0) cfg.solver_config.eps_noise = eps_noise;
    if (seed >= 0) cfg.solver_config.seed = static_cast<std::uint64_t>(seed);
    if (max_oracle > 0) cfg.solver_config.max_oracle_calls = max_oracle;
    if (max_outer > 0) cfg.solver_config.max_outer_iters = static_cast<int>(max_outer);
    if (lipschitz_g > 0) cfg.solver_config.lipschitz_g = lipschitz_g;
    if (minres_max_iter > 0) cfg.solver_config.minres_max_iter = static_cast<int>(minres_max_iter);
    if (instrument) cfg.solver_config.instrument = true;

    const nmr::ExperimentResult result = nmr::run_experiment(cfg);
    const auto& rep = result.report;
    std::printf("termination: %s (%s)\n", nmr::to_string(rep.reason.tag),
                rep.reason.detail.c_str());
    std::printf("iterations: %zu  f: %.17g  ||g||: %.17g\n", rep.records.size(), rep.f_final,
                rep.grad_norm_final);
    std::printf("oracle calls: %.17g weighted (%lld f, %lld g, %lld Hv)\n",
                rep.counter.weighted_total,
                static_cast<long long>(rep.counter.function_calls),
                static_cast<long long>(rep.counter.gradient_calls),
                static_cast<long long>(rep.counter.hvp_calls));
    return result.exit_code;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
