#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nmr/hessian_operator.hpp"
#include "nmr/line_search.hpp"
#include "nmr/minres.hpp"
#include "nmr/problem.hpp"

namespace nmr {

/// Produces the (frozen) inexact Hessian operator for outer iteration k.
/// Randomness (sample indices, noise) is drawn from the rng here, once per
/// outer iteration.
using HessianSource =
    std::function<HessianOperator(const Vector& x, int k, Rng& rng)>;

HessianSource exact_hessian_source(const FiniteSumProblem& problem);
HessianSource subsampled_hessian_source(const FiniteSumProblem& problem, double fraction);
/// Dense-diagnostic-scale source: assembles H(x) and adds a fresh
/// sign-conjugation noise of norm epsilon each outer iteration.
HessianSource noisy_hessian_source(const FiniteSumProblem& problem, double epsilon);

struct SolverConfig {
  double eps_g = 1e-8;   // first-order tolerance, in (0, 1]
  double eps_H = 1e-2;   // second-order tolerance, in (0, 1]
  double eta = 1e-2;     // sub-problem inexactness tolerance, > 0 for the first-order driver
  double eps_noise = 0.0;  // declared noise bound on the Hessian approximation
  LineSearchParams ls;
  int max_outer_iters = 100000;
  double max_oracle_calls = 1e6;
  double certificate_failure_prob = 0.01;  // p in the certificate bound
  std::uint64_t seed = 0;
  /// Estimate of the gradient-Lipschitz constant, used only to size the
  /// certificate solve; 0 means unknown, which falls back to d iterations.
  double lipschitz_g = 0.0;
  int minres_max_iter = 0;  // 0 means the problem dimension
  /// Collect lambda_min(T_t) traces and per-step diagnostics (sigma/omega
  /// estimates); costs a small tridiagonal eigensolve per inner iteration.
  bool instrument = false;

  void validate(bool second_order) const;
  /// eta = theta * sqrt(eps_g).
  static double eta_from_theta(double theta, double eps_g);
};

enum class StepTag : int { SOL, NPC, NPC_CERTIFICATE };
const char* to_string(StepTag tag);

struct IterationRecord {
  int k = 0;
  double f = 0;           // objective at x_k, before the step
  double grad_norm = 0;   // ||g_k||
  StepTag step_tag = StepTag::SOL;
  double alpha = 0;
  int inner_iters = 0;
  double cumulative_oracle = 0;  // weighted total spent to reach x_k
  // Instrumentation beyond the CSV schema.
  double dir_dot_grad = 0;
  double dir_norm = 0;
  double f_next = 0;
  double rel_residual = std::numeric_limits<double>::quiet_NaN();  // NPC exits
  double dir_h_dir = std::numeric_limits<double>::quiet_NaN();    // certificate steps
  double lambda_min_pre_npc = std::numeric_limits<double>::quiet_NaN();
  MinresTag minres_tag = MinresTag::SOL;
};

struct TerminationReason {
  enum class Tag : int {
    FirstOrderOptimal,
    SecondOrderOptimal,
    BudgetExhausted,
    StepTooSmall,
    NumericalFailure
  };
  Tag tag = Tag::BudgetExhausted;
  std::string detail;
};
const char* to_string(TerminationReason::Tag tag);

struct SolveReport {
  Vector x_final;
  double f_final = 0;
  double grad_norm_final = 0;
  TerminationReason reason;
  std::vector<IterationRecord> records;
  OracleCounter counter;
  int certificate_solves = 0;
  /// min over pre-NPC lambda_min(T_t) across all instrumented inner solves.
  double sigma_hat = std::numeric_limits<double>::quiet_NaN();
  /// min over NPC exits of ||r|| / ||g||.
  double omega_hat = std::numeric_limits<double>::quiet_NaN();
};

/// First-order driver: while ||g_k|| > eps_g, step along the MINRES solution
/// or NPC direction under the Armijo rule (backward tracking for solution
/// directions, forward/backward for NPC directions).
SolveReport newton_mr_first_order(const FiniteSumProblem& problem,
                                  const HessianSource& hessian_source,
                                  const SolverConfig& config);

/// Second-order driver: as above while the gradient is large; at
/// eps_g-stationary points it runs the minimum-eigenvalue certificate,
/// MINRES on H + (eps_H - eps)/2 I against a random unit-sphere vector with
/// eta = 0. No NPC within the certificate budget certifies second-order
/// optimality; otherwise the normalized, sign-corrected NPC direction is
/// taken under the curvature line-search.
SolveReport newton_mr_second_order(const FiniteSumProblem& problem,
                                   const HessianSource& hessian_source,
                                   const SolverConfig& config);

/// Iteration cap T_L for the certificate solve:
/// min{ceil(sqrt(L_g / eps_H) * log(2.75 d / p^2) + 1), d}.
int certificate_iteration_bound(double l_g_estimate, double eps_h, Index d, double p);

/// Constants of the per-iteration descent guarantees. kappa = (L_g + eps) / sigma.
struct DescentConstants {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0, kappa = 0;
};
DescentConstants theoretical_descent_constants(double l_g, double l_h, double sigma,
                                               double theta, double rho_s, double rho_n,
                                               double omega, double eps = 0.0);

/// Detection bounds for the inner solver on instances with a mu-strong
/// g-relevant eigenvalue and spectrum-projection constant nu. Parameters
/// outside the ranges nu in (16 L_g^4 / ((4 L_g^2 + eta^2) sigma^2), 1] and
/// eta > 2 L_g sqrt(4 L_g^2 - sigma^2) / sigma are a domain error.
struct MinresIterationBounds {
  int t_npc = 0;  // NPC detection bound T_N
  int t_sol = 0;  // inexactness detection bound T_S
};
MinresIterationBounds minres_iteration_bounds(double l_g, double mu, double nu,
                                              double sigma, double eta, Index d);

/// Per-iteration gap decrement of the PL convergence guarantee,
/// (4 mu_pl beta (1-beta) / L_g) * min{...}; strictly positive whenever
/// sigma > 0, though it can round to zero when the measured sigma is tiny.
double pl_theoretical_decrement(double mu_pl, double l_g, double eps, double eta,
                                double sigma, double beta);

/// Linear-rate factor of the PL convergence guarantee, 1 - decrement,
/// evaluated with a measured sigma.
double pl_theoretical_rate(double mu_pl, double l_g, double eps, double eta, double sigma,
                           double beta);

}  // namespace nmr
