#include "nmr/newton_mr.hpp"

#include <cmath>

#include "nmr/problems.hpp"

namespace nmr {

const char* to_string(StepTag tag) {
  switch (tag) {
    case StepTag::SOL: return "SOL";
    case StepTag::NPC: return "NPC";
    case StepTag::NPC_CERTIFICATE: return "NPC_certificate";
  }
  return "?";
}

const char* to_string(TerminationReason::Tag tag) {
  switch (tag) {
    case TerminationReason::Tag::FirstOrderOptimal: return "first_order_optimal";
    case TerminationReason::Tag::SecondOrderOptimal: return "second_order_optimal";
    case TerminationReason::Tag::BudgetExhausted: return "budget_exhausted";
    case TerminationReason::Tag::StepTooSmall: return "step_too_small";
    case TerminationReason::Tag::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

HessianSource exact_hessian_source(const FiniteSumProblem& problem) {
  return [problem](const Vector& x, int, Rng&) {
    return exact_hessian_operator(problem, x);
  };
}

HessianSource subsampled_hessian_source(const FiniteSumProblem& problem, double fraction) {
  return [problem, fraction](const Vector& x, int, Rng& rng) {
    return subsampled_hessian(problem, x, fraction, rng);
  };
}

HessianSource noisy_hessian_source(const FiniteSumProblem& problem, double epsilon) {
  return [problem, epsilon](const Vector& x, int, Rng& rng) {
    return noisy_hessian(problem.dense_hessian_at(x), epsilon, rng);
  };
}

void SolverConfig::validate(bool second_order) const {
  if (!(eps_g > 0.0 && eps_g <= 1.0)) throw std::invalid_argument("eps_g must be in (0, 1]");
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
  if (!second_order && !(eta > 0.0))
    throw std::invalid_argument("the first-order driver needs eta > 0");
  if (second_order) {
    if (!(eps_H > 0.0 && eps_H <= 1.0)) throw std::invalid_argument("eps_H must be in (0, 1]");
    if (!(eps_noise < eps_H))
      throw std::invalid_argument("the certificate needs eps_noise < eps_H");
  }
  if (!(eps_noise >= 0.0)) throw std::invalid_argument("eps_noise must be nonnegative");
  if (!(certificate_failure_prob > 0.0 && certificate_failure_prob < 1.0))
    throw std::invalid_argument("certificate failure probability must be in (0, 1)");
  if (max_outer_iters < 1 || !(max_oracle_calls > 0.0))
    throw std::invalid_argument("budgets must be positive");
  ls.validate();
}

double SolverConfig::eta_from_theta(double theta, double eps_g) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  return theta * std::sqrt(eps_g);
}

int certificate_iteration_bound(double l_g_estimate, double eps_h, Index d, double p) {
  if (!(l_g_estimate > 0.0 && eps_h > 0.0 && d > 0))
    throw std::invalid_argument("certificate_iteration_bound: inputs must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
  const double raw = std::sqrt(l_g_estimate / eps_h) *
                         std::log(2.75 * static_cast<double>(d) / (p * p)) +
                     1.0;
  const double ceiled = std::ceil(raw);
  if (ceiled >= static_cast<double>(d)) return static_cast<int>(d);
  return static_cast<int>(ceiled);
}

DescentConstants theoretical_descent_constants(double l_g, double l_h, double sigma,
                                               double theta, double rho_s, double rho_n,
                                               double omega, double eps) {
  if (!(l_g > 0.0 && l_h > 0.0 && sigma > 0.0 && omega > 0.0))
    throw std::invalid_argument("constants require positive inputs");
  if (!(rho_s > 0.0 && rho_s < 0.5)) throw std::invalid_argument("rho_S must be in (0, 1/2)");
  if (!(rho_n > 0.0 && rho_n < 1.0)) throw std::invalid_argument("rho_N must be in (0, 1)");
  DescentConstants c;
  const double a = 1.0 + theta * l_g;
  c.c0 = 2.0 * sigma / (a + std::sqrt(a * a + 2.0 * sigma * sigma * l_h));
  const double step = 3.0 * (1.0 - 2.0 * rho_s) * sigma / (2.0 * l_h);
  c.c1 = rho_s * sigma * step * step;
  c.c2 = rho_s * sigma * c.c0 * c.c0;
  c.c3 = rho_n * std::pow(omega, 1.5) * std::sqrt(3.0 * (1.0 - rho_n) / l_h);
  c.c4 = 9.0 * rho_n * (1.0 - rho_n) * (1.0 - rho_n) / (4.0 * (4.0 * l_h) * (4.0 * l_h));
  c.kappa = (l_g + eps) / sigma;
  return c;
}

MinresIterationBounds minres_iteration_bounds(double l_g, double mu, double nu,
                                              double sigma, double eta, Index d) {
  if (!(l_g > 0.0 && mu > 0.0 && sigma > 0.0 && eta > 0.0 && d > 0))
    throw std::invalid_argument("minres_iteration_bounds: inputs must be positive");
  const double lg2 = l_g * l_g;
  const double eta_floor = 2.0 * l_g * std::sqrt(std::max(0.0, 4.0 * lg2 - sigma * sigma)) / sigma;
  if (!(eta > eta_floor))
    throw std::domain_error("minres_iteration_bounds: eta outside the lemma range");
  const double nu_floor = 16.0 * lg2 * lg2 / ((4.0 * lg2 + eta * eta) * sigma * sigma);
  if (!(nu > nu_floor && nu <= 1.0))
    throw std::domain_error("minres_iteration_bounds: nu outside the lemma range");

  const double npc_log_arg =
      2.0 * (l_g + mu) * (4.0 * lg2 - nu * sigma * sigma) / (mu * nu * sigma * sigma);
  if (!(npc_log_arg > 0.0))
    throw std::domain_error("minres_iteration_bounds: nonpositive log argument");
  const double t_npc_raw =
      std::sqrt(2.0 * (l_g + mu) / mu) / 4.0 * std::log(npc_log_arg) + 1.0;

  const double sol_gap = eta * eta / (4.0 * lg2 + eta * eta) -
                         (1.0 - nu * sigma * sigma / (4.0 * lg2));
  if (!(sol_gap > 0.0))
    throw std::domain_error("minres_iteration_bounds: nonpositive log argument");
  const double t_sol_raw = std::sqrt(l_g / mu) / 2.0 * std::log(4.0 / sol_gap) + 1.0;

  MinresIterationBounds b;
  const double dd = static_cast<double>(d);
  b.t_npc = static_cast<int>(std::min(std::max(std::ceil(t_npc_raw), 1.0), dd));
  b.t_sol = static_cast<int>(std::min(std::ceil(t_sol_raw), dd));
  return b;
}

double pl_theoretical_decrement(double mu_pl, double l_g, double eps, double eta,
                                double sigma, double beta) {
  if (!(mu_pl > 0.0 && l_g > 0.0 && sigma > 0.0 && beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("pl_theoretical_decrement: invalid inputs");
  const double kappa = (l_g + eps) / sigma;
  const double es = eta / sigma;
  const double sol_term = 1.0 / (kappa * kappa * (es + kappa) * (es + kappa));
  const double npc_term = es * es / (kappa * kappa + es * es);
  return 4.0 * mu_pl * beta * (1.0 - beta) / l_g * std::min(sol_term, npc_term);
}

double pl_theoretical_rate(double mu_pl, double l_g, double eps, double eta, double sigma,
                           double beta) {
  return 1.0 - pl_theoretical_decrement(mu_pl, l_g, eps, eta, sigma, beta);
}

namespace {

struct DriverState {
  SolveReport report;
  Vector x;
  double f = 0;
  Vector g;
  Rng rng;
  bool done = false;
};

void update_sigma_hat(SolveReport& report, const MinresOutcome& outcome) {
  for (const auto& row : outcome.trace) {
    if (row.npc_flag) break;  // T_t at the detection step is excluded
    if (std::isnan(report.sigma_hat) || row.lambda_min_tt < report.sigma_hat)
      report.sigma_hat = row.lambda_min_tt;
  }
}

double pre_npc_lambda_min(const MinresOutcome& outcome) {
  double last = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : outcome.trace) {
    if (row.npc_flag) break;
    last = row.lambda_min_tt;
  }
  return last;
}

}  // namespace

// Shared outer loop. The second-order branch adds the certificate path at
// eps_g-stationary iterates.
static SolveReport drive(const FiniteSumProblem& problem, const HessianSource& hessian_source,
                         const SolverConfig& config, bool second_order) {
  config.validate(second_order);
  DriverState s;
  s.rng.seed(config.seed);
  s.x = problem.x0;
  auto& report = s.report;
  auto& counter = report.counter;

  auto objective = [&problem](const Vector& x) { return problem.value(x); };

  auto fail = [&](TerminationReason::Tag tag, const std::string& detail) {
    report.reason.tag = tag;
    report.reason.detail = detail;
    s.done = true;
  };

  MinresOptions mopts;
  mopts.eta = config.eta;
  mopts.max_iter =
      config.minres_max_iter > 0 ? config.minres_max_iter : static_cast<int>(problem.d);
  mopts.trace_lambda_min = config.instrument;

  try {
    s.f = problem.value(s.x, counter);
    s.g = problem.gradient(s.x, counter);

    for (int k = 0; k < config.max_outer_iters; ++k) {
      if (!std::isfinite(s.f) || !s.g.allFinite()) {
        fail(TerminationReason::Tag::NumericalFailure, "non-finite iterate");
        break;
      }
      const double gnorm = s.g.norm();
      if (!second_order && gnorm <= config.eps_g) {
        fail(TerminationReason::Tag::FirstOrderOptimal,
             "gradient norm below tolerance at k = " + std::to_string(k));
        break;
      }
      if (counter.weighted_total >= config.max_oracle_calls) {
        fail(TerminationReason::Tag::BudgetExhausted, "oracle budget exhausted");
        break;
      }

      IterationRecord rec;
      rec.k = k;
      rec.f = s.f;
      rec.grad_norm = gnorm;
      rec.cumulative_oracle = counter.weighted_total;

      const HessianOperator op = hessian_source(s.x, k, s.rng);

      Vector direction;
      LineSearchResult ls;
      if (gnorm > config.eps_g) {
        const MinresOutcome outcome = minres_solve(op, s.g, mopts, counter);
        rec.inner_iters = outcome.iterations;
        rec.minres_tag = outcome.tag;
        if (config.instrument) {
          update_sigma_hat(report, outcome);
          rec.lambda_min_pre_npc = pre_npc_lambda_min(outcome);
        }
        direction = outcome.direction;
        rec.dir_norm = direction.norm();
        rec.dir_dot_grad = direction.dot(s.g);
        if (outcome.tag == MinresTag::NPC) {
          rec.step_tag = StepTag::NPC;
          rec.rel_residual = outcome.relative_residual();
          if (std::isnan(report.omega_hat) || rec.rel_residual < report.omega_hat)
            report.omega_hat = rec.rel_residual;
          if (!(rec.dir_dot_grad < 0.0)) {
            fail(TerminationReason::Tag::StepTooSmall, "degenerate NPC direction");
            break;
          }
          ls = forward_backtrack(objective, s.x, direction, s.f, rec.dir_dot_grad,
                                 config.ls.rho_N, config.ls, counter);
        } else {
          // SOL and EXHAUSTED outcomes both carry the Krylov least-squares
          // iterate and take the solution branch.
          rec.step_tag = StepTag::SOL;
          if (!(rec.dir_dot_grad < 0.0)) {
            // s_{t-1} = 0 can be returned when eta is large enough to fire
            // the inexactness test at t = 1; the line-search rejects it.
            fail(TerminationReason::Tag::StepTooSmall,
                 "solution direction is not a descent direction");
            break;
          }
          ls = backtrack(objective, s.x, direction, s.f, rec.dir_dot_grad, config.ls.rho_S,
                         config.ls, counter);
        }
      } else {
        // Certificate branch (second-order driver only).
        ++report.certificate_solves;
        const double shift = 0.5 * (config.eps_H - config.eps_noise);
        const HessianOperator shifted = op.shifted(shift);
        const Vector g_tilde = unit_sphere(problem.d, s.rng);
        MinresOptions copts = mopts;
        copts.eta = 0.0;
        copts.max_iter =
            config.lipschitz_g > 0.0
                ? certificate_iteration_bound(config.lipschitz_g, config.eps_H, problem.d,
                                              config.certificate_failure_prob)
                : static_cast<int>(problem.d);
        // Certificate T_t spectra belong to the shifted operator and stay
        // out of the sigma estimate.
        const MinresOutcome outcome = minres_solve(shifted, g_tilde, copts, counter);
        rec.inner_iters = outcome.iterations;
        rec.minres_tag = outcome.tag;
        if (outcome.tag != MinresTag::NPC) {
          fail(TerminationReason::Tag::SecondOrderOptimal,
               "certificate found no nonpositive curvature at k = " + std::to_string(k));
          break;
        }
        rec.step_tag = StepTag::NPC_CERTIFICATE;
        direction = outcome.direction;
        const double sign = s.g.dot(direction) < 0.0 ? -1.0 : 1.0;  // Sign(0) := +1
        direction = (-sign / direction.norm()) * direction;
        rec.dir_norm = 1.0;
        rec.dir_dot_grad = direction.dot(s.g);
        rec.dir_h_dir = direction.dot(op.apply(direction, counter));
        if (!(rec.dir_h_dir < 0.0)) {
          fail(TerminationReason::Tag::NumericalFailure,
               "certificate direction lost its negative curvature");
          break;
        }
        ls = forward_backtrack_curvature(objective, s.x, direction, s.f, rec.dir_h_dir,
                                         config.ls.rho_N, config.ls, counter);
      }

      if (ls.failed) {
        fail(TerminationReason::Tag::StepTooSmall, "step size below threshold");
        break;
      }
      rec.alpha = ls.alpha;
      rec.f_next = ls.f_new;
      report.records.push_back(rec);

      s.x += ls.alpha * direction;
      s.f = ls.f_new;
      s.g = problem.gradient(s.x, counter);
    }
  } catch (const NumericalError& err) {
    fail(TerminationReason::Tag::NumericalFailure, err.what());
  }

  if (!s.done) fail(TerminationReason::Tag::BudgetExhausted, "outer iteration budget");
  report.x_final = s.x;
  report.f_final = s.f;
  report.grad_norm_final = s.g.size() ? s.g.norm() : 0.0;
  return report;
}

SolveReport newton_mr_first_order(const FiniteSumProblem& problem,
                                  const HessianSource& hessian_source,
                                  const SolverConfig& config) {
  return drive(problem, hessian_source, config, false);
}

SolveReport newton_mr_second_order(const FiniteSumProblem& problem,
                                   const HessianSource& hessian_source,
                                   const SolverConfig& config) {
  return drive(problem, hessian_source, config, true);
}

}  // namespace nmr
