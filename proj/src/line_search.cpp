#include "nmr/line_search.hpp"

#include <cmath>

namespace nmr {

void LineSearchParams::validate() const {
  if (!(rho_S > 0.0 && rho_S < 0.5)) throw std::invalid_argument("rho_S must be in (0, 1/2)");
  if (!(rho_N > 0.0 && rho_N < 1.0)) throw std::invalid_argument("rho_N must be in (0, 1)");
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h must be in (0, 1)");
  if (!(alpha_init > 0.0)) throw std::invalid_argument("alpha_init must be positive");
  if (max_backtracks < 1 || max_forwards < 1)
    throw std::invalid_argument("line-search budgets must be positive");
}

namespace {

using AcceptFn = std::function<bool(double alpha, double f_trial)>;

double evaluate(const ObjectiveFn& f, const Vector& x, const Vector& d, double alpha,
                OracleCounter& counter) {
  const double f_trial = f(x + alpha * d);
  counter.add_function();
  if (!std::isfinite(f_trial) && !(f_trial > 0))  // -inf or NaN; +inf just fails the rule
    throw NumericalError("line search: objective returned a non-finite value");
  return f_trial;
}

LineSearchResult backtrack_impl(const ObjectiveFn& f, const Vector& x, const Vector& d,
                                const AcceptFn& accept, double alpha_start,
                                const LineSearchParams& params, OracleCounter& counter) {
  LineSearchResult res;
  double alpha = alpha_start;
  for (int j = 0; j <= params.max_backtracks; ++j) {
    const double f_trial = evaluate(f, x, d, alpha, counter);
    ++res.evals;
    if (accept(alpha, f_trial)) {
      res.alpha = alpha;
      res.f_new = f_trial;
      return res;
    }
    alpha *= params.h;
  }
  res.failed = true;
  return res;
}

LineSearchResult forward_backtrack_impl(const ObjectiveFn& f, const Vector& x,
                                        const Vector& d, const AcceptFn& accept,
                                        const LineSearchParams& params,
                                        OracleCounter& counter) {
  LineSearchResult res;
  double alpha = params.alpha_init;
  double f_trial = evaluate(f, x, d, alpha, counter);
  ++res.evals;
  if (!accept(alpha, f_trial)) {
    LineSearchResult bt =
        backtrack_impl(f, x, d, accept, alpha * params.h, params, counter);
    bt.evals += res.evals;
    return bt;
  }
  double accepted_alpha = alpha;
  double accepted_f = f_trial;
  for (int j = 0; j < params.max_forwards; ++j) {
    alpha /= params.h;
    f_trial = evaluate(f, x, d, alpha, counter);
    ++res.evals;
    if (!accept(alpha, f_trial)) {
      res.alpha = accepted_alpha;
      res.f_new = accepted_f;
      return res;
    }
    accepted_alpha = alpha;
    accepted_f = f_trial;
  }
  res.alpha = accepted_alpha;
  res.f_new = accepted_f;
  res.truncated = true;
  return res;
}

}  // namespace

LineSearchResult backtrack(const ObjectiveFn& f, const Vector& x, const Vector& d,
                           double f_cur, double dir_dot_grad, double rho,
                           const LineSearchParams& params, OracleCounter& counter,
                           double alpha_start) {
  if (!(dir_dot_grad < 0.0))
    throw std::invalid_argument("backtrack: <g, d> must be negative");
  if (!(alpha_start > 0.0)) throw std::invalid_argument("backtrack: alpha must be positive");
  return backtrack_impl(
      f, x, d,
      [&](double a, double ft) { return armijo_holds(ft, f_cur, a, dir_dot_grad, rho); },
      alpha_start, params, counter);
}

LineSearchResult forward_backtrack(const ObjectiveFn& f, const Vector& x, const Vector& d,
                                   double f_cur, double dir_dot_grad, double rho,
                                   const LineSearchParams& params, OracleCounter& counter) {
  if (!(dir_dot_grad < 0.0))
    throw std::invalid_argument("forward_backtrack: <g, d> must be negative");
  return forward_backtrack_impl(
      f, x, d,
      [&](double a, double ft) { return armijo_holds(ft, f_cur, a, dir_dot_grad, rho); },
      params, counter);
}

LineSearchResult forward_backtrack_curvature(const ObjectiveFn& f, const Vector& x,
                                             const Vector& d, double f_cur,
                                             double dir_h_dir, double rho_n,
                                             const LineSearchParams& params,
                                             OracleCounter& counter) {
  if (!(dir_h_dir < 0.0))
    throw std::invalid_argument("forward_backtrack_curvature: <d, H d> must be negative");
  return forward_backtrack_impl(
      f, x, d,
      [&](double a, double ft) { return curvature_holds(ft, f_cur, a, dir_h_dir, rho_n); },
      params, counter);
}

}  // namespace nmr
