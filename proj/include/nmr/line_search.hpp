#pragma once

#include <functional>
#include <limits>

#include "nmr/oracle_counter.hpp"
#include "nmr/types.hpp"

namespace nmr {

struct LineSearchParams {
  double rho_S = 1e-4;      // Armijo parameter for solution directions, in (0, 1/2)
  double rho_N = 1e-4;      // Armijo/curvature parameter for NPC directions, in (0, 1)
  double h = 0.5;           // shrink factor in (0, 1)
  double alpha_init = 1.0;  // starting step of the forward/backward search
  int max_backtracks = 60;  // alpha bottoms out near 1e-18
  int max_forwards = 60;

  void validate() const;
};

struct LineSearchResult {
  double alpha = 0.0;
  double f_new = std::numeric_limits<double>::quiet_NaN();
  int evals = 0;         // acceptance-rule evaluations, each one function call
  bool truncated = false;  // forward expansion hit max_forwards
  bool failed = false;     // no acceptable step within max_backtracks
};

/// Armijo acceptance: f_trial <= f_cur + rho * alpha * <g, d>.
inline bool armijo_holds(double f_trial, double f_cur, double alpha, double dir_dot_grad,
                         double rho) {
  return f_trial <= f_cur + rho * alpha * dir_dot_grad;
}

/// Curvature acceptance for certificate NPC steps:
/// f_trial <= f_cur + (1/2) rho_N alpha^2 <d, H d>, with <d, H d> < 0.
inline bool curvature_holds(double f_trial, double f_cur, double alpha, double dir_h_dir,
                            double rho_n) {
  return f_trial <= f_cur + 0.5 * rho_n * alpha * alpha * dir_h_dir;
}

using ObjectiveFn = std::function<double(const Vector&)>;

/// Backward tracking: largest alpha in {alpha_start * h^j} satisfying the
/// Armijo rule. Each trial increments counter.function_calls. Requires
/// dir_dot_grad < 0.
LineSearchResult backtrack(const ObjectiveFn& f, const Vector& x, const Vector& d,
                           double f_cur, double dir_dot_grad, double rho,
                           const LineSearchParams& params, OracleCounter& counter,
                           double alpha_start = 1.0);

/// Forward/backward tracking: if alpha_init is acceptable, expand alpha/h
/// while the rule holds and return the last accepted step; otherwise fall
/// back to backward tracking from alpha_init.
LineSearchResult forward_backtrack(const ObjectiveFn& f, const Vector& x, const Vector& d,
                                   double f_cur, double dir_dot_grad, double rho,
                                   const LineSearchParams& params, OracleCounter& counter);

/// Forward/backward tracking under the curvature rule. Requires dir_h_dir < 0.
LineSearchResult forward_backtrack_curvature(const ObjectiveFn& f, const Vector& x,
                                             const Vector& d, double f_cur,
                                             double dir_h_dir, double rho_n,
                                             const LineSearchParams& params,
                                             OracleCounter& counter);

}  // namespace nmr
