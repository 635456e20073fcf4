#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nmr/hessian_operator.hpp"
#include "nmr/types.hpp"

namespace nmr {

// MINRES on the system H s = -g with two inline exit tests evaluated from the
// QR/Givens scalars alone:
//
//   * sub-problem inexactness,  ||H r_{t-1}|| < eta * ||H s_{t-1}||, via
//     phi_{t-1} * sqrt(gamma_t^2 + delta_{t+1}^2) < eta * sqrt(phi_0^2 - phi_{t-1}^2)
//     -> the current iterate s_{t-1} is returned as a solution direction;
//
//   * nonpositive curvature,  <r_{t-1}, H r_{t-1}> <= 0, via
//     c_{t-1} * gamma_t^{(1)} >= 0
//     -> the current residual r_{t-1} is returned as an NPC direction.
//
// Neither test costs a vector operation. The inexactness test uses a strict
// inequality so that eta = 0 disables the solution exit entirely (used by the
// minimum-eigenvalue certificate), and a vanishing H g falls through to the
// zero-curvature NPC exit instead of returning the zero step.

enum class MinresTag : int { SOL, NPC, EXHAUSTED };

const char* to_string(MinresTag tag);

/// Scalars of the Lanczos/Givens recurrence at iteration t, as they stand
/// right after the rotation and before the exit tests.
struct MinresScalars {
  int t = 0;               // 1-based iteration index
  double phi0 = 0;         // ||g||
  double phi_prev = 0;     // phi_{t-1}
  double alpha_tilde = 0;  // Lanczos diagonal  alpha_t
  double beta_t = 0;       // Lanczos off-diagonal beta_t
  double beta_next = 0;    // beta_{t+1}
  double c_prev = 0;       // c_{t-1}
  double s_prev = 0;       // s_{t-1}
  double delta1_t = 0;     // delta_t^{(1)}
  double delta2_t = 0;     // delta_t^{(2)}
  double eps_t = 0;        // eps_t
  double gamma1_t = 0;     // gamma_t^{(1)}
  double delta1_next = 0;  // delta_{t+1}^{(1)}
};

/// ||H r_{t-1}|| reconstructed from scalars.
inline double inexactness_lhs(const MinresScalars& s) {
  return s.phi_prev * std::hypot(s.gamma1_t, s.delta1_next);
}

/// ||H s_{t-1}|| reconstructed from scalars.
inline double inexactness_rhs(const MinresScalars& s) {
  const double d2 = s.phi0 * s.phi0 - s.phi_prev * s.phi_prev;
  return std::sqrt(std::max(0.0, d2));
}

/// Sub-problem inexactness test (strict).
inline bool inexactness_condition(const MinresScalars& s, double eta) {
  return inexactness_lhs(s) < eta * inexactness_rhs(s);
}

/// Nonpositive-curvature test; the sign proxy equals the sign of
/// <r_{t-1}, H r_{t-1}> up to a positive factor. Zero-curvature ties count
/// as NPC; tie_tol widens the tie to a relative band so that exact ties
/// survive roundoff (the products forming gamma_t^{(1)} set the scale).
inline bool npc_condition(const MinresScalars& s, double tie_tol = 0.0) {
  const double scale = std::abs(s.c_prev) * (std::abs(s.s_prev * s.delta1_t) +
                                             std::abs(s.c_prev * s.alpha_tilde));
  return s.c_prev * s.gamma1_t >= -tie_tol * scale;
}

struct MinresTraceRow {
  int t = 0;
  double phi = 0;            // phi_t when the iteration completed, else phi_{t-1}
  double alpha_tilde = 0;
  double beta_next = 0;
  bool npc_flag = false;     // NPC test outcome at this iteration
  double curvature_proxy = 0;  // c_{t-1} * gamma_t^{(1)}
  double lambda_min_tt = std::numeric_limits<double>::quiet_NaN();
};

/// The symmetric tridiagonal T_t = V_t^T H V_t accumulated by the Lanczos
/// process: diagonal alpha_1..alpha_t, off-diagonal beta_2..beta_t.
struct TridiagonalTrace {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

struct MinresOutcome {
  MinresTag tag = MinresTag::EXHAUSTED;
  Vector direction;
  int iterations = 0;   // operator applications performed
  double phi0 = 0;      // ||g||
  double phi_exit = 0;  // residual norm carried by the returned direction
  std::vector<MinresTraceRow> trace;   // filled when tracing is on
  TridiagonalTrace tridiagonal;        // filled when lambda_min tracing is on

  double relative_residual() const { return phi0 > 0 ? phi_exit / phi0 : 0.0; }
};

struct MinresOptions {
  double eta = 0.0;
  int max_iter = 0;              // 0 means the operator dimension
  double breakdown_tol = 1e-13;  // relative to the running |T| scale
  double npc_tie_tol = 1e-14;    // relative band for zero-curvature ties
  bool collect_trace = false;
  bool trace_lambda_min = false;  // implies collect_trace
};

/// Per-iteration view handed to the observer before the exit tests run.
/// References are only valid inside the callback.
struct MinresStepView {
  const MinresScalars& scalars;
  const Vector& v_prev;    // v_{t-1} (zero at t = 1)
  const Vector& v_cur;     // v_t
  const Vector& sol_prev;  // s_{t-1}
  const Vector& res_prev;  // r_{t-1}
};

using MinresObserver = std::function<void(const MinresStepView&)>;

/// Requires ||g|| > 0, eta >= 0. Returns SOL with s_{t-1} when the
/// inexactness test fires, NPC with r_{t-1} when the curvature test fires,
/// SOL with the current iterate at a Lanczos breakdown when eta > 0 (the
/// residual is then zero and the inexactness condition holds trivially at the
/// next step), and EXHAUSTED otherwise (breakdown with eta = 0, or max_iter).
MinresOutcome minres_solve(const HessianOperator& op, const Vector& g,
                           const MinresOptions& options, OracleCounter& counter,
                           const MinresObserver& observer = nullptr);

/// lambda_min of the symmetric tridiagonal with the given diagonal and
/// off-diagonal entries.
double tridiagonal_lambda_min(const std::vector<double>& diag,
                              const std::vector<double>& offdiag);

/// (t, lambda_min(T_t)) for each Lanczos step, stopping at NPC detection,
/// breakdown, or max_iter. The row at the detection step is included.
std::vector<std::pair<int, double>> lanczos_min_eig_trace(const HessianOperator& op,
                                                          const Vector& g, int max_iter,
                                                          OracleCounter& counter);

/// Reference solver: explicit orthonormal Krylov basis plus a dense
/// least-squares solve of min ||H s + g|| over K_t(H, g). t beyond the grade
/// is truncated. Intended as a test oracle for minres_solve on small dense
/// instances.
Vector krylov_oracle_solve(const Matrix& h_dense, const Vector& g, int t);

/// Grade of g with respect to H: the dimension at which K_t(H, g) stops
/// growing.
int krylov_grade(const Matrix& h_dense, const Vector& g);

/// Trace dump, columns: t, phi_t, alpha_tilde, beta_next, npc_flag, lambda_min_Tt.
void write_trace_csv(const MinresOutcome& outcome, const std::string& path);

}  // namespace nmr
