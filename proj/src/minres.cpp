#include "nmr/minres.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nmr/csv.hpp"

namespace nmr {

const char* to_string(MinresTag tag) {
  switch (tag) {
    case MinresTag::SOL: return "SOL";
    case MinresTag::NPC: return "NPC";
    case MinresTag::EXHAUSTED: return "EXHAUSTED";
  }
  return "?";
}

namespace {

void check_recurrence_finite(const MinresScalars& s) {
  if (!std::isfinite(s.alpha_tilde) || !std::isfinite(s.beta_next) ||
      !std::isfinite(s.gamma1_t) || !std::isfinite(s.phi_prev)) {
    throw NumericalError("MINRES recurrence produced a non-finite scalar at t = " +
                         std::to_string(s.t));
  }
}

}  // namespace

MinresOutcome minres_solve(const HessianOperator& op, const Vector& g,
                           const MinresOptions& options, OracleCounter& counter,
                           const MinresObserver& observer) {
  const Index d = op.dimension();
  if (g.size() != d) throw std::invalid_argument("minres: dimension mismatch");
  if (options.eta < 0.0) throw std::invalid_argument("minres: eta must be nonnegative");
  const double phi0 = g.norm();
  if (phi0 == 0.0) throw std::invalid_argument("minres: zero gradient");
  const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(d);
  const bool tracing = options.collect_trace || options.trace_lambda_min;

  MinresOutcome out;
  out.phi0 = phi0;

  // State entering iteration t.
  Vector res = -g;             // r_{t-1}
  Vector v_cur = res / phi0;   // v_t
  Vector v_prev = Vector::Zero(d);
  Vector sol = Vector::Zero(d);  // s_{t-1}
  Vector w_prev = Vector::Zero(d), w_prev2 = Vector::Zero(d);

  MinresScalars sc;
  sc.phi0 = phi0;
  sc.phi_prev = phi0;
  sc.beta_t = phi0;  // beta_1 = ||g||, never used against v_0 = 0
  sc.c_prev = -1.0;
  sc.s_prev = 0.0;
  sc.delta1_t = 0.0;
  sc.eps_t = 0.0;

  std::vector<double>& tridiag_alpha = out.tridiagonal.diag;
  std::vector<double>& tridiag_beta = out.tridiagonal.offdiag;
  double t_scale = 0.0;  // running estimate of ||T|| for the breakdown test

  for (int t = 1; t <= max_iter; ++t) {
    sc.t = t;

    // Lanczos step.
    Vector q = op.apply(v_cur, counter);
    sc.alpha_tilde = v_cur.dot(q);
    q -= sc.alpha_tilde * v_cur;
    if (t > 1) q -= sc.beta_t * v_prev;
    sc.beta_next = q.norm();

    // Left Givens rotation of the new tridiagonal column.
    sc.delta2_t = sc.c_prev * sc.delta1_t + sc.s_prev * sc.alpha_tilde;
    sc.gamma1_t = sc.s_prev * sc.delta1_t - sc.c_prev * sc.alpha_tilde;
    const double eps_next = sc.s_prev * sc.beta_next;
    sc.delta1_next = -sc.c_prev * sc.beta_next;

    check_recurrence_finite(sc);
    t_scale = std::max({t_scale, std::abs(sc.alpha_tilde), sc.beta_next, std::abs(sc.beta_t)});

    if (options.trace_lambda_min) {
      tridiag_alpha.push_back(sc.alpha_tilde);
      if (t > 1) tridiag_beta.push_back(sc.beta_t);
    }

    if (observer) observer(MinresStepView{sc, v_prev, v_cur, sol, res});

    const bool npc_now = npc_condition(sc, options.npc_tie_tol);
    if (tracing) {
      MinresTraceRow row;
      row.t = t;
      row.phi = sc.phi_prev;
      row.alpha_tilde = sc.alpha_tilde;
      row.beta_next = sc.beta_next;
      row.npc_flag = npc_now;
      row.curvature_proxy = sc.c_prev * sc.gamma1_t;
      if (options.trace_lambda_min)
        row.lambda_min_tt = tridiagonal_lambda_min(tridiag_alpha, tridiag_beta);
      out.trace.push_back(row);
    }

    if (inexactness_condition(sc, options.eta)) {
      out.tag = MinresTag::SOL;
      out.direction = sol;
      out.iterations = t;
      out.phi_exit = sc.phi_prev;
      return out;
    }
    if (npc_now) {
      out.tag = MinresTag::NPC;
      out.direction = res;
      out.iterations = t;
      out.phi_exit = sc.phi_prev;
#ifndef NDEBUG
      {
        const double curv = res.dot(op(res));
        const double scale = res.squaredNorm() * std::max(t_scale, 1e-300);
        if (curv > 1e-10 * scale)
          throw NumericalError("MINRES NPC exit with positive explicit curvature");
      }
#endif
      return out;
    }

    // Update step. gamma2 > 0 here: gamma1 = 0 would have fired the NPC test.
    const double gamma2 = std::hypot(sc.gamma1_t, sc.beta_next);
    const double c_t = sc.gamma1_t / gamma2;
    const double s_t = sc.beta_next / gamma2;
    const double tau_t = c_t * sc.phi_prev;
    const double phi_t = s_t * sc.phi_prev;

    Vector w_t = (v_cur - sc.delta2_t * w_prev - sc.eps_t * w_prev2) / gamma2;
    sol += tau_t * w_t;
    if (tracing) out.trace.back().phi = phi_t;

    if (sc.beta_next <= options.breakdown_tol * std::max(t_scale, 1e-300)) {
      // Krylov space exhausted; phi_t = (beta/gamma2) * phi_{t-1} is zero to
      // roundoff, so for eta > 0 the inexactness condition holds at t+1.
      out.tag = options.eta > 0.0 ? MinresTag::SOL : MinresTag::EXHAUSTED;
      out.direction = sol;
      out.iterations = t;
      out.phi_exit = phi_t;
      return out;
    }

    Vector v_next = q / sc.beta_next;
    res = (s_t * s_t) * res - (phi_t * c_t) * v_next;

    w_prev2.swap(w_prev);
    w_prev.swap(w_t);
    v_prev.swap(v_cur);
    v_cur.swap(v_next);

    sc.phi_prev = phi_t;
    sc.beta_t = sc.beta_next;
    sc.c_prev = c_t;
    sc.s_prev = s_t;
    sc.delta1_t = sc.delta1_next;
    sc.eps_t = eps_next;
  }

  out.tag = MinresTag::EXHAUSTED;
  out.direction = sol;
  out.iterations = max_iter;
  out.phi_exit = sc.phi_prev;
  return out;
}

double tridiagonal_lambda_min(const std::vector<double>& diag,
                              const std::vector<double>& offdiag) {
  const Index t = static_cast<Index>(diag.size());
  if (t == 0) throw std::invalid_argument("empty tridiagonal");
  if (offdiag.size() + 1 != diag.size())
    throw std::invalid_argument("tridiagonal size mismatch");
  Matrix tt = Matrix::Zero(t, t);
  for (Index i = 0; i < t; ++i) tt(i, i) = diag[static_cast<std::size_t>(i)];
  for (Index i = 0; i + 1 < t; ++i) {
    tt(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
    tt(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(tt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<std::pair<int, double>> lanczos_min_eig_trace(const HessianOperator& op,
                                                          const Vector& g, int max_iter,
                                                          OracleCounter& counter) {
  MinresOptions opts;
  opts.eta = 0.0;  // the solution exit never fires; only NPC/breakdown stop us
  opts.max_iter = max_iter;
  opts.trace_lambda_min = true;
  const MinresOutcome out = minres_solve(op, g, opts, counter);
  std::vector<std::pair<int, double>> rows;
  rows.reserve(out.trace.size());
  for (const auto& r : out.trace) rows.emplace_back(r.t, r.lambda_min_tt);
  return rows;
}

int krylov_grade(const Matrix& h_dense, const Vector& g) {
  const Index d = h_dense.rows();
  std::vector<Vector> basis;
  Vector u = g;
  for (Index j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) u -= b.dot(u) * b;
    const double n = u.norm();
    if (n <= 1e-12 * std::max(1.0, g.norm())) break;
    basis.push_back(u / n);
    u = h_dense * basis.back();
  }
  return static_cast<int>(basis.size());
}

Vector krylov_oracle_solve(const Matrix& h_dense, const Vector& g, int t) {
  const Index d = h_dense.rows();
  if (h_dense.cols() != d || g.size() != d)
    throw std::invalid_argument("krylov_oracle_solve: dimension mismatch");
  if (d > 100) throw std::invalid_argument("krylov_oracle_solve: dense oracle is capped at d <= 100");
  if (t < 1) throw std::invalid_argument("krylov_oracle_solve: t must be >= 1");

  // Orthonormal basis of K_t(H, g) by Gram-Schmidt with reorthogonalization;
  // rank deficiency truncates t to the grade.
  std::vector<Vector> basis;
  Vector u = g;
  for (int j = 0; j < t; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) u -= b.dot(u) * b;
    const double n = u.norm();
    if (n <= 1e-12 * std::max(1.0, g.norm())) break;
    basis.push_back(u / n);
    u = h_dense * basis.back();
  }
  const Index k = static_cast<Index>(basis.size());
  Matrix bmat(d, k);
  for (Index j = 0; j < k; ++j) bmat.col(j) = basis[static_cast<std::size_t>(j)];

  const Matrix hb = h_dense * bmat;
  const Vector y = hb.colPivHouseholderQr().solve(-g);
  return bmat * y;
}

void write_trace_csv(const MinresOutcome& outcome, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "t,phi_t,alpha_tilde,beta_next,npc_flag,lambda_min_Tt\n";
  for (const auto& r : outcome.trace) {
    os << r.t << ',' << csv_double(r.phi) << ',' << csv_double(r.alpha_tilde) << ','
       << csv_double(r.beta_next) << ',' << (r.npc_flag ? 1 : 0) << ','
       << csv_double(r.lambda_min_tt) << '\n';
  }
}

}  // namespace nmr
