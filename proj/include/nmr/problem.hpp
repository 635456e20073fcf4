#pragma once

#include <functional>
#include <vector>

#include "nmr/oracle_counter.hpp"
#include "nmr/types.hpp"

namespace nmr {

/// Finite-sum objective f(x) = (1/n) sum_i f_i(x) + reg_weight * sum_j x_j^2/(1+x_j^2),
/// defined through deterministic per-sample value/gradient/HVP maps. Batch
/// reductions run over fixed-size chunks combined in chunk order, so results
/// are identical for any worker count (NEWTONMR_THREADS).
struct FiniteSumProblem {
  Index n = 0;
  Index d = 0;
  std::function<double(Index, const Vector&)> sample_value;
  std::function<Vector(Index, const Vector&)> sample_gradient;
  std::function<Vector(Index, const Vector&, const Vector&)> sample_hvp;
  double reg_weight = 0.0;
  Vector x0;
  /// Optional closed-form dense Hessian; when absent, dense_hessian_at
  /// assembles it column by column from sample_hvp (diagnostic scale only).
  std::function<Matrix(const Vector&)> dense_hessian;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector hessian_vec(const Vector& x, const Vector& v) const;
  /// Mean of H_i(x) v over the given sample indices, plus the exact
  /// regularizer curvature.
  Vector hessian_vec_batch(const Vector& x, const Vector& v,
                           const std::vector<Index>& indices) const;

  double value(const Vector& x, OracleCounter& counter) const;
  Vector gradient(const Vector& x, OracleCounter& counter) const;

  Matrix dense_hessian_at(const Vector& x) const;
};

/// Max over coordinates of the mixed error |g_num - g_ana| / (1 + |g_ana|)
/// with central differences of the value.
double finite_difference_gradcheck(const FiniteSumProblem& problem, const Vector& x,
                                   double h_step = 1e-5);

/// Mixed error of H(x) v against the central difference of the gradient.
double finite_difference_hvpcheck(const FiniteSumProblem& problem, const Vector& x,
                                  const Vector& v, double h_step = 1e-5);

/// Worker cap from NEWTONMR_THREADS (>= 1; unset or invalid means 1).
int worker_count();

}  // namespace nmr
