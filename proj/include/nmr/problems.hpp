#pragma once

#include <cstdint>

#include "nmr/dataset.hpp"
#include "nmr/hessian_operator.hpp"
#include "nmr/problem.hpp"
#include "nmr/random.hpp"

namespace nmr {

/// Binary logistic regression,
///   f(x) = (1/n) sum_i [ ln(1 + exp(<a_i, x>)) - b_i <a_i, x> ],
/// in the overflow-safe softplus form. Convex; per-sample HVP is
/// s(1-s) <a_i, v> a_i with s the sigmoid.
FiniteSumProblem logistic_problem(const Dataset& dataset, double reg_weight = 0.0);

/// Nonconvex nonlinear least squares with per-sample squared residuals,
///   f(x) = (1/n) sum_i (sigmoid(<a_i, x>) - b_i)^2.
FiniteSumProblem nls_problem(const Dataset& dataset, double reg_weight = 0.0);

/// f(x) = (1/2) x^T Q x with Q symmetric positive definite, spectrum
/// log-spaced in [mu, L_g] under a random rotation. f* = 0 at the origin and
/// the PL constant equals mu. The initial point is a seeded unit vector.
FiniteSumProblem pl_quadratic(Index d, double mu, double l_g, std::uint64_t seed);

/// f(x) = (1/2) x^T A x + (rho/3) ||x||^3: bounded below for rho > 0 even
/// when A is indefinite, with Hessian Lipschitz constant exactly 2 rho.
FiniteSumProblem cubic_regularized_quadratic(const Matrix& a, double rho, const Vector& x0);

/// Exact Hessian of the problem at x as a matrix-free operator (cost 4).
HessianOperator exact_hessian_operator(const FiniteSumProblem& problem, const Vector& x);

/// Mean Hessian over a without-replacement sample of ceil-clamped size
/// floor(fraction * n) >= 1, drawn once and frozen in the operator.
/// cost_per_apply = 4 * realized fraction.
HessianOperator subsampled_hessian(const FiniteSumProblem& problem, const Vector& x,
                                   double fraction, Rng& rng);

/// H + eps * W D_{+-1} W^T with W a random orthonormal matrix and D_{+-1} a
/// random sign diagonal; the realized noise norm is exactly eps.
HessianOperator noisy_hessian(const Matrix& h_dense, double epsilon, Rng& rng);

/// The noise term of the construction above, on its own.
Matrix sign_conjugation_noise(Index d, double epsilon, Rng& rng);

}  // namespace nmr
