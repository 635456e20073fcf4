#include "nmr/problems.hpp"

#include <cmath>
#include <memory>

namespace nmr {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ln(1 + exp(z)) without overflow.
double softplus(double z) { return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0); }

}  // namespace

FiniteSumProblem logistic_problem(const Dataset& dataset, double reg_weight) {
  dataset.validate();
  auto data = std::make_shared<Dataset>(dataset);
  FiniteSumProblem p;
  p.n = data->n();
  p.d = data->d();
  p.reg_weight = reg_weight;
  p.x0 = Vector::Zero(p.d);
  p.sample_value = [data](Index i, const Vector& x) {
    const double z = data->features.row(i).dot(x);
    return softplus(z) - data->labels[static_cast<std::size_t>(i)] * z;
  };
  p.sample_gradient = [data](Index i, const Vector& x) -> Vector {
    const double z = data->features.row(i).dot(x);
    const double c = sigmoid(z) - data->labels[static_cast<std::size_t>(i)];
    return c * data->features.row(i).transpose();
  };
  p.sample_hvp = [data](Index i, const Vector& x, const Vector& v) -> Vector {
    const double z = data->features.row(i).dot(x);
    const double s = sigmoid(z);
    const double c = s * (1.0 - s) * data->features.row(i).dot(v);
    return c * data->features.row(i).transpose();
  };
  return p;
}

FiniteSumProblem nls_problem(const Dataset& dataset, double reg_weight) {
  dataset.validate();
  auto data = std::make_shared<Dataset>(dataset);
  FiniteSumProblem p;
  p.n = data->n();
  p.d = data->d();
  p.reg_weight = reg_weight;
  p.x0 = Vector::Zero(p.d);
  p.sample_value = [data](Index i, const Vector& x) {
    const double r = sigmoid(data->features.row(i).dot(x)) -
                     data->labels[static_cast<std::size_t>(i)];
    return r * r;
  };
  p.sample_gradient = [data](Index i, const Vector& x) -> Vector {
    const double s = sigmoid(data->features.row(i).dot(x));
    const double r = s - data->labels[static_cast<std::size_t>(i)];
    return (2.0 * r * s * (1.0 - s)) * data->features.row(i).transpose();
  };
  p.sample_hvp = [data](Index i, const Vector& x, const Vector& v) -> Vector {
    const double s = sigmoid(data->features.row(i).dot(x));
    const double sp = s * (1.0 - s);  // sigmoid'
    const double r = s - data->labels[static_cast<std::size_t>(i)];
    const double coef = 2.0 * sp * sp + 2.0 * r * sp * (1.0 - 2.0 * s);
    return (coef * data->features.row(i).dot(v)) * data->features.row(i).transpose();
  };
  return p;
}

FiniteSumProblem pl_quadratic(Index d, double mu, double l_g, std::uint64_t seed) {
  if (!(0.0 < mu && mu <= l_g)) throw std::invalid_argument("pl_quadratic: need 0 < mu <= L_g");
  Rng rng(seed);
  Vector spectrum(d);
  if (d == 1) {
    spectrum[0] = mu;
  } else {
    const double lo = std::log(mu), hi = std::log(l_g);
    for (Index i = 0; i < d; ++i)
      spectrum[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(d - 1));
  }
  const Matrix v = random_orthonormal(d, rng);
  auto q = std::make_shared<Matrix>(v * spectrum.asDiagonal() * v.transpose());
  *q = 0.5 * (*q + q->transpose());

  FiniteSumProblem p;
  p.n = 1;
  p.d = d;
  p.x0 = unit_sphere(d, rng);
  p.sample_value = [q](Index, const Vector& x) { return 0.5 * x.dot(*q * x); };
  p.sample_gradient = [q](Index, const Vector& x) -> Vector { return *q * x; };
  p.sample_hvp = [q](Index, const Vector&, const Vector& v_in) -> Vector { return *q * v_in; };
  p.dense_hessian = [q](const Vector&) -> Matrix { return *q; };
  return p;
}

FiniteSumProblem cubic_regularized_quadratic(const Matrix& a, double rho, const Vector& x0) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  auto am = std::make_shared<Matrix>(0.5 * (a + a.transpose()));
  const Index d = a.rows();

  FiniteSumProblem p;
  p.n = 1;
  p.d = d;
  p.x0 = x0;
  p.sample_value = [am, rho](Index, const Vector& x) {
    const double nx = x.norm();
    return 0.5 * x.dot(*am * x) + rho / 3.0 * nx * nx * nx;
  };
  p.sample_gradient = [am, rho](Index, const Vector& x) -> Vector {
    return *am * x + rho * x.norm() * x;
  };
  p.sample_hvp = [am, rho](Index, const Vector& x, const Vector& v) -> Vector {
    Vector hv = *am * v;
    const double nx = x.norm();
    if (nx > 0.0) hv += rho * (nx * v + (x.dot(v) / nx) * x);
    return hv;
  };
  p.dense_hessian = [am, rho, d](const Vector& x) -> Matrix {
    Matrix h = *am;
    const double nx = x.norm();
    if (nx > 0.0) h += rho * (nx * Matrix::Identity(d, d) + x * x.transpose() / nx);
    return h;
  };
  return p;
}

HessianOperator exact_hessian_operator(const FiniteSumProblem& problem, const Vector& x) {
  FiniteSumProblem p = problem;
  Vector xc = x;
  return HessianOperator(
      problem.d, [p, xc](const Vector& v) -> Vector { return p.hessian_vec(xc, v); }, 4.0,
      HessianOperator::Kind::Exact);
}

HessianOperator subsampled_hessian(const FiniteSumProblem& problem, const Vector& x,
                                   double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("sample fraction must be in (0, 1]");
  const Index n = problem.n;
  const Index k =
      std::max<Index>(1, static_cast<Index>(fraction * static_cast<double>(n)));
  auto indices = std::make_shared<std::vector<Index>>(sample_without_replacement(n, k, rng));
  const double realized = static_cast<double>(indices->size()) / static_cast<double>(n);
  FiniteSumProblem p = problem;
  Vector xc = x;
  return HessianOperator(
      problem.d,
      [p, xc, indices](const Vector& v) -> Vector {
        return p.hessian_vec_batch(xc, v, *indices);
      },
      4.0 * realized, HessianOperator::Kind::Subsampled,
      NoiseSpec{0.0, NoiseSpec::Construction::Subsample});
}

Matrix sign_conjugation_noise(Index d, double epsilon, Rng& rng) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  if (epsilon == 0.0) return Matrix::Zero(d, d);
  const Matrix w = random_orthonormal(d, rng);
  Vector signs(d);
  for (Index i = 0; i < d; ++i) signs[i] = (rng() & 1ull) ? 1.0 : -1.0;
  Matrix e = epsilon * w * signs.asDiagonal() * w.transpose();
  return 0.5 * (e + e.transpose());
}

HessianOperator noisy_hessian(const Matrix& h_dense, double epsilon, Rng& rng) {
  if (h_dense.rows() != h_dense.cols())
    throw std::invalid_argument("noisy_hessian: matrix must be square");
  if (epsilon == 0.0)
    return HessianOperator::from_dense(h_dense, 4.0, HessianOperator::Kind::Exact);
  const Matrix hbar = h_dense + sign_conjugation_noise(h_dense.rows(), epsilon, rng);
  return HessianOperator::from_dense(
      hbar, 4.0, HessianOperator::Kind::Noisy,
      NoiseSpec{epsilon, NoiseSpec::Construction::ExplicitRandom});
}

}  // namespace nmr
