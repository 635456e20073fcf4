#include "nmr/hessian_operator.hpp"

#include <cmath>

namespace nmr {

Vector HessianOperator::operator()(const Vector& v) const {
  if (v.size() != dimension_)
    throw std::invalid_argument("operator/vector dimension mismatch");
  Vector out = apply_(v);
  if (!out.allFinite())
    throw NumericalError("Hessian-vector product produced a non-finite value");
  return out;
}

Vector HessianOperator::apply(const Vector& v, OracleCounter& counter) const {
  Vector out = (*this)(v);
  counter.add_hvp(cost_per_apply_);
  return out;
}

HessianOperator HessianOperator::shifted(double shift) const {
  ApplyFn base = apply_;
  const Index d = dimension_;
  return HessianOperator(
      d, [base, shift](const Vector& v) -> Vector { return base(v) + shift * v; },
      cost_per_apply_, Kind::Shifted, noise_);
}

HessianOperator HessianOperator::from_dense(const Matrix& h, double cost_per_apply,
                                            Kind kind, std::optional<NoiseSpec> noise) {
  if (h.rows() != h.cols()) throw std::invalid_argument("dense operator must be square");
  return HessianOperator(
      h.rows(), [h](const Vector& v) -> Vector { return h * v; }, cost_per_apply, kind,
      noise);
}

double spectral_norm_estimate(const HessianOperator& op, int iters, std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("spectral_norm_estimate needs iters >= 1");
  Rng rng(seed);
  Vector v = unit_sphere(op.dimension(), rng);
  double est = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vector hv = op(v);
    const double n1 = hv.norm();
    if (n1 == 0.0) return est;
    est = std::max(est, n1);  // ||Hv|| with ||v|| = 1 is a lower bound on ||H||
    Vector h2v = op(hv);
    const double n2 = h2v.norm();
    if (n2 == 0.0) return est;
    v = h2v / n2;
  }
  return est;
}

Matrix materialize(const HessianOperator& op) {
  const Index d = op.dimension();
  Matrix h(d, d);
  Vector e = Vector::Zero(d);
  for (Index j = 0; j < d; ++j) {
    e[j] = 1.0;
    h.col(j) = op(e);
    e[j] = 0.0;
  }
  return h;
}

}  // namespace nmr
