#include "nmr/problem.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace nmr {

int worker_count() {
  const char* env = std::getenv("NEWTONMR_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

namespace {

constexpr Index kChunk = 256;

// Evaluates chunk_fn over [0, count) in fixed chunks and combines the partial
// results in chunk order. The chunk grid does not depend on the worker count.
template <typename Partial, typename ChunkFn, typename Combine>
void chunked_reduce(Index count, std::vector<Partial>& partials, const ChunkFn& chunk_fn,
                    const Combine& combine, Partial& accum) {
  const Index n_chunks = (count + kChunk - 1) / kChunk;
  partials.resize(static_cast<std::size_t>(n_chunks));
  const int workers =
      static_cast<int>(std::min<Index>(worker_count(), std::max<Index>(n_chunks, 1)));
  auto run = [&](Index chunk) {
    const Index begin = chunk * kChunk;
    const Index end = std::min(begin + kChunk, count);
    partials[static_cast<std::size_t>(chunk)] = chunk_fn(begin, end);
  };
  if (workers <= 1) {
    for (Index c = 0; c < n_chunks; ++c) run(c);
  } else {
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (Index c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run(c);
      });
    for (auto& th : pool) th.join();
  }
  for (Index c = 0; c < n_chunks; ++c) combine(accum, partials[static_cast<std::size_t>(c)]);
}

double regularizer_value(const Vector& x) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double x2 = x[i] * x[i];
    s += x2 / (1.0 + x2);
  }
  return s;
}

void add_regularizer_gradient(const Vector& x, double w, Vector& g) {
  for (Index i = 0; i < x.size(); ++i) {
    const double q = 1.0 + x[i] * x[i];
    g[i] += w * 2.0 * x[i] / (q * q);
  }
}

void add_regularizer_hvp(const Vector& x, const Vector& v, double w, Vector& hv) {
  for (Index i = 0; i < x.size(); ++i) {
    const double x2 = x[i] * x[i];
    const double q = 1.0 + x2;
    hv[i] += w * (2.0 - 6.0 * x2) / (q * q * q) * v[i];
  }
}

}  // namespace

double FiniteSumProblem::value(const Vector& x) const {
  std::vector<double> partials;
  double sum = 0.0;
  chunked_reduce<double>(
      n, partials,
      [&](Index b, Index e) {
        double s = 0.0;
        for (Index i = b; i < e; ++i) s += sample_value(i, x);
        return s;
      },
      [](double& a, const double& p) { a += p; }, sum);
  double f = sum / static_cast<double>(n);
  if (reg_weight != 0.0) f += reg_weight * regularizer_value(x);
  if (!std::isfinite(f) && !(f > 0)) throw NumericalError("objective value is NaN/-inf");
  return f;
}

Vector FiniteSumProblem::gradient(const Vector& x) const {
  std::vector<Vector> partials;
  Vector sum = Vector::Zero(d);
  chunked_reduce<Vector>(
      n, partials,
      [&](Index b, Index e) {
        Vector s = Vector::Zero(d);
        for (Index i = b; i < e; ++i) s += sample_gradient(i, x);
        return s;
      },
      [](Vector& a, const Vector& p) { a += p; }, sum);
  Vector g = sum / static_cast<double>(n);
  if (reg_weight != 0.0) add_regularizer_gradient(x, reg_weight, g);
  if (!g.allFinite()) throw NumericalError("gradient produced a non-finite value");
  return g;
}

Vector FiniteSumProblem::hessian_vec(const Vector& x, const Vector& v) const {
  std::vector<Vector> partials;
  Vector sum = Vector::Zero(d);
  chunked_reduce<Vector>(
      n, partials,
      [&](Index b, Index e) {
        Vector s = Vector::Zero(d);
        for (Index i = b; i < e; ++i) s += sample_hvp(i, x, v);
        return s;
      },
      [](Vector& a, const Vector& p) { a += p; }, sum);
  Vector hv = sum / static_cast<double>(n);
  if (reg_weight != 0.0) add_regularizer_hvp(x, v, reg_weight, hv);
  return hv;
}

Vector FiniteSumProblem::hessian_vec_batch(const Vector& x, const Vector& v,
                                           const std::vector<Index>& indices) const {
  if (indices.empty()) throw std::invalid_argument("hessian_vec_batch: empty sample");
  std::vector<Vector> partials;
  Vector sum = Vector::Zero(d);
  const Index count = static_cast<Index>(indices.size());
  chunked_reduce<Vector>(
      count, partials,
      [&](Index b, Index e) {
        Vector s = Vector::Zero(d);
        for (Index i = b; i < e; ++i) s += sample_hvp(indices[static_cast<std::size_t>(i)], x, v);
        return s;
      },
      [](Vector& a, const Vector& p) { a += p; }, sum);
  Vector hv = sum / static_cast<double>(count);
  if (reg_weight != 0.0) add_regularizer_hvp(x, v, reg_weight, hv);
  return hv;
}

double FiniteSumProblem::value(const Vector& x, OracleCounter& counter) const {
  counter.add_function();
  return value(x);
}

Vector FiniteSumProblem::gradient(const Vector& x, OracleCounter& counter) const {
  counter.add_gradient();
  return gradient(x);
}

Matrix FiniteSumProblem::dense_hessian_at(const Vector& x) const {
  if (dense_hessian) return dense_hessian(x);
  if (d > 500) throw std::invalid_argument("dense Hessian assembly capped at d <= 500");
  Matrix h(d, d);
  Vector e = Vector::Zero(d);
  for (Index j = 0; j < d; ++j) {
    e[j] = 1.0;
    h.col(j) = hessian_vec(x, e);
    e[j] = 0.0;
  }
  return 0.5 * (h + h.transpose());  // symmetrize away assembly roundoff
}

double finite_difference_gradcheck(const FiniteSumProblem& problem, const Vector& x,
                                   double h_step) {
  if (!(h_step > 0.0)) throw std::invalid_argument("h_step must be positive");
  const Vector g = problem.gradient(x);
  Vector xp = x, xm = x;
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h_step;
    xm[i] = x[i] - h_step;
    const double num = (problem.value(xp) - problem.value(xm)) / (2.0 * h_step);
    worst = std::max(worst, std::abs(num - g[i]) / (1.0 + std::abs(g[i])));
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return worst;
}

double finite_difference_hvpcheck(const FiniteSumProblem& problem, const Vector& x,
                                  const Vector& v, double h_step) {
  if (!(h_step > 0.0)) throw std::invalid_argument("h_step must be positive");
  const Vector hv = problem.hessian_vec(x, v);
  const Vector num =
      (problem.gradient(x + h_step * v) - problem.gradient(x - h_step * v)) / (2.0 * h_step);
  return (num - hv).norm() / (1.0 + hv.norm());
}

}  // namespace nmr
