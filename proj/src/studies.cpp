#include "nmr/studies.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "nmr/csv.hpp"
#include "nmr/random.hpp"

namespace nmr {

TwoByTwoForms two_by_two_closed_forms(double l_g, double mu, double eps, double h) {
  if (!(l_g > mu && mu > 0.0 && h > 0.0))
    throw std::invalid_argument("two_by_two_closed_forms: need L_g > mu > 0 and h > 0");
  const double a = l_g + eps;
  const double b = -mu + eps;
  const double s2 = 1.0 + h * h;
  TwoByTwoForms f;
  f.alpha1 = (a + b * h * h) / s2;
  f.beta2 = (a - b) * h / s2;
  f.alpha2 = (a * h * h + b) / s2;
  f.r0_curvature = a + b * h * h;
  const double denom = a * a + b * b * h * h;
  const double scale = (a - b) * h;
  f.r1_curvature = scale * scale * a * b * (a + b * h * h) / (denom * denom);
  if (f.r0_curvature <= 0.0) {
    f.npc_iteration = 1;
    f.rel_residual_npc = 1.0;
  } else if (b <= 0.0) {
    f.npc_iteration = 2;
    f.rel_residual_npc = scale / (std::sqrt(s2) * std::sqrt(denom));
  } else {
    f.npc_iteration = 0;
    f.rel_residual_npc = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

TwoByTwoObserved run_two_by_two(double l_g, double mu, double eps, double h) {
  Matrix hbar(2, 2);
  hbar << l_g + eps, 0.0, 0.0, -mu + eps;
  Vector g(2);
  g << -1.0, -h;
  const HessianOperator op = HessianOperator::from_dense(hbar);

  TwoByTwoObserved obs;
  obs.alpha2 = std::numeric_limits<double>::quiet_NaN();
  obs.r1_curvature = std::numeric_limits<double>::quiet_NaN();
  auto watch = [&](const MinresStepView& view) {
    if (view.scalars.t == 1) {
      obs.alpha1 = view.scalars.alpha_tilde;
      obs.beta2 = view.scalars.beta_next;
      obs.r0_curvature = view.res_prev.dot(hbar * view.res_prev);
    } else if (view.scalars.t == 2) {
      obs.alpha2 = view.scalars.alpha_tilde;
      obs.r1_curvature = view.res_prev.dot(hbar * view.res_prev);
    }
  };
  MinresOptions opts;
  opts.eta = 0.0;  // run to NPC detection or the grade
  opts.trace_lambda_min = true;
  OracleCounter counter;
  const MinresOutcome out = minres_solve(op, g, opts, counter, watch);
  obs.lambda_min_t1 = out.trace.front().lambda_min_tt;
  if (out.tag == MinresTag::NPC) {
    obs.npc_iteration = out.iterations;
    obs.rel_residual_npc = out.relative_residual();
  } else {
    obs.npc_iteration = 0;
    obs.rel_residual_npc = std::numeric_limits<double>::quiet_NaN();
  }
  return obs;
}

SweepStudy eps_independence_study(const std::vector<double>& eps_grid, Index d,
                                  std::uint64_t seed, Index n_pos, Index n_neg) {
  if (n_pos + n_neg != d) throw std::invalid_argument("spectrum sizes must add up to d");
  Rng rng(seed);
  Vector diag(d);
  for (Index i = 0; i < n_pos; ++i) diag[i] = uniform(rng, 0.0, 10.0);
  for (Index i = 0; i < n_neg; ++i) diag[n_pos + i] = uniform(rng, -1.0, 0.0);
  const Matrix v = random_orthonormal(d, rng);
  const Matrix w = random_orthonormal(d, rng);
  Vector signs(d);
  for (Index i = 0; i < d; ++i) signs[i] = (rng() & 1ull) ? 1.0 : -1.0;
  const Vector g = unit_sphere(d, rng);

  const Matrix base = v * diag.asDiagonal() * v.transpose();
  const Matrix noise_unit = w * signs.asDiagonal() * w.transpose();

  SweepStudy study;
  for (double eps : eps_grid) {
    Matrix hbar = base + eps * noise_unit;
    hbar = 0.5 * (hbar + hbar.transpose());
    MinresOptions opts;
    opts.eta = 0.0;
    opts.trace_lambda_min = true;
    OracleCounter counter;
    const MinresOutcome out =
        minres_solve(HessianOperator::from_dense(hbar), g, opts, counter);

    SweepSummary summary;
    summary.epsilon = eps;
    double last_pre = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : out.trace) {
      study.rows.push_back({eps, row.t, row.lambda_min_tt, row.npc_flag});
      if (!row.npc_flag) last_pre = row.lambda_min_tt;
    }
    if (out.tag == MinresTag::NPC) {
      summary.npc_iteration = out.iterations;
      summary.relative_residual = out.relative_residual();
      summary.lambda_min_pre_npc = last_pre;
    }
    study.summaries.push_back(summary);
  }
  return study;
}

void write_eig_min_csv(const SweepStudy& study, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "epsilon,iteration,lambda_min_Tt\n";
  for (const auto& row : study.rows)
    os << csv_double(row.epsilon) << ',' << row.t << ',' << csv_double(row.lambda_min)
       << '\n';
}

void write_relative_residual_csv(const SweepStudy& study, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "epsilon,relative_residual,npc_iteration\n";
  for (const auto& s : study.summaries)
    os << csv_double(s.epsilon) << ',' << csv_double(s.relative_residual) << ','
       << s.npc_iteration << '\n';
}

}  // namespace nmr
