#include "nmr/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace nmr {

namespace {

constexpr Index kDenseCap = 500;

double operator_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct EigenGroups {
  std::vector<double> reps;            // descending
  std::vector<Index> mult;
  std::vector<Matrix> bases;           // d x mult columns each
  std::vector<double> proj_norms;      // ||projection of g||
  std::vector<Vector> projections;     // projection of g per group
  double group_tol = 0;
};

EigenGroups group_eigenpairs(const Matrix& h, const Vector& g) {
  const Index d = h.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.transpose()));
  // Descending order.
  Vector vals(d);
  Matrix vecs(d, d);
  for (Index i = 0; i < d; ++i) {
    vals[i] = es.eigenvalues()[d - 1 - i];
    vecs.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  EigenGroups out;
  out.group_tol = 1e-9 * std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    // Chain-group close eigenvalues; numerically-zero values always share
    // one group so that at most one zero eigenspace exists.
    while (end < d && (vals[end - 1] - vals[end] <= out.group_tol ||
                       (std::abs(vals[end - 1]) <= out.group_tol &&
                        std::abs(vals[end]) <= out.group_tol)))
      ++end;
    const Index m = end - start;
    out.reps.push_back(vals.segment(start, m).mean());
    out.mult.push_back(m);
    out.bases.push_back(vecs.middleCols(start, m));
    const Matrix& basis = out.bases.back();
    out.projections.push_back(basis * (basis.transpose() * g));
    out.proj_norms.push_back(out.projections.back().norm());
    start = end;
  }
  return out;
}

}  // namespace

GRelevantSpectrum g_relevant_spectrum(const Matrix& h, const Vector& g,
                                      double relevance_tol) {
  const Index d = h.rows();
  if (h.cols() != d || g.size() != d)
    throw std::invalid_argument("g_relevant_spectrum: dimension mismatch");
  if (d > kDenseCap)
    throw std::invalid_argument("g_relevant_spectrum: dense diagnostics capped at d <= 500");
  const double gnorm = g.norm();
  if (gnorm == 0.0) throw std::invalid_argument("g_relevant_spectrum: zero gradient");

  const EigenGroups groups = group_eigenpairs(h, g);
  const double zero_tol = groups.group_tol;

  GRelevantSpectrum out;
  for (std::size_t gi = 0; gi < groups.reps.size(); ++gi) {
    const double rep = groups.reps[gi];
    for (Index m = 0; m < groups.mult[gi]; ++m) out.full_spectrum.push_back(rep);
  }
  std::vector<Vector> basis_cols;
  for (std::size_t gi = 0; gi < groups.reps.size(); ++gi) {
    if (groups.proj_norms[gi] <= relevance_tol * gnorm) continue;
    const double rep = groups.reps[gi];
    out.distinct_relevant.push_back(rep);
    basis_cols.push_back(groups.projections[gi] / groups.proj_norms[gi]);
    if (rep > zero_tol)
      ++out.phi_plus;
    else if (rep < -zero_tol)
      ++out.phi_minus;
    else
      ++out.phi_zero;
    // Phi: max index for nonnegative values, min index for negative ones.
    Index idx;
    if (rep >= -zero_tol) {
      idx = 0;
      for (double v : out.full_spectrum)
        if (v >= rep) ++idx;
    } else {
      idx = 1;
      for (double v : out.full_spectrum)
        if (v > rep) ++idx;
    }
    out.phi_map.push_back(idx);
  }
  out.relevant_basis.resize(d, static_cast<Index>(basis_cols.size()));
  for (Index c = 0; c < out.relevant_basis.cols(); ++c)
    out.relevant_basis.col(c) = basis_cols[static_cast<std::size_t>(c)];
  return out;
}

std::optional<int> phi_left_inverse(const GRelevantSpectrum& spectrum, Index j) {
  if (j < 1 || j > static_cast<Index>(spectrum.full_spectrum.size()))
    return std::nullopt;
  const double value = spectrum.full_spectrum[static_cast<std::size_t>(j - 1)];
  for (std::size_t k = 0; k < spectrum.distinct_relevant.size(); ++k)
    if (spectrum.distinct_relevant[k] == value) return static_cast<int>(k + 1);
  return std::nullopt;
}

double nonzero_relevant_projection_norm(const GRelevantSpectrum& spectrum, const Vector& g) {
  double sq = 0.0;
  double scale = 0.0;
  for (double v : spectrum.full_spectrum) scale = std::max(scale, std::abs(v));
  const double zero_tol = 1e-9 * std::max(scale, 1e-300);
  for (std::size_t k = 0; k < spectrum.distinct_relevant.size(); ++k) {
    if (std::abs(spectrum.distinct_relevant[k]) <= zero_tol) continue;
    const double coeff = spectrum.relevant_basis.col(static_cast<Index>(k)).dot(g);
    sq += coeff * coeff;
  }
  return std::sqrt(sq);
}

DavisKahanResult davis_kahan_check(const Matrix& h, const Matrix& e, Index i,
                                   SubspaceSide side) {
  const Index d = h.rows();
  if (h.cols() != d || e.rows() != d || e.cols() != d)
    throw std::invalid_argument("davis_kahan_check: dimension mismatch");
  if (i < 1 || i > d) throw std::invalid_argument("davis_kahan_check: index out of range");
  if (side == SubspaceSide::Bottom && i == 1)
    throw std::invalid_argument("davis_kahan_check: bottom side needs i >= 2");

  Eigen::SelfAdjointEigenSolver<Matrix> es_h(0.5 * (h + h.transpose()));
  const Matrix hbar = 0.5 * (h + h.transpose()) + 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es_hbar(hbar);
  const auto gap_at = [&](Index j) {  // zeta_j - zeta_{j+1}, descending order
    return es_h.eigenvalues()[d - j] - es_h.eigenvalues()[d - j - 1];
  };

  DavisKahanResult res;
  res.side = side;
  double gap;
  Matrix s_block, u_block;
  if (side == SubspaceSide::Top) {
    gap = (i < d) ? gap_at(i) : gap_at(d - 1);
    // Eigen orders ascending; the top-i block sits in the last i columns.
    s_block = es_h.eigenvectors().rightCols(i);
    u_block = es_hbar.eigenvectors().rightCols(i);
  } else {
    gap = gap_at(i - 1);
    s_block = es_h.eigenvectors().leftCols(d - i + 1);
    u_block = es_hbar.eigenvectors().leftCols(d - i + 1);
  }
  if (!(gap > 0.0)) throw std::domain_error("davis_kahan_check: vanishing spectral gap");
  res.lhs = operator_norm(u_block * u_block.transpose() - s_block * s_block.transpose());
  res.rhs = 2.0 * operator_norm(e) / gap;
  res.holds = res.lhs <= res.rhs + 1e-10;
  return res;
}

double weyl_check(const Matrix& h, const Matrix& e) {
  Eigen::SelfAdjointEigenSolver<Matrix> es_h(0.5 * (h + h.transpose()),
                                             Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> es_hbar(
      0.5 * (h + h.transpose()) + 0.5 * (e + e.transpose()), Eigen::EigenvaluesOnly);
  return (es_h.eigenvalues() - es_hbar.eigenvalues()).cwiseAbs().maxCoeff();
}

TransferReport assumption5_transfer_check(const Assumption5Instance& instance) {
  TransferReport report;
  report.eps_realized = operator_norm(instance.e);
  const double eps = report.eps_realized;
  const double bound =
      std::min(instance.mu, std::sqrt(instance.nu) * instance.delta * instance.sigma /
                                (2.0 * (std::sqrt(instance.nu) * instance.delta +
                                        4.0 * instance.l_g)));
  if (eps > bound) {
    report.hypothesis_ok = false;
    report.note = "noise norm exceeds the hypothesis bound; check skipped";
    return report;
  }
  report.hypothesis_ok = true;

  const GRelevantSpectrum spec = g_relevant_spectrum(instance.h + instance.e, instance.g);
  const double target_eig = instance.mu - eps;

  // Projection coefficients of g on the relevant directions of H + E,
  // split into the positive and negative blocks. phi_zero eigenvalues do not
  // enter either block (they are excluded from U by construction).
  std::vector<double> pos_coeff, neg_coeff, pos_val, neg_val;
  double uu_sq = 0.0;
  double scale = 0.0;
  for (double v : spec.full_spectrum) scale = std::max(scale, std::abs(v));
  const double zero_tol = 1e-9 * std::max(scale, 1e-300);
  for (int k = 0; k < spec.phi(); ++k) {
    const double val = spec.distinct_relevant[static_cast<std::size_t>(k)];
    if (std::abs(val) <= zero_tol) continue;
    const double coeff = spec.relevant_basis.col(k).dot(instance.g);
    uu_sq += coeff * coeff;
    if (val > 0) {
      pos_val.push_back(val);
      pos_coeff.push_back(coeff);
    } else {
      neg_val.push_back(val);
      neg_coeff.push_back(coeff);
    }
  }
  const double lg2 = instance.l_g * instance.l_g;
  const double required = instance.nu * instance.sigma * instance.sigma / (4.0 * lg2) * uu_sq;
  const double required_alt =
      instance.nu * instance.sigma * instance.sigma / (4.0 * instance.l_g) * uu_sq;

  // Cumulative projection mass of the top-i positive block.
  auto cumulative = [](const std::vector<double>& coeff, std::size_t count) {
    double sq = 0.0;
    for (std::size_t m = 0; m < count; ++m) sq += coeff[m] * coeff[m];
    return sq;
  };

  auto try_case_ii = [&]() {
    for (std::size_t i = 0; i < pos_val.size(); ++i) {
      if (pos_val[i] < target_eig) break;  // descending; later ones are smaller
      const double mass = cumulative(pos_coeff, i + 1);
      if (mass >= required) {
        report.holds = true;
        report.case_held = 2;
        report.eigen_margin = pos_val[i] - target_eig;
        report.proj_margin = mass - required;
        report.proj_margin_alt = mass - required_alt;
        return true;
      }
    }
    return false;
  };
  auto try_case_iii = [&]() {
    // neg_val is descending (toward more negative at the end); the block
    // U_{j-} accumulates from the most negative upward.
    for (std::size_t j = 0; j < neg_val.size(); ++j) {
      const std::size_t from = neg_val.size() - 1 - j;
      if (std::abs(neg_val[from]) < target_eig) break;
      double mass = 0.0;
      for (std::size_t m = from; m < neg_val.size(); ++m) mass += neg_coeff[m] * neg_coeff[m];
      if (mass >= required) {
        report.holds = true;
        report.case_held = 3;
        report.eigen_margin = std::abs(neg_val[from]) - target_eig;
        report.proj_margin = mass - required;
        report.proj_margin_alt = mass - required_alt;
        return true;
      }
    }
    return false;
  };
  auto try_case_i = [&]() {
    for (std::size_t i = 0; i < pos_val.size(); ++i) {
      if (pos_val[i] < target_eig) break;
      for (std::size_t j = 0; j < neg_val.size(); ++j) {
        const std::size_t from = neg_val.size() - 1 - j;
        if (std::abs(neg_val[from]) < target_eig) break;
        double mass = cumulative(pos_coeff, i + 1);
        for (std::size_t m = from; m < neg_val.size(); ++m)
          mass += neg_coeff[m] * neg_coeff[m];
        if (mass >= required) {
          report.holds = true;
          report.case_held = 1;
          report.eigen_margin =
              std::min(pos_val[i], std::abs(neg_val[from])) - target_eig;
          report.proj_margin = mass - required;
          report.proj_margin_alt = mass - required_alt;
          return true;
        }
      }
    }
    return false;
  };

  switch (instance.case_tag) {
    case 2: try_case_ii(); break;
    case 3: try_case_iii(); break;
    case 1:
      if (!try_case_i() && !try_case_ii()) try_case_iii();
      break;
    default: throw std::invalid_argument("case_tag must be 1, 2, or 3");
  }
  if (!report.holds) report.note = "no index satisfied the conclusion";
  return report;
}

}  // namespace nmr
