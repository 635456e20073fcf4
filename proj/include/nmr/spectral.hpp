#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nmr/types.hpp"

namespace nmr {

// Dense diagnostics for the interplay between a symmetric matrix H and a
// vector g: an eigenvalue of H is g-relevant when g has nonzero projection
// onto its eigenspace. Everything here is capped at d <= 500.

/// Distinct g-relevant eigenvalues zeta_1 > ... > zeta_phi together with the
/// index map Phi into the full ordered spectrum: Phi(k) is the largest index
/// of zeta_k when zeta_k >= 0 and the smallest when zeta_k < 0.
struct GRelevantSpectrum {
  std::vector<double> distinct_relevant;  // zeta_1 > ... > zeta_phi
  int phi_plus = 0;
  int phi_zero = 0;  // 0 or 1
  int phi_minus = 0;
  std::vector<Index> phi_map;         // Phi(k), 1-based, one per distinct relevant value
  std::vector<double> full_spectrum;  // group representatives repeated by multiplicity, descending
  /// Column k: unit eigenvector s_k of the eigenspace of zeta_k with the
  /// basis rotated so that g is orthogonal to all but this one vector
  /// (<s_k, g> = the projection norm > 0).
  Matrix relevant_basis;

  int phi() const { return static_cast<int>(distinct_relevant.size()); }
};

/// relevance_tol is relative to ||g||: a projection of norm
/// <= relevance_tol * ||g|| counts as non-relevant. Distinct eigenvalues are
/// grouped at a relative tolerance of 1e-9 * ||H||.
GRelevantSpectrum g_relevant_spectrum(const Matrix& h, const Vector& g,
                                      double relevance_tol = 1e-10);

/// Unique k with zeta_k = full_spectrum[j] when that value is g-relevant;
/// empty otherwise. j is 1-based.
std::optional<int> phi_left_inverse(const GRelevantSpectrum& spectrum, Index j);

/// ||g's projection onto the nonzero g-relevant eigenspaces|| (the S S^T g of
/// the null-space regularity bound).
double nonzero_relevant_projection_norm(const GRelevantSpectrum& spectrum, const Vector& g);

enum class SubspaceSide { Top, Bottom };

struct DavisKahanResult {
  double lhs = 0;  // || U_i U_i^T - S_i S_i^T ||
  double rhs = 0;  // 2 ||E|| / delta_i
  bool holds = false;
  SubspaceSide side = SubspaceSide::Top;
};

/// Invariant-subspace perturbation bound. Top compares the projectors onto
/// the leading i eigenvectors with the gap zeta_i - zeta_{i+1} (and
/// zeta_{d-1} - zeta_d when i = d); Bottom mirrors it through complements,
/// comparing the trailing blocks from index i down with the gap
/// zeta_{i-1} - zeta_i. A nonpositive gap is a domain error (the bound is
/// vacuous).
DavisKahanResult davis_kahan_check(const Matrix& h, const Matrix& e, Index i,
                                   SubspaceSide side = SubspaceSide::Top);

/// Max over i of |lambda_i(H+E) - lambda_i(H)|; at most ||E|| by Weyl.
double weyl_check(const Matrix& h, const Matrix& e);

/// A constructed instance of the eigenvalue/eigenvector transfer statement:
/// which assumption case it was built for and the certified indices into the
/// cumulative positive (k) / negative (l) g-relevant blocks of H.
struct Assumption5Instance {
  Matrix h;
  Vector g;
  Matrix e;
  int case_tag = 2;  // 1, 2, or 3
  int k = 0;         // 1-based cumulative positive block index (cases 1, 2)
  int l = 0;         // 1-based index into the negative relevant list (cases 1, 3)
  double mu = 0, nu = 0, delta = 0, sigma = 0, l_g = 0;
};

struct TransferReport {
  bool hypothesis_ok = false;
  std::string note;
  double eps_realized = 0;
  bool holds = false;
  int case_held = 0;
  double eigen_margin = std::numeric_limits<double>::quiet_NaN();
  /// Achieved projection mass minus the required bound, with the
  /// nu sigma^2 / (4 L_g^2) threshold (used for the verdict) and the
  /// nu sigma^2 / (4 L_g) variant (reported only).
  double proj_margin = std::numeric_limits<double>::quiet_NaN();
  double proj_margin_alt = std::numeric_limits<double>::quiet_NaN();
};

/// Verifies that the noisy matrix H + E keeps a strong g-relevant eigenvalue
/// (>= mu - eps) carrying the required share of g's relevant projection.
/// If eps exceeds min{mu, sqrt(nu) delta sigma / (2 (sqrt(nu) delta + 4 L_g))}
/// the hypothesis is violated and the check is skipped.
TransferReport assumption5_transfer_check(const Assumption5Instance& instance);

}  // namespace nmr
