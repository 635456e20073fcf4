#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nmr/minres.hpp"
#include "nmr/types.hpp"

namespace nmr {

// Closed-form studies on the 2 x 2 family
//   H = diag(L_g + eps, -mu + eps),   g = -(1, h),
// which exposes how additive noise moves (or fails to move) the quantities
// the inner solver's guarantees are built on, and an epsilon-sweep on a
// 30 x 30 randomly rotated construction.

struct TwoByTwoForms {
  double alpha1 = 0;        // Lanczos diagonal at t = 1: (a + b h^2) / (1 + h^2)
  double beta2 = 0;         // off-diagonal: (a - b) h / (1 + h^2), with a - b = L_g + mu
  double alpha2 = 0;        // diagonal at t = 2
  double r0_curvature = 0;  // <r_0, H r_0> = a + b h^2
  double r1_curvature = 0;  // <r_1, H r_1>
  double rel_residual_npc = 0;  // ||r||/||g|| at the NPC exit (1 when it fires at t = 1)
  int npc_iteration = 0;        // 1, 2, or 0 when the matrix is positive definite
};

/// Exact expressions derived from the construction (a = L_g + eps,
/// b = -mu + eps). Note beta2 and alpha1 - eps are independent of eps: the
/// noise here is a pure eps * I shift, which moves the Lanczos diagonal by
/// exactly eps and nothing else.
TwoByTwoForms two_by_two_closed_forms(double l_g, double mu, double eps, double h);

struct TwoByTwoObserved {
  double alpha1 = 0;
  double beta2 = 0;
  double alpha2 = 0;  // NaN if the run exits at t = 1
  double r0_curvature = 0;
  double r1_curvature = 0;  // NaN if the run exits at t = 1
  double rel_residual_npc = 0;
  int npc_iteration = 0;
  double lambda_min_t1 = 0;
};

/// Runs the actual MINRES recurrence on the instance (eta = 0 so only the
/// NPC test can stop it) and reports the observed scalars; curvatures are
/// computed explicitly from the residual vectors.
TwoByTwoObserved run_two_by_two(double l_g, double mu, double eps, double h);

/// One epsilon of the sweep study.
struct SweepSummary {
  double epsilon = 0;
  int npc_iteration = 0;                // 0 when no NPC fired
  double relative_residual = 0;         // at the NPC exit
  double lambda_min_pre_npc = 0;        // lambda_min(T_t) at the last pre-detection step
};

struct EigMinRow {
  double epsilon = 0;
  int t = 0;
  double lambda_min = 0;
  bool npc_flag = false;
};

struct SweepStudy {
  std::vector<SweepSummary> summaries;
  std::vector<EigMinRow> rows;
};

/// H = V D V^T + eps * W D_{+-1} W^T with D holding n_pos draws from
/// U(0, 10) and n_neg draws from U(-1, 0); V, W, the signs, and the probe
/// vector g are drawn once from the seed and shared across the whole grid.
SweepStudy eps_independence_study(const std::vector<double>& eps_grid, Index d,
                                  std::uint64_t seed, Index n_pos = 28, Index n_neg = 2);

void write_eig_min_csv(const SweepStudy& study, const std::string& path);
void write_relative_residual_csv(const SweepStudy& study, const std::string& path);

}  // namespace nmr
