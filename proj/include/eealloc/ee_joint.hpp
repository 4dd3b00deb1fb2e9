#pragma once

#include <cstddef>
#include <optional>

#include "eealloc/ee_fixed.hpp"
#include "eealloc/joint.hpp"
#include "eealloc/model.hpp"
#include "eealloc/sweep_curve.hpp"

namespace eealloc {

struct JointOptResult {
  double p_opt = 0.0;
  JointSolution solution;
  double max_ee = 0.0;
  std::optional<SweepCurve> lambda_trace;
  BoundaryCase boundary_case = BoundaryCase::interior;
  /// The indicator was not monotone on [P0, P_M]; golden-section search on
  /// the efficiency itself produced p_opt.
  bool used_fallback = false;
};

/**
 * d psi / dP at totals (W, P) by implicit differentiation of Psi(psi, P) = 0.
 *
 * Throws DomainError if d Psi / d psi vanishes.
 */
double dpsi_dP(const Scenario& s, double total_bandwidth, double total_power);

/**
 * Sign indicator of dEE/dP under joint allocation:
 * (P + zeta P_C) F1 dpsi/dP - F2, where F1 = dR/dpsi and F2 = R.
 */
double lambda_P(const Scenario& s, double total_bandwidth, double total_power);

/**
 * Efficiency-optimal transmit power using the whole bandwidth budget.
 *
 * Bisects lambda_P between P0 and P_M after checking the bracket signs; a
 * positive indicator at P_M clamps to P_M and a nonpositive one at P0 stops
 * there. `trace_samples` > 0 also records an evenly spaced lambda_P trace.
 */
JointOptResult optimize_joint(const Scenario& s, std::size_t trace_samples = 0);

}  // namespace eealloc
