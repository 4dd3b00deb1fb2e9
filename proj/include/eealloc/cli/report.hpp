#pragma once

#include <string>
#include <string_view>

#include "eealloc/ee_fixed.hpp"
#include "eealloc/ee_joint.hpp"
#include "eealloc/model.hpp"

namespace eealloc::cli {

/// "sha256:<hex>" of the given bytes.
std::string content_digest(std::string_view bytes);

/// Rounds to 12 significant digits, the precision of every emitted number.
double round12(double x);

struct FixedResiduals {
  double kkt = 0.0;
  double power_budget = 0.0;  ///< |sum p - P| / max(1, P)
  double floor = 0.0;         ///< max (r_min - r)+ / max(1, r_min)
};

/// Optimality certificate of a fixed-bandwidth allocation at total power P.
FixedResiduals fixed_residuals(const Scenario& s, const Allocation& alloc,
                               double total_power);

struct JointResiduals {
  double stationarity = 0.0;      ///< max |psi_k - psi_leader| / psi_leader
  double floor_equality = 0.0;    ///< followers: |r - r_min| / max(1, r_min)
  double leader_floor = 0.0;      ///< (r_min - r)+ / max(1, r_min)
  double bandwidth_budget = 0.0;  ///< |sum w - W| / max(1, W)
  double power_budget = 0.0;      ///< |sum p - P| / max(1, P)
};

/**
 * Optimality certificate of a joint allocation: every follower on its floor
 * with the same marginal coefficient psi as the leader, budgets exhausted.
 */
JointResiduals joint_residuals(const Scenario& s, const Allocation& alloc,
                               double total_bandwidth, double total_power);

std::string fixed_report(const Scenario& s, std::string_view digest,
                         const FixedOptResult& result);

std::string joint_report(const Scenario& s, std::string_view digest,
                         const JointOptResult& result);

/// CSV with header P,sum_rate,ee,indicator.
std::string sweep_csv(const SweepCurve& curve);

}  // namespace eealloc::cli
