#pragma once

#include <cstddef>
#include <vector>

#include "eealloc/model.hpp"

namespace eealloc {

/// Range of the intermediate coefficient psi over which every floor holds.
struct PsiWindow {
  double psi_min = 0.0;
  double psi_max = 0.0;
  bool feasible = false;
};

struct JointSolution {
  double psi = 0.0;
  Allocation allocation;
  std::size_t leader_index = 0;
  double max_sum_rate = 0.0;   ///< sum of follower floors + w1 Omega1 / ln 2
  std::vector<double> omegas;  ///< W0((psi g - 1)/e) + 1 per user
};

struct FollowerAllocation {
  double bandwidth = 0.0;
  double power = 0.0;
};

/// d(bandwidth)/d(psi) and d(power)/d(psi) of a follower at fixed floor.
struct FollowerSensitivity {
  double d_bandwidth = 0.0;
  double d_power = 0.0;
};

/// W0((psi g - 1)/e) + 1: the follower's spectral efficiency in nats/s/Hz.
double omega(double psi, double gain);

/// d omega / d psi = g / (psi g - 1 + e^Omega), evaluated without overflow.
double omega_slope(double psi, double gain);

/**
 * Bandwidth and power that meet rate floor r_min exactly at coefficient psi:
 *
 *   w = r ln2 / Omega,   p = (r ln2 / g) (psi g - 1 - W0) / (W0 (W0 + 1))
 *
 * A zero floor yields (0, 0).
 */
FollowerAllocation follower_alloc(double psi, double gain, double min_rate);

FollowerSensitivity follower_sensitivity(double psi, double gain,
                                         double min_rate);

/// (1/g1 + p1/w1) ln(1 + p1 g1/w1) - p1/w1.
double psi_from_leader(double leader_bandwidth, double leader_power,
                       double leader_gain);

/// Index of the user with the largest gain.
std::size_t leader_index(const Scenario& s);

/**
 * psi_min saturates the bandwidth W with every user (leader included) on
 * its floor; psi_max does the same for power P. With every floor at zero the
 * window is [0, psi_from_leader(W, P, g1)].
 */
PsiWindow psi_window(const Scenario& s, double total_bandwidth,
                     double total_power);

/// Psi(psi) = Omega1 - ln(1 + (P - sum p_i) g1 / (W - sum w_i)).
double psi_residual(const Scenario& s, double total_bandwidth,
                    double total_power, double psi);

/// Zero of psi_residual inside the window, by bisection.
double solve_psi(const Scenario& s, double total_bandwidth, double total_power,
                 const PsiWindow& window);

/// Minimum transmit power with every floor met on total bandwidth W.
double min_joint_power(const Scenario& s, double total_bandwidth);

/**
 * Rate-maximising joint bandwidth and power assignment for totals (W, P).
 *
 * Every user except the best-gain leader sits on its rate floor; the leader
 * takes all remaining bandwidth and power. Throws InfeasibleError naming the
 * power deficit when the floors cannot be met.
 */
JointSolution joint_allocate(const Scenario& s, double total_bandwidth,
                             double total_power);

}  // namespace eealloc
