#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "eealloc/model.hpp"

namespace eealloc {

/// Where the efficiency-optimal transmit power landed in [P0, P_M].
enum class BoundaryCase { at_min_power, interior, clamped_at_budget };

const char* to_string(BoundaryCase c) noexcept;

/**
 * Users sorted by base level, the total powers at which each one starts
 * receiving excess power, and the efficiency and derivative-sign indicator at
 * each of those levels.
 */
struct CriticalLevelTable {
  std::vector<std::size_t> order;  ///< original user index per sorted slot
  std::vector<double> sorted_alpha;
  std::vector<double> sorted_gain;
  std::vector<double> sorted_bandwidth;
  std::vector<double> sorted_min_power;
  std::vector<double> levels;  ///< levels[0] = P0
  std::vector<double> ee_at_levels;
  std::vector<double> lambda_at_levels;
  std::vector<bool> beyond_budget;  ///< level exceeds P_M; ignored by search
  double min_total_power = 0.0;
  double min_total_rate = 0.0;
};

struct FixedOptResult {
  double p_opt = 0.0;
  Allocation allocation;
  double max_ee = 0.0;
  std::optional<std::pair<double, double>> bracket;
  BoundaryCase boundary_case = BoundaryCase::interior;
};

CriticalLevelTable critical_levels(const Scenario& s);

/**
 * Sign indicator of dEE/dP for P in the bracket where the first `active`
 * sorted users receive excess power:
 *
 *   (P + zeta P_C) W~/(P - B) - A ln 2 - W~ ln(P - B)
 *
 * with W~ the active bandwidth, A = R0 - sum w' log2 alpha' - W~ log2 W~ and
 * B = P0 - sum w' alpha'. Throws DomainError when P <= B.
 */
double theta(double total_power, std::size_t active,
             const CriticalLevelTable& table, const PowerModel& pm);

/**
 * Transmit power maximising energy efficiency with fixed bandwidths.
 *
 * Walks the critical levels until the indicator turns nonpositive, then
 * bisects theta inside that bracket. When the indicator is still positive at
 * P_M the result is clamped to P_M. Throws InfeasibleError when P0 > P_M.
 */
FixedOptResult optimize_fixed(const Scenario& s);

}  // namespace eealloc
