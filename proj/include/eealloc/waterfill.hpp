#pragma once

#include <cstddef>
#include <vector>

#include "eealloc/model.hpp"

namespace eealloc {

/// State of the water-filling solution at one total power.
struct WaterfillDiagnostics {
  std::vector<double> min_powers;    ///< power meeting each rate floor exactly
  std::vector<double> base_levels;   ///< 1/g + p_min/w, the level each user
                                     ///< starts to receive excess power at
  double water_level = 0.0;          ///< 1/mu
  std::vector<std::size_t> binding_set;  ///< users held at min power (sorted)
  double min_total_power = 0.0;
  double min_total_rate = 0.0;
};

struct WaterfillResult {
  Allocation allocation;
  WaterfillDiagnostics diagnostics;
};

/**
 * Power that meets rate floor r_min on bandwidth w: (w/g)(2^{r_min/w} - 1).
 *
 * Throws InfeasibleError when r_min/w exceeds 700 log2(e), where the floor is
 * unreachable in double precision.
 */
double min_power(double bandwidth, double gain, double min_rate);

/**
 * Rate-maximising split of total power P over the fixed bandwidths.
 *
 * Users are ranked by base level; the number that receive excess power is
 * fixed by locating P between consecutive critical levels, after which the
 * water level follows in closed form. Users with equal base levels enter
 * together. Throws InfeasibleError when P is below the sum of minimum powers.
 */
WaterfillResult allocate(const Scenario& s, double total_power);

/**
 * Largest violation of the optimality conditions for a power split.
 *
 * Checks the power budget implied by the water level, stationarity
 * mu = w g/(w + p g) off the binding set, the one-sided inequality on it,
 * and the per-user power floors. All terms are relative.
 */
double kkt_residual(const Scenario& s, const Allocation& alloc,
                    const WaterfillDiagnostics& diag);

/// dR/dP of the optimal sum rate at P (the right derivative at a level).
double d_sum_rate_dP(const Scenario& s, const WaterfillDiagnostics& diag,
                     double total_power);

}  // namespace eealloc
