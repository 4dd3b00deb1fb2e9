#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eealloc/ee_fixed.hpp"
#include "eealloc/joint.hpp"
#include "eealloc/model.hpp"
#include "eealloc/oracle.hpp"
#include "eealloc/waterfill.hpp"

namespace eealloc::testing {

inline bool fixed_feasible(const Scenario& s) {
  double p0 = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    double w = *s.users[k].fixed_bandwidth;
    if (s.users[k].min_rate / w > 700.0) return false;
    p0 += min_power(w, s.users[k].gain, s.users[k].min_rate);
  }
  return p0 < s.power_budget;
}

inline bool joint_feasible(const Scenario& s) {
  double p0 = min_joint_power(s, s.bandwidth_budget);
  return p0 < s.power_budget;
}

struct SeededScenario {
  std::uint64_t seed;
  Scenario scenario;
};

/// First `count` seeds from `first_seed` whose random instance is feasible.
inline std::vector<SeededScenario> feasible_scenarios(
    std::size_t count, std::size_t users, Mode mode,
    std::uint64_t first_seed = 1) {
  std::vector<SeededScenario> out;
  for (std::uint64_t seed = first_seed;
       out.size() < count && seed < first_seed + 100 * count; ++seed) {
    Scenario s = random_scenario(seed, users, mode);
    bool ok = false;
    try {
      ok = mode == Mode::fixed ? fixed_feasible(s) : joint_feasible(s);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok) out.push_back({seed, s});
  }
  return out;
}

inline Scenario fixed_scenario(std::vector<double> gains,
                               std::vector<double> floors,
                               std::vector<double> bandwidths, double p_max,
                               double zeta = 1.0, double pc = 1.0) {
  Scenario s;
  double wsum = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    s.users.push_back({gains[k], floors[k], bandwidths[k]});
    wsum += bandwidths[k];
  }
  s.bandwidth_budget = wsum;
  s.power_budget = p_max;
  s.power_model = {zeta, pc};
  return s;
}

inline Scenario joint_scenario(std::vector<double> gains,
                               std::vector<double> floors, double w_max,
                               double p_max, double zeta = 1.0,
                               double pc = 1.0) {
  Scenario s;
  for (std::size_t k = 0; k < gains.size(); ++k)
    s.users.push_back({gains[k], floors[k], std::nullopt});
  s.bandwidth_budget = w_max;
  s.power_budget = p_max;
  s.power_model = {zeta, pc};
  return s;
}

}  // namespace eealloc::testing
