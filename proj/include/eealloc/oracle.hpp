#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "eealloc/model.hpp"
#include "eealloc/sweep_curve.hpp"

namespace eealloc {

struct PowerOracleResult {
  std::vector<double> best_powers;
  double best_rate = 0.0;
};

struct JointOracleResult {
  std::vector<double> bandwidths;
  std::vector<double> powers;
  double best_rate = 0.0;
};

/**
 * Exhaustive search over power splits p_k >= p_min_k with sum P, the excess
 * over the floors discretised into `steps` quanta. K <= 4.
 *
 * Shares no code with the water-filling solver beyond rate(); ties keep the
 * first grid point in enumeration order.
 */
PowerOracleResult grid_power_oracle(const Scenario& s, double total_power,
                                    std::size_t steps);

/**
 * Exhaustive search over (w2, p2) in {0, W/steps, ..., W} x {0, ..., P} for
 * two users, with user 1 taking the remainder. Points violating a rate floor
 * are discarded; std::nullopt means none survived.
 */
std::optional<JointOracleResult> grid_joint_oracle(const Scenario& s,
                                                   double total_bandwidth,
                                                   double total_power,
                                                   std::size_t steps);

/**
 * `samples` evenly spaced total powers over [P0, P_M] with the optimal sum
 * rate, efficiency and derivative-sign indicator of the given mode. Joint
 * mode uses the full bandwidth budget.
 */
SweepCurve sweep(const Scenario& s, Mode mode, std::size_t samples);

/**
 * 64-bit LCG (Knuth MMIX multiplier and increment) seeded directly with the
 * seed. Uniform draws take the top 53 bits of the next state:
 * u = ((x >> 11) + 1) / 2^53, which lies in (0, 1].
 */
class ScenarioRng {
 public:
  explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1].
  double unit();

  /// Uniform on (0, upper].
  double up_to(double upper) { return upper * unit(); }

 private:
  std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                  1442695040888963407ULL, 0ULL>
      engine_;
};

/**
 * Deterministic random instance with zeta = 0.8 and P_C = 10.
 *
 * Draw order: for each user its gain on (0, 10] (joint mode redraws until it
 * differs from every earlier gain) and its floor on (0, 10]; in fixed mode a
 * bandwidth weight on (0, 1] follows. Then the total bandwidth on (0, 15] and
 * the power budget on (0, 100]. Fixed mode splits the total bandwidth in
 * proportion to the weights and uses it as the budget.
 */
Scenario random_scenario(std::uint64_t seed, std::size_t users, Mode mode);

}  // namespace eealloc
