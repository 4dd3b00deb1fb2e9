#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eealloc {

/// One receiver: channel gain |h|^2/N0, minimum rate, optional fixed bandwidth.
struct UserChannel {
  double gain = 1.0;
  double min_rate = 0.0;
  std::optional<double> fixed_bandwidth;
};

/// Amplifier efficiency (0, 1] and constant circuit power.
struct PowerModel {
  double amp_efficiency = 1.0;
  double circuit_power = 0.0;
};

struct Scenario {
  std::vector<UserChannel> users;
  double bandwidth_budget = 0.0;
  double power_budget = 0.0;
  PowerModel power_model;

  std::size_t size() const noexcept { return users.size(); }
};

/// Fixed mode: bandwidths are given per user. Joint mode: bandwidths are free.
enum class Mode { fixed, joint };

const char* to_string(Mode mode) noexcept;

struct UserAllocation {
  double bandwidth = 0.0;
  double power = 0.0;
  double rate = 0.0;
};

struct Allocation {
  std::vector<UserAllocation> per_user;
  double total_bandwidth = 0.0;
  double total_power = 0.0;
  double sum_rate = 0.0;
  double energy_efficiency = 0.0;
};

struct Violation {
  std::string field;
  std::string message;
};

/**
 * Achievable rate w log2(1 + p g / w) in bits/s.
 *
 * rate(0, 0, g) is 0 by convention; w = 0 with p > 0 throws DomainError.
 */
double rate(double bandwidth, double power, double gain);

/// R / (P/zeta + P_C). Throws DomainError when the consumed power is zero.
double energy_efficiency(double sum_rate, double transmit_power,
                         const PowerModel& pm);

/// Consumed power P/zeta + P_C.
double consumed_power(double transmit_power, const PowerModel& pm);

/// Collects every invariant violation instead of stopping at the first one.
std::vector<Violation> validate(const Scenario& s, Mode mode);

/**
 * Builds an Allocation from per-user bandwidths and powers, recomputing rates,
 * totals and energy efficiency from scratch.
 */
Allocation make_allocation(std::span<const double> bandwidths,
                           std::span<const double> powers, const Scenario& s);

/// Per-user fixed bandwidths; throws DomainError if any user lacks one.
std::vector<double> fixed_bandwidths(const Scenario& s);

}  // namespace eealloc
