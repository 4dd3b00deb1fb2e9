#include "eealloc/model.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "eealloc/errors.hpp"

namespace eealloc {

const char* to_string(Mode mode) noexcept {
  return mode == Mode::fixed ? "fixed" : "joint";
}

double rate(double bandwidth, double power, double gain) {
  if (bandwidth < 0.0 || power < 0.0 || !(gain > 0.0)) {
    throw DomainError("rate: requires w >= 0, p >= 0, g > 0");
  }
  if (bandwidth == 0.0) {
    if (power == 0.0) {
      return 0.0;
    }
    throw DomainError("rate: positive power on zero bandwidth");
  }
  return bandwidth * std::log1p(power * gain / bandwidth) / std::numbers::ln2;
}

double consumed_power(double transmit_power, const PowerModel& pm) {
  return transmit_power / pm.amp_efficiency + pm.circuit_power;
}

double energy_efficiency(double sum_rate, double transmit_power,
                         const PowerModel& pm) {
  if (transmit_power < 0.0) {
    throw DomainError("energy_efficiency: negative transmit power");
  }
  const double total = consumed_power(transmit_power, pm);
  if (!(total > 0.0)) {
    throw DomainError("energy_efficiency: zero consumed power");
  }
  return sum_rate / total;
}

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::vector<Violation> validate(const Scenario& s, Mode mode) {
  std::vector<Violation> out;
  auto add = [&out](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };

  if (s.users.empty()) {
    add("users", "at least one user is required");
  }
  if (!positive_finite(s.bandwidth_budget)) {
    add("bandwidth_budget", "must be positive and finite");
  }
  if (!positive_finite(s.power_budget)) {
    add("power_budget", "must be positive and finite");
  }
  const auto& pm = s.power_model;
  if (!(std::isfinite(pm.amp_efficiency) && pm.amp_efficiency > 0.0 &&
        pm.amp_efficiency <= 1.0)) {
    add("amp_efficiency", "must lie in (0, 1]");
  }
  if (!(std::isfinite(pm.circuit_power) && pm.circuit_power >= 0.0)) {
    add("circuit_power", "must be nonnegative and finite");
  }

  double bandwidth_sum = 0.0;
  bool all_fixed = true;
  for (std::size_t k = 0; k < s.users.size(); ++k) {
    const auto& u = s.users[k];
    const std::string prefix = "users[" + std::to_string(k) + "].";
    if (!positive_finite(u.gain)) {
      add(prefix + "gain", "must be positive and finite");
    }
    if (!(std::isfinite(u.min_rate) && u.min_rate >= 0.0)) {
      add(prefix + "min_rate", "must be nonnegative and finite");
    }
    if (u.fixed_bandwidth) {
      if (!positive_finite(*u.fixed_bandwidth)) {
        add(prefix + "bandwidth", "must be positive and finite");
      } else {
        bandwidth_sum += *u.fixed_bandwidth;
      }
    } else {
      all_fixed = false;
      if (mode == Mode::fixed) {
        add(prefix + "bandwidth", "fixed mode requires a bandwidth per user");
      }
    }
  }

  if (mode == Mode::fixed && all_fixed &&
      bandwidth_sum > s.bandwidth_budget * (1.0 + 1e-12)) {
    add("bandwidth_budget", "sum of fixed bandwidths exceeds the budget");
  }
  if (mode == Mode::joint) {
    std::set<double> seen;
    for (const auto& u : s.users) {
      if (!seen.insert(u.gain).second) {
        add("users", "gains not distinct");
        break;
      }
    }
  }
  return out;
}

Allocation make_allocation(std::span<const double> bandwidths,
                           std::span<const double> powers, const Scenario& s) {
  if (bandwidths.size() != s.size() || powers.size() != s.size()) {
    throw DomainError("make_allocation: size mismatch with scenario");
  }
  Allocation a;
  a.per_user.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double r = rate(bandwidths[k], powers[k], s.users[k].gain);
    a.per_user.push_back({bandwidths[k], powers[k], r});
    a.total_bandwidth += bandwidths[k];
    a.total_power += powers[k];
    a.sum_rate += r;
  }
  a.energy_efficiency =
      energy_efficiency(a.sum_rate, a.total_power, s.power_model);
  return a;
}

std::vector<double> fixed_bandwidths(const Scenario& s) {
  std::vector<double> w;
  w.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!s.users[k].fixed_bandwidth) {
      throw DomainError("user " + std::to_string(k) +
                        " has no fixed bandwidth");
    }
    w.push_back(*s.users[k].fixed_bandwidth);
  }
  return w;
}

}  // namespace eealloc
