#include "eealloc/ee_fixed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "eealloc/errors.hpp"
#include "eealloc/waterfill.hpp"

namespace eealloc {

const char* to_string(BoundaryCase c) noexcept {
  switch (c) {
    case BoundaryCase::at_min_power:
      return "at_P0";
    case BoundaryCase::interior:
      return "interior";
    case BoundaryCase::clamped_at_budget:
      return "clamped_at_PM";
  }
  return "unknown";
}

CriticalLevelTable critical_levels(const Scenario& s) {
  const auto w = fixed_bandwidths(s);
  const std::size_t n = s.size();
  const auto& pm = s.power_model;

  CriticalLevelTable t;
  std::vector<double> alpha(n);
  std::vector<double> pmin(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& u = s.users[k];
    pmin[k] = min_power(w[k], u.gain, u.min_rate);
    alpha[k] = 1.0 / u.gain + pmin[k] / w[k];
    t.min_total_power += pmin[k];
    t.min_total_rate += u.min_rate;
  }

  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), std::size_t{0});
  std::stable_sort(t.order.begin(), t.order.end(),
                   [&](auto a, auto b) { return alpha[a] < alpha[b]; });
  for (auto k : t.order) {
    t.sorted_alpha.push_back(alpha[k]);
    t.sorted_gain.push_back(s.users[k].gain);
    t.sorted_bandwidth.push_back(w[k]);
    t.sorted_min_power.push_back(pmin[k]);
  }

  double width = 0.0;     // sum_{i<J} w'_i
  double weighted = 0.0;  // sum_{i<J} w'_i alpha'_i
  double log_gain = 0.0;  // sum_{i<J} w'_i ln(alpha'_J / alpha'_i), built
                          // incrementally as sum w'_i ln alpha'_i
  for (std::size_t j = 0; j < n; ++j) {
    const double a = t.sorted_alpha[j];
    const double level = t.min_total_power + a * width - weighted;
    const double rate_at_level =
        t.min_total_rate + (width * std::log(a) - log_gain) / std::numbers::ln2;
    const double ee = energy_efficiency(rate_at_level, level, pm);
    t.levels.push_back(level);
    t.ee_at_levels.push_back(ee);
    t.lambda_at_levels.push_back(1.0 / (std::numbers::ln2 * a) -
                                 ee / pm.amp_efficiency);
    t.beyond_budget.push_back(level > s.power_budget);

    width += t.sorted_bandwidth[j];
    weighted += t.sorted_bandwidth[j] * a;
    log_gain += t.sorted_bandwidth[j] * std::log(a);
  }
  return t;
}

double theta(double total_power, std::size_t active,
             const CriticalLevelTable& table, const PowerModel& pm) {
  if (active == 0 || active > table.sorted_alpha.size()) {
    throw DomainError("theta: active user count out of range");
  }
  double width = 0.0;
  double weighted = 0.0;
  double log_alpha = 0.0;
  for (std::size_t i = 0; i < active; ++i) {
    width += table.sorted_bandwidth[i];
    weighted += table.sorted_bandwidth[i] * table.sorted_alpha[i];
    log_alpha += table.sorted_bandwidth[i] * std::log(table.sorted_alpha[i]);
  }
  const double b = table.min_total_power - weighted;
  if (!(total_power > b)) {
    throw DomainError("theta: P must exceed B");
  }
  // A ln 2 = R0 ln 2 - sum w' ln alpha' - W~ ln W~
  const double a_ln2 = table.min_total_rate * std::numbers::ln2 - log_alpha -
                       width * std::log(width);
  const double excess = total_power - b;
  return (total_power + pm.amp_efficiency * pm.circuit_power) * width /
             excess -
         a_ln2 - width * std::log(excess);
}

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxIterations = 200;

// Root of theta in (lo, hi] given theta(lo+) > 0 and theta(hi) <= 0.
double bisect_theta(double lo, double hi, std::size_t active,
                    const CriticalLevelTable& t, const PowerModel& pm) {
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (hi - lo <= kRelTol * std::max(std::abs(hi), 1e-300)) {
      break;
    }
    const double mid = 0.5 * (lo + hi);
    if (theta(mid, active, t, pm) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FixedOptResult optimize_fixed(const Scenario& s) {
  const auto t = critical_levels(s);
  const auto& pm = s.power_model;
  const double p0 = t.min_total_power;
  const double pmax = s.power_budget;
  if (p0 > pmax) {
    throw InfeasibleError("minimum power " + std::to_string(p0) +
                              " exceeds the power budget " +
                              std::to_string(pmax) + " (deficit " +
                              std::to_string(p0 - pmax) + ")",
                          p0 - pmax);
  }

  FixedOptResult r;
  const std::size_t n = t.levels.size();
  std::size_t last = 0;  // last level within budget
  bool found = false;
  for (std::size_t j = 0; j < n && !t.beyond_budget[j]; ++j) {
    last = j;
    if (t.lambda_at_levels[j] > 0.0) {
      continue;
    }
    found = true;
    if (j == 0) {
      r.p_opt = p0;
      r.boundary_case = BoundaryCase::at_min_power;
    } else {
      const double lo = t.levels[j - 1];
      const double hi = t.levels[j];
      r.bracket = std::make_pair(lo, hi);
      r.p_opt = hi > lo ? bisect_theta(lo, hi, j, t, pm) : hi;
      r.boundary_case = BoundaryCase::interior;
    }
    break;
  }

  if (!found) {
    // Indicator still positive at the last level inside the budget; the
    // maximiser is in (P_last, P_M] or beyond P_M.
    const double lo = t.levels[last];
    r.bracket = std::make_pair(lo, pmax);
    if (pmax <= lo || theta(pmax, last + 1, t, pm) > 0.0) {
      r.p_opt = pmax;
      r.boundary_case = BoundaryCase::clamped_at_budget;
    } else {
      r.p_opt = bisect_theta(lo, pmax, last + 1, t, pm);
      r.boundary_case = BoundaryCase::interior;
    }
  }

  r.allocation = allocate(s, r.p_opt).allocation;
  r.max_ee = r.allocation.energy_efficiency;
  return r;
}

}  // namespace eealloc
