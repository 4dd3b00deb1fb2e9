#include "eealloc/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "eealloc/errors.hpp"

namespace eealloc {

namespace {

constexpr double kMaxExponent = 700.0 * std::numbers::log2e;

}  // namespace

double min_power(double bandwidth, double gain, double min_rate) {
  if (!(bandwidth > 0.0) || !(gain > 0.0) || !(min_rate >= 0.0)) {
    throw DomainError("min_power: requires w > 0, g > 0, r_min >= 0");
  }
  const double exponent = min_rate / bandwidth;
  if (exponent > kMaxExponent) {
    throw InfeasibleError("rate floor " + std::to_string(min_rate) +
                              " on bandwidth " + std::to_string(bandwidth) +
                              " overflows the power range",
                          std::numeric_limits<double>::infinity());
  }
  return bandwidth / gain * std::expm1(exponent * std::numbers::ln2);
}

WaterfillResult allocate(const Scenario& s, double total_power) {
  const auto w = fixed_bandwidths(s);
  const std::size_t n = s.size();
  if (n == 0) {
    throw DomainError("allocate: empty scenario");
  }

  WaterfillDiagnostics d;
  d.min_powers.resize(n);
  d.base_levels.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& u = s.users[k];
    d.min_powers[k] = min_power(w[k], u.gain, u.min_rate);
    d.base_levels[k] = 1.0 / u.gain + d.min_powers[k] / w[k];
    d.min_total_power += d.min_powers[k];
    d.min_total_rate += u.min_rate;
  }

  const double p0 = d.min_total_power;
  if (total_power < p0 - 1e-10 * std::max(1.0, p0)) {
    throw InfeasibleError("total power " + std::to_string(total_power) +
                              " is below the minimum " + std::to_string(p0),
                          p0 - total_power);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return d.base_levels[a] < d.base_levels[b];
  });

  // Largest J whose critical level P0 + sum_{i<J} (alpha'_J - alpha'_i) w'_i
  // does not exceed P. Ties share a level, so they always enter together.
  std::size_t active = 1;
  double width = w[order[0]];
  double weighted = w[order[0]] * d.base_levels[order[0]];
  for (std::size_t j = 1; j < n; ++j) {
    const std::size_t k = order[j];
    const double level = p0 + d.base_levels[k] * width - weighted;
    if (level > total_power) {
      break;
    }
    active = j + 1;
    width += w[k];
    weighted += w[k] * d.base_levels[k];
  }
  d.water_level = (total_power - p0 + weighted) / width;

  std::vector<double> powers(d.min_powers);
  for (std::size_t j = 0; j < active; ++j) {
    const std::size_t k = order[j];
    powers[k] += w[k] * std::max(0.0, d.water_level - d.base_levels[k]);
  }
  for (std::size_t j = active; j < n; ++j) {
    d.binding_set.push_back(order[j]);
  }
  std::sort(d.binding_set.begin(), d.binding_set.end());

  return {make_allocation(w, powers, s), std::move(d)};
}

double kkt_residual(const Scenario& s, const Allocation& alloc,
                    const WaterfillDiagnostics& diag) {
  const auto w = fixed_bandwidths(s);
  const std::size_t n = s.size();
  const double mu = 1.0 / diag.water_level;

  std::vector<bool> binding(n, false);
  for (auto i : diag.binding_set) {
    binding.at(i) = true;
  }

  double implied_total = diag.min_total_power;
  double power_sum = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = alloc.per_user.at(k).power;
    const double g = s.users[k].gain;
    const double marginal = w[k] * g / (w[k] + p * g);
    power_sum += p;
    if (binding[k]) {
      worst = std::max(worst, std::max(0.0, marginal - mu) / mu);
    } else {
      implied_total += w[k] * (diag.water_level - diag.base_levels[k]);
      worst = std::max(worst, std::abs(mu - marginal) / mu);
    }
    worst = std::max(worst, std::max(0.0, diag.min_powers[k] - p) /
                                std::max(1.0, diag.min_powers[k]));
  }
  worst = std::max(worst, std::abs(power_sum - implied_total) /
                              std::max(1.0, implied_total));
  return worst;
}

double d_sum_rate_dP(const Scenario& s, const WaterfillDiagnostics& diag,
                     double total_power) {
  const auto w = fixed_bandwidths(s);
  std::vector<bool> binding(s.size(), false);
  for (auto i : diag.binding_set) {
    binding.at(i) = true;
  }
  double width = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!binding[k]) {
      width += w[k];
      weighted += w[k] * diag.base_levels[k];
    }
  }
  if (width == 0.0) {
    // Everyone at the floor: the first user to leave it sets the slope.
    const double lowest =
        *std::min_element(diag.base_levels.begin(), diag.base_levels.end());
    return 1.0 / (std::numbers::ln2 * lowest);
  }
  return width /
         ((total_power - diag.min_total_power + weighted) * std::numbers::ln2);
}

}  // namespace eealloc
