#include "eealloc/oracle.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "eealloc/ee_joint.hpp"
#include "eealloc/errors.hpp"
#include "eealloc/joint.hpp"
#include "eealloc/waterfill.hpp"

namespace eealloc {

PowerOracleResult grid_power_oracle(const Scenario& s, double total_power,
                                    std::size_t steps) {
  const std::size_t n = s.size();
  if (n == 0 || n > 4) {
    throw OracleRefusal("grid_power_oracle: supports 1 to 4 users, got " +
                        std::to_string(n));
  }
  if (steps < 10) {
    throw DomainError("grid_power_oracle: steps must be at least 10");
  }
  const auto w = fixed_bandwidths(s);
  std::vector<double> floor(n);
  double floor_total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    floor[k] = w[k] / s.users[k].gain *
               (std::exp2(s.users[k].min_rate / w[k]) - 1.0);
    floor_total += floor[k];
  }
  const double excess = total_power - floor_total;
  if (excess < -1e-10 * std::max(1.0, floor_total)) {
    throw InfeasibleError("grid_power_oracle: P below the floor powers",
                          -excess);
  }
  const double quantum = std::max(0.0, excess) / static_cast<double>(steps);

  PowerOracleResult best;
  best.best_rate = -1.0;
  std::vector<std::size_t> share(n, 0);
  std::vector<double> p(n);

  std::function<void(std::size_t, std::size_t)> visit =
      [&](std::size_t k, std::size_t remaining) {
        if (k + 1 == n) {
          share[k] = remaining;
          double r = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            p[i] = floor[i] + quantum * static_cast<double>(share[i]);
            r += rate(w[i], p[i], s.users[i].gain);
          }
          if (r > best.best_rate) {
            best.best_rate = r;
            best.best_powers = p;
          }
          return;
        }
        for (std::size_t q = 0; q <= remaining; ++q) {
          share[k] = q;
          visit(k + 1, remaining - q);
        }
      };
  visit(0, steps);
  return best;
}

std::optional<JointOracleResult> grid_joint_oracle(const Scenario& s,
                                                   double total_bandwidth,
                                                   double total_power,
                                                   std::size_t steps) {
  if (s.size() != 2) {
    throw OracleRefusal("grid_joint_oracle: supports exactly 2 users, got " +
                        std::to_string(s.size()));
  }
  if (steps == 0) {
    throw DomainError("grid_joint_oracle: steps must be positive");
  }
  const auto& u1 = s.users[0];
  const auto& u2 = s.users[1];
  const double dn = static_cast<double>(steps);

  std::optional<JointOracleResult> best;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double w2 = total_bandwidth * static_cast<double>(i) / dn;
    const double w1 = total_bandwidth * static_cast<double>(steps - i) / dn;
    for (std::size_t j = 0; j <= steps; ++j) {
      const double p2 = total_power * static_cast<double>(j) / dn;
      const double p1 = total_power * static_cast<double>(steps - j) / dn;
      if ((w1 == 0.0 && p1 > 0.0) || (w2 == 0.0 && p2 > 0.0)) {
        continue;
      }
      const double r1 = rate(w1, p1, u1.gain);
      const double r2 = rate(w2, p2, u2.gain);
      if (r1 < u1.min_rate || r2 < u2.min_rate) {
        continue;
      }
      if (!best || r1 + r2 > best->best_rate) {
        best = JointOracleResult{{w1, w2}, {p1, p2}, r1 + r2};
      }
    }
  }
  return best;
}

SweepCurve sweep(const Scenario& s, Mode mode, std::size_t samples) {
  if (samples == 0) {
    throw DomainError("sweep: at least one sample is required");
  }
  const double wm = s.bandwidth_budget;
  const double pmax = s.power_budget;
  const auto& pm = s.power_model;

  double p0 = 0.0;
  if (mode == Mode::fixed) {
    const auto w = fixed_bandwidths(s);
    for (std::size_t k = 0; k < s.size(); ++k) {
      p0 += min_power(w[k], s.users[k].gain, s.users[k].min_rate);
    }
  } else {
    p0 = min_joint_power(s, wm);
  }
  if (!(p0 <= pmax)) {
    throw InfeasibleError("sweep: minimum power exceeds the power budget",
                          p0 - pmax);
  }

  SweepCurve curve;
  curve.mode = mode;
  curve.samples.reserve(samples);
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double p = samples == 1
                         ? p0
                         : p0 + (pmax - p0) * static_cast<double>(i) /
                                    static_cast<double>(samples - 1);
    SweepSample sample;
    sample.power = p;
    if (mode == Mode::fixed) {
      const auto wf = allocate(s, p);
      sample.sum_rate = wf.allocation.sum_rate;
      sample.ee = wf.allocation.energy_efficiency;
      sample.indicator = d_sum_rate_dP(s, wf.diagnostics, p) -
                         sample.ee / pm.amp_efficiency;
    } else {
      const auto sol = joint_allocate(s, wm, p);
      sample.sum_rate = sol.allocation.sum_rate;
      sample.ee = sol.allocation.energy_efficiency;
      sample.indicator = lambda_P(s, wm, p);
    }
    if (i == 0 || sample.ee > best) {
      best = sample.ee;
      curve.argmax_power = p;
    }
    curve.samples.push_back(sample);
  }
  return curve;
}

double ScenarioRng::unit() {
  const std::uint64_t x = engine_();
  return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

Scenario random_scenario(std::uint64_t seed, std::size_t users, Mode mode) {
  if (users == 0) {
    throw DomainError("random_scenario: at least one user is required");
  }
  ScenarioRng rng(seed);
  Scenario s;
  s.power_model = {0.8, 10.0};
  std::vector<double> weights;
  for (std::size_t k = 0; k < users; ++k) {
    UserChannel u;
    for (;;) {
      u.gain = rng.up_to(10.0);
      bool distinct = true;
      for (const auto& prev : s.users) {
        distinct = distinct && prev.gain != u.gain;
      }
      if (mode == Mode::fixed || distinct) {
        break;
      }
    }
    u.min_rate = rng.up_to(10.0);
    if (mode == Mode::fixed) {
      weights.push_back(rng.unit());
    }
    s.users.push_back(u);
  }
  const double total_bandwidth = rng.up_to(15.0);
  s.power_budget = rng.up_to(100.0);
  s.bandwidth_budget = total_bandwidth;
  if (mode == Mode::fixed) {
    double weight_sum = 0.0;
    for (double v : weights) {
      weight_sum += v;
    }
    for (std::size_t k = 0; k < users; ++k) {
      s.users[k].fixed_bandwidth = total_bandwidth * weights[k] / weight_sum;
    }
  }
  return s;
}

}  // namespace eealloc
