#include "eealloc/joint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eealloc/errors.hpp"
#include "eealloc/special_functions.hpp"

namespace eealloc {

namespace {

constexpr double kPsiFloor = 1e-30;
constexpr double kPsiCeiling = 1e300;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisections = 400;
constexpr double kPowerSlack = 1e-10;

// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi), run to
// full double precision. Uses geometric midpoints while the bracket spans
// more than a factor of four.
template <typename F>
double bisect_increasing(F&& f, double lo, double hi) {
  for (int iter = 0; iter < kMaxBisections; ++iter) {
    const double mid =
        (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo) * std::sqrt(hi)
                                    : lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) {
      break;
    }
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Smallest psi with f(psi) >= 0 for increasing f, searching upward from
// kPsiFloor with a bracket grown by x4. Returns +inf when f stays negative.
template <typename F>
double increasing_root(F&& f) {
  if (f(kPsiFloor) >= 0.0) {
    return kPsiFloor;
  }
  double lo = kPsiFloor;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 4.0;
    if (hi > kPsiCeiling) {
      return kInf;
    }
  }
  return bisect_increasing(f, lo, hi);
}

bool all_floors_zero(const Scenario& s) {
  return std::all_of(s.users.begin(), s.users.end(),
                     [](const UserChannel& u) { return u.min_rate == 0.0; });
}

struct Totals {
  double bandwidth = 0.0;
  double power = 0.0;
};

// Sum of floor-meeting allocations over all users except `skip`.
Totals floor_totals(const Scenario& s, double psi, std::size_t skip) {
  Totals t;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k == skip) {
      continue;
    }
    const auto f = follower_alloc(psi, s.users[k].gain, s.users[k].min_rate);
    t.bandwidth += f.bandwidth;
    t.power += f.power;
  }
  return t;
}

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

double psi_min_for(const Scenario& s, double total_bandwidth) {
  return increasing_root([&](double psi) {
    return total_bandwidth - floor_totals(s, psi, kNoSkip).bandwidth;
  });
}

double psi_max_for(const Scenario& s, double total_power) {
  if (floor_totals(s, kPsiFloor, kNoSkip).power >= total_power) {
    return 0.0;
  }
  return increasing_root([&](double psi) {
    return floor_totals(s, psi, kNoSkip).power - total_power;
  });
}

}  // namespace

double omega(double psi, double gain) {
  if (!(psi >= 0.0) || !(gain > 0.0)) {
    throw DomainError("omega: requires psi >= 0 and g > 0");
  }
  return lambert_w0((psi * gain - 1.0) / std::numbers::e) + 1.0;
}

double omega_slope(double psi, double gain) {
  const double om = omega(psi, gain);
  return gain * std::exp(-om) / om;
}

FollowerAllocation follower_alloc(double psi, double gain, double min_rate) {
  if (!(min_rate >= 0.0)) {
    throw DomainError("follower_alloc: negative rate floor");
  }
  if (min_rate == 0.0) {
    return {};
  }
  const double w0 = lambert_w0((psi * gain - 1.0) / std::numbers::e);
  const double om = w0 + 1.0;
  const double scale = min_rate * std::numbers::ln2;
  FollowerAllocation f;
  f.bandwidth = scale / om;
  if (std::abs(w0) >= 1e-3 && om > 1e-3) {
    f.power = scale / gain * (psi * gain - 1.0 - w0) / (w0 * om);
  } else {
    // (e^Omega - 1)/Omega; the rational form loses digits near W0 = 0.
    f.power = scale / gain * (om > 0.0 ? std::expm1(om) / om : 1.0);
  }
  return f;
}

FollowerSensitivity follower_sensitivity(double psi, double gain,
                                         double min_rate) {
  if (min_rate == 0.0) {
    return {};
  }
  const double om = omega(psi, gain);
  const double slope = gain * std::exp(-om) / om;
  FollowerSensitivity d;
  d.d_bandwidth = -min_rate * std::numbers::ln2 * slope / (om * om);
  // dp/dOmega = r ln2 (e^Omega (Omega - 1) + 1) / (g Omega^2) = r ln2 psi /
  // Omega^2, hence dp/dpsi = -psi dw/dpsi.
  d.d_power = -psi * d.d_bandwidth;
  return d;
}

double psi_from_leader(double leader_bandwidth, double leader_power,
                       double leader_gain) {
  if (!(leader_bandwidth > 0.0)) {
    throw DomainError("psi_from_leader: requires w1 > 0");
  }
  const double density = leader_power / leader_bandwidth;
  return (1.0 / leader_gain + density) * std::log1p(density * leader_gain) -
         density;
}

std::size_t leader_index(const Scenario& s) {
  if (s.users.empty()) {
    throw DomainError("leader_index: empty scenario");
  }
  return static_cast<std::size_t>(
      std::max_element(s.users.begin(), s.users.end(),
                       [](const UserChannel& a, const UserChannel& b) {
                         return a.gain < b.gain;
                       }) -
      s.users.begin());
}

PsiWindow psi_window(const Scenario& s, double total_bandwidth,
                     double total_power) {
  if (!(total_bandwidth > 0.0) || !(total_power >= 0.0)) {
    throw DomainError("psi_window: requires W > 0 and P >= 0");
  }
  PsiWindow win;
  if (all_floors_zero(s)) {
    const auto lead = leader_index(s);
    win.psi_min = 0.0;
    win.psi_max =
        psi_from_leader(total_bandwidth, total_power, s.users[lead].gain);
    win.feasible = true;
    return win;
  }
  win.psi_min = psi_min_for(s, total_bandwidth);
  win.psi_max = psi_max_for(s, total_power);
  if (std::isfinite(win.psi_min) && win.psi_min > win.psi_max) {
    // P at (or within rounding of) the minimum power collapses the window
    const double p0 = floor_totals(s, win.psi_min, kNoSkip).power;
    if (total_power >= p0 - kPowerSlack * std::max(1.0, p0)) {
      win.psi_max = win.psi_min;
    }
  }
  win.feasible = std::isfinite(win.psi_min) && win.psi_min <= win.psi_max;
  return win;
}

double psi_residual(const Scenario& s, double total_bandwidth,
                    double total_power, double psi) {
  const auto lead = leader_index(s);
  const double g1 = s.users[lead].gain;
  const auto t = floor_totals(s, psi, lead);
  const double spare_bandwidth = total_bandwidth - t.bandwidth;
  const double spare_power = std::max(0.0, total_power - t.power);
  if (!(spare_bandwidth > 0.0)) {
    return -kInf;
  }
  return omega(psi, g1) - std::log1p(spare_power * g1 / spare_bandwidth);
}

double solve_psi(const Scenario& s, double total_bandwidth, double total_power,
                 const PsiWindow& window) {
  if (!window.feasible) {
    throw InfeasibleError("solve_psi: empty psi window", kInf);
  }
  if (window.psi_max <= window.psi_min) {
    return window.psi_min;
  }
  return bisect_increasing(
      [&](double psi) {
        return psi_residual(s, total_bandwidth, total_power, psi);
      },
      window.psi_min, window.psi_max);
}

double min_joint_power(const Scenario& s, double total_bandwidth) {
  if (all_floors_zero(s)) {
    return 0.0;
  }
  const double psi = psi_min_for(s, total_bandwidth);
  if (!std::isfinite(psi)) {
    return kInf;
  }
  return floor_totals(s, psi, kNoSkip).power;
}

JointSolution joint_allocate(const Scenario& s, double total_bandwidth,
                             double total_power) {
  const auto win = psi_window(s, total_bandwidth, total_power);
  if (!win.feasible) {
    const double p0 = min_joint_power(s, total_bandwidth);
    throw InfeasibleError(
        "power budget " + std::to_string(total_power) +
            " is below the minimum " + std::to_string(p0) +
            " needed to meet every rate floor on bandwidth " +
            std::to_string(total_bandwidth),
        p0 - total_power);
  }

  JointSolution sol;
  sol.leader_index = leader_index(s);
  sol.psi = solve_psi(s, total_bandwidth, total_power, win);

  const std::size_t n = s.size();
  std::vector<double> w(n, 0.0);
  std::vector<double> p(n, 0.0);
  double follower_rates = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sol.omegas.push_back(omega(sol.psi, s.users[k].gain));
    if (k == sol.leader_index) {
      continue;
    }
    const auto f = follower_alloc(sol.psi, s.users[k].gain, s.users[k].min_rate);
    w[k] = f.bandwidth;
    p[k] = f.power;
    follower_rates += s.users[k].min_rate;
  }

  double w_rest = total_bandwidth;
  double p_rest = total_power;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != sol.leader_index) {
      w_rest -= w[k];
      p_rest -= p[k];
    }
  }
  w[sol.leader_index] = std::max(0.0, w_rest);
  p[sol.leader_index] = w_rest > 0.0 ? std::max(0.0, p_rest) : 0.0;

  sol.allocation = make_allocation(w, p, s);
  sol.max_sum_rate = follower_rates + w[sol.leader_index] *
                                          sol.omegas[sol.leader_index] /
                                          std::numbers::ln2;
  return sol;
}

}  // namespace eealloc
