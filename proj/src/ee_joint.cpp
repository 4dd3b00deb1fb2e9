#include "eealloc/ee_joint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eealloc/errors.hpp"

namespace eealloc {

namespace {

struct PsiState {
  double psi = 0.0;
  std::size_t lead = 0;
  double spare_bandwidth = 0.0;  // W - sum follower w
  double spare_power = 0.0;      // P - sum follower p
  double d_spare_bandwidth = 0.0;
  double d_spare_power = 0.0;
};

PsiState psi_state(const Scenario& s, double total_bandwidth,
                   double total_power) {
  const auto win = psi_window(s, total_bandwidth, total_power);
  PsiState st;
  st.psi = solve_psi(s, total_bandwidth, total_power, win);
  st.lead = leader_index(s);
  st.spare_bandwidth = total_bandwidth;
  st.spare_power = total_power;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k == st.lead) {
      continue;
    }
    const auto& u = s.users[k];
    const auto f = follower_alloc(st.psi, u.gain, u.min_rate);
    const auto d = follower_sensitivity(st.psi, u.gain, u.min_rate);
    st.spare_bandwidth -= f.bandwidth;
    st.spare_power -= f.power;
    st.d_spare_bandwidth -= d.d_bandwidth;
    st.d_spare_power -= d.d_power;
  }
  return st;
}

double dpsi_from_state(const Scenario& s, const PsiState& st) {
  const double g1 = s.users[st.lead].gain;
  const double d = st.spare_bandwidth;
  const double n = std::max(0.0, st.spare_power);
  // Psi = Omega1(psi) - ln(1 + g1 N / D)
  const double denom = d + g1 * n;
  const double dpsi_dp_partial = -g1 / denom;
  const double dpsi_dpsi =
      omega_slope(st.psi, g1) -
      g1 * (st.d_spare_power * d - n * st.d_spare_bandwidth) / (d * denom);
  if (!(std::abs(dpsi_dpsi) > 1e-14) || !std::isfinite(dpsi_dpsi)) {
    throw DomainError("dpsi_dP: degenerate Jacobian dPsi/dpsi");
  }
  return -dpsi_dp_partial / dpsi_dpsi;
}

double golden_section_max(const Scenario& s, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto ee = [&](double p) {
    return joint_allocate(s, s.bandwidth_budget, p)
        .allocation.energy_efficiency;
  };
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = ee(c);
  double fd = ee(d);
  for (int iter = 0; iter < 200 && hi - lo > 1e-10 * std::max(1.0, hi);
       ++iter) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = ee(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = ee(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double dpsi_dP(const Scenario& s, double total_bandwidth, double total_power) {
  return dpsi_from_state(s, psi_state(s, total_bandwidth, total_power));
}

double lambda_P(const Scenario& s, double total_bandwidth, double total_power) {
  const auto st = psi_state(s, total_bandwidth, total_power);
  const auto& pm = s.power_model;
  const double g1 = s.users[st.lead].gain;
  const double omega1 = omega(st.psi, g1);

  double f1_followers = 0.0;  // sum r_i Omega_i^-2 dOmega_i/dpsi
  double inv_omega_sum = 0.0;  // sum r_i / Omega_i
  double floors = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& u = s.users[k];
    if (k == st.lead || u.min_rate == 0.0) {
      continue;
    }
    const double om = omega(st.psi, u.gain);
    f1_followers += u.min_rate * omega_slope(st.psi, u.gain) / (om * om);
    inv_omega_sum += u.min_rate / om;
    floors += u.min_rate;
  }
  const double leader_share = total_bandwidth / std::numbers::ln2 -
                              inv_omega_sum;  // w1 / ln 2
  const double f2 = floors + leader_share * omega1;

  double rate_slope = 0.0;  // dR/dP = F1 dpsi/dP
  if (st.psi > 0.0 && st.spare_bandwidth > 1e-12 * total_bandwidth) {
    const double f1 =
        omega1 * f1_followers + leader_share * omega_slope(st.psi, g1);
    rate_slope = f1 * dpsi_from_state(s, st);
  } else {
    // Degenerate at P0 with zero floors (psi = 0, or the leader holds no
    // bandwidth yet): Omega' is unbounded there, so use the leader's marginal
    // rate g1 e^{-Omega1} / ln 2, which equals F1 dpsi/dP wherever both exist.
    rate_slope = g1 * std::exp(-omega1) / std::numbers::ln2;
  }
  return (total_power + pm.amp_efficiency * pm.circuit_power) * rate_slope -
         f2;
}

JointOptResult optimize_joint(const Scenario& s, std::size_t trace_samples) {
  const double wm = s.bandwidth_budget;
  const double pmax = s.power_budget;
  const double p0 = min_joint_power(s, wm);
  if (!(p0 <= pmax)) {
    throw InfeasibleError("minimum rate requirements cannot be met: minimum "
                          "power " +
                              std::to_string(p0) + " exceeds the budget " +
                              std::to_string(pmax) + " (deficit " +
                              std::to_string(p0 - pmax) + ")",
                          p0 - pmax);
  }

  JointOptResult r;
  const double lambda_lo = lambda_P(s, wm, p0);
  const double lambda_hi = lambda_P(s, wm, pmax);
  if (pmax <= p0) {
    r.p_opt = pmax;
    r.boundary_case = BoundaryCase::clamped_at_budget;
  } else if (lambda_lo <= 0.0 && lambda_hi <= 0.0) {
    r.p_opt = p0;
    r.boundary_case = BoundaryCase::at_min_power;
  } else if (lambda_lo > 0.0 && lambda_hi > 0.0) {
    r.p_opt = pmax;
    r.boundary_case = BoundaryCase::clamped_at_budget;
  } else if (lambda_lo > 0.0) {
    double lo = p0;
    double hi = pmax;
    for (int iter = 0; iter < 200 && hi - lo > 1e-10 * std::max(1e-300, hi);
         ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (lambda_P(s, wm, mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    r.p_opt = 0.5 * (lo + hi);
    r.boundary_case = BoundaryCase::interior;
  } else {
    // Indicator rises from nonpositive to positive: not the monotone shape
    // the bisection relies on.
    r.used_fallback = true;
    r.p_opt = golden_section_max(s, p0, pmax);
    const double tol = 1e-8 * std::max(1.0, pmax);
    r.boundary_case = r.p_opt - p0 <= tol     ? BoundaryCase::at_min_power
                      : pmax - r.p_opt <= tol ? BoundaryCase::clamped_at_budget
                                              : BoundaryCase::interior;
  }

  r.solution = joint_allocate(s, wm, r.p_opt);
  r.max_ee = r.solution.allocation.energy_efficiency;

  if (trace_samples > 0) {
    SweepCurve trace;
    trace.mode = Mode::joint;
    double best = -1.0;
    for (std::size_t i = 0; i < trace_samples; ++i) {
      const double p =
          trace_samples == 1
              ? p0
              : p0 + (pmax - p0) * static_cast<double>(i) /
                         static_cast<double>(trace_samples - 1);
      const auto sol = joint_allocate(s, wm, p);
      trace.samples.push_back({p, sol.allocation.sum_rate,
                               sol.allocation.energy_efficiency,
                               lambda_P(s, wm, p)});
      if (sol.allocation.energy_efficiency > best) {
        best = sol.allocation.energy_efficiency;
        trace.argmax_power = p;
      }
    }
    r.lambda_trace = std::move(trace);
  }
  return r;
}

}  // namespace eealloc
