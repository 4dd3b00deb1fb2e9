#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "eealloc/errors.hpp"
#include "eealloc/joint.hpp"
#include "eealloc/oracle.hpp"
#include "eealloc/special_functions.hpp"
#include "support.hpp"

using namespace eealloc;
using doctest::Approx;

namespace {

constexpr double kLn2 = std::numbers::ln2;

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

TEST_CASE("omega and its slope") {
  CHECK(omega(1.0 / 1.0, 1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(omega((1.0 + std::numbers::e), 1.0) ==
        Approx(0.56714329040978387 + 1.0).epsilon(1e-15));
  double psi = 0.7, g = 3.0, h = 1e-6;
  double fd = (omega(psi + h, g) - omega(psi - h, g)) / (2 * h);
  CHECK(omega_slope(psi, g) == Approx(fd).epsilon(1e-8));
}

TEST_CASE("follower_alloc: reference point psi g = 1 + e") {
  auto f = follower_alloc(1.0 + std::numbers::e, 1.0, 1.0);
  // 50-digit references from the closed forms at W0(1)
  CHECK(f.bandwidth == Approx(0.44229981061827344).epsilon(1e-14));
  CHECK(f.power == Approx(1.6776151355072865).epsilon(1e-14));
  CHECK(rate(f.bandwidth, f.power, 1.0) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("follower_alloc: small psi limit and zero floor") {
  const double limit = 0.34657359027997265;
  double prev_gap = 1.0;
  for (double psi = 1e-4; psi > 1e-17; psi *= 0.01) {
    double gap = follower_alloc(psi, 2.0, 1.0).power - limit;
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(follower_alloc(1e-20, 2.0, 1.0).power == Approx(limit).epsilon(1e-14));
  auto z = follower_alloc(3.0, 2.0, 0.0);
  CHECK(z.bandwidth == 0.0);
  CHECK(z.power == 0.0);
}

TEST_CASE("follower_alloc: exponential form agrees with the rational form") {
  for (double g : {0.3, 1.0, 7.5}) {
    for (double psi = 1e-6; psi < 200.0; psi *= 1.37) {
      auto f = follower_alloc(psi, g, 2.0);
      double om = omega(psi, g);
      double p_exp = 2.0 * kLn2 / g * std::expm1(om) / om;
      CAPTURE(psi);
      CHECK(rel(f.power, p_exp) <= 1e-12);
      CHECK(rate(f.bandwidth, f.power, g) == Approx(2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("follower_alloc: bandwidth decreases and power increases in psi") {
  double pw = 1e300, pp = -1.0;
  for (double psi = 1e-4; psi < 100.0; psi *= 1.1) {
    auto f = follower_alloc(psi, 2.5, 1.5);
    CHECK(f.bandwidth < pw);
    CHECK(f.power > pp);
    pw = f.bandwidth;
    pp = f.power;
  }
  auto sens = follower_sensitivity(0.8, 2.5, 1.5);
  double h = 1e-6;
  auto a = follower_alloc(0.8 + h, 2.5, 1.5);
  auto b = follower_alloc(0.8 - h, 2.5, 1.5);
  CHECK(sens.d_bandwidth ==
        Approx((a.bandwidth - b.bandwidth) / (2 * h)).epsilon(1e-7));
  CHECK(sens.d_power == Approx((a.power - b.power) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("psi_from_leader: values and round trip") {
  CHECK(psi_from_leader(1.0, 0.0, 3.0) == 0.0);
  CHECK(psi_from_leader(1.0, 1.0, 1.0) ==
        Approx(0.38629436111989062).epsilon(1e-15));

  double psi0 = 0.5, g = 1.0, leader_rate = 1.0;
  double om = lambert_w0((psi0 * g - 1.0) / std::numbers::e) + 1.0;
  double w1 = leader_rate * kLn2 / om;
  double p1 = w1 * std::expm1(om) / g;
  CHECK(std::abs(psi_from_leader(w1, p1, g) - psi0) <= 1e-10);
}

TEST_CASE("psi_window: zero-floor single user convention") {
  auto s = testing::joint_scenario({2.0}, {0.0}, 1.0, 5.0);
  auto win = psi_window(s, 1.0, 5.0);
  CHECK(win.feasible);
  CHECK(win.psi_min == 0.0);
  CHECK(win.psi_max == Approx(psi_from_leader(1.0, 5.0, 2.0)));
}

TEST_CASE("psi_window: infeasible when power is too small") {
  auto s = testing::joint_scenario({2.0, 1.0}, {5.0, 5.0}, 1.0, 0.5);
  auto win = psi_window(s, 1.0, 0.5);
  CHECK(!win.feasible);
  CHECK(win.psi_min > win.psi_max);
}

TEST_CASE("psi_window: psi_min saturates bandwidth on random instances") {
  for (const auto& [seed, s] :
       testing::feasible_scenarios(20, 3, Mode::joint)) {
    double W = s.bandwidth_budget, P = s.power_budget;
    auto win = psi_window(s, W, P);
    REQUIRE(win.feasible);
    double wsum = 0.0, psum = 0.0;
    for (const auto& u : s.users) {
      auto f = follower_alloc(win.psi_min, u.gain, u.min_rate);
      wsum += f.bandwidth;
    }
    for (const auto& u : s.users)
      psum += follower_alloc(win.psi_max, u.gain, u.min_rate).power;
    CAPTURE(seed);
    CHECK(wsum == Approx(W).epsilon(1e-12));
    CHECK(psum == Approx(P).epsilon(1e-12));
  }
}

TEST_CASE("solve_psi: single user reduces to the leader formula") {
  auto s = testing::joint_scenario({2.0}, {1.0}, 1.5, 4.0);
  auto win = psi_window(s, 1.5, 4.0);
  double psi = solve_psi(s, 1.5, 4.0, win);
  CHECK(psi == Approx(psi_from_leader(1.5, 4.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("solve_psi: sign bracket and self-consistency") {
  for (const auto& [seed, s] :
       testing::feasible_scenarios(30, 3, Mode::joint)) {
    double W = s.bandwidth_budget, P = s.power_budget;
    auto win = psi_window(s, W, P);
    CAPTURE(seed);
    CHECK(psi_residual(s, W, P, win.psi_min) <= 0.0);
    CHECK(psi_residual(s, W, P, win.psi_max) >= 0.0);
    auto sol = joint_allocate(s, W, P);
    CHECK(sol.psi >= win.psi_min);
    CHECK(sol.psi <= win.psi_max);
    const auto& lead = sol.allocation.per_user[sol.leader_index];
    double from_leader =
        psi_from_leader(lead.bandwidth, lead.power, s.users[sol.leader_index].gain);
    CHECK(rel(from_leader, sol.psi) <= 1e-8);
  }
}

TEST_CASE("joint_allocate: single user takes everything") {
  auto s = testing::joint_scenario({2.0}, {1.0}, 1.5, 4.0);
  auto sol = joint_allocate(s, 1.5, 4.0);
  CHECK(sol.allocation.per_user[0].bandwidth == 1.5);
  CHECK(sol.allocation.per_user[0].power == 4.0);
}

TEST_CASE("joint_allocate: two-user reference and brute-force check") {
  auto s = testing::joint_scenario({4.0, 1.0}, {0.0, 1.0}, 2.0, 2.0);
  auto sol = joint_allocate(s, 2.0, 2.0);
  const auto& u2 = sol.allocation.per_user[1];
  CHECK(sol.leader_index == 0);
  CHECK(u2.rate == Approx(1.0).epsilon(1e-12));
  // 50-digit reference solution of the optimality system
  CHECK(u2.bandwidth == Approx(0.81286072089021675).epsilon(1e-10));
  CHECK(u2.power == Approx(1.0941370228371877).epsilon(1e-10));
  CHECK(sol.allocation.sum_rate == Approx(3.3965077356154471).epsilon(1e-12));
  CHECK(sol.max_sum_rate == Approx(sol.allocation.sum_rate).epsilon(1e-12));
  CHECK(sol.allocation.per_user[0].rate ==
        Approx(rate(2.0 - u2.bandwidth, 2.0 - u2.power, 4.0)).epsilon(1e-12));

  double best = 0.0;
  const int n = 2000;
  for (int i = 1; i <= n; ++i) {
    double w2 = 2.0 * i / n;
    double p2 = min_power(w2, 1.0, 1.0);
    for (int j = 0; j <= n; ++j) {
      double p = 2.0 * j / n;
      if (p < p2) continue;
      double w1 = 2.0 - w2, p1 = 2.0 - p;
      if (w1 <= 0.0 && p1 > 0.0) continue;
      best = std::max(best, rate(w1, p1, 4.0) + rate(w2, p, 1.0));
    }
  }
  CHECK(best <= sol.allocation.sum_rate + 1e-9);
  CHECK(best >= sol.allocation.sum_rate - 1e-2);
}

TEST_CASE("joint_allocate: budgets, floors and leader structure") {
  for (const auto& [seed, s] :
       testing::feasible_scenarios(30, 3, Mode::joint)) {
    double W = s.bandwidth_budget, P = s.power_budget;
    auto sol = joint_allocate(s, W, P);
    const auto& a = sol.allocation;
    CAPTURE(seed);
    CHECK(std::abs(a.total_bandwidth - W) <= 1e-10 * W);
    CHECK(std::abs(a.total_power - P) <= 1e-10 * P);
    CHECK(sol.leader_index == leader_index(s));
    for (std::size_t k = 0; k < s.size(); ++k) {
      double floor = s.users[k].min_rate;
      if (k == sol.leader_index) {
        CHECK(a.per_user[k].rate >= floor - 1e-9);
        CHECK(s.users[k].gain >= s.users[(k + 1) % s.size()].gain);
      } else {
        CHECK(std::abs(a.per_user[k].rate - floor) <=
              1e-9 * std::max(1.0, floor));
      }
    }
  }
}

TEST_CASE("joint_allocate: infeasible totals name the deficit") {
  auto s = testing::joint_scenario({2.0, 1.0}, {5.0, 5.0}, 1.0, 0.5);
  try {
    joint_allocate(s, 1.0, 0.5);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.deficit() ==
          Approx(min_joint_power(s, 1.0) - 0.5).epsilon(1e-9));
  }
}

TEST_CASE("joint_allocate: dominates the grid oracle on two users") {
  int checked = 0;
  for (const auto& [seed, s] :
       testing::feasible_scenarios(50, 2, Mode::joint)) {
    double W = s.bandwidth_budget, P = s.power_budget;
    auto sol = joint_allocate(s, W, P);
    auto o = grid_joint_oracle(s, W, P, 200);
    if (!o) continue;
    ++checked;
    CAPTURE(seed);
    CHECK(o->best_rate <= sol.allocation.sum_rate + 1e-3 * sol.allocation.sum_rate);
    CHECK(o->best_rate <= sol.allocation.sum_rate + 1e-6);
  }
  CHECK(checked >= 25);
}

TEST_CASE("joint_allocate: sum rate increases in W and in P") {
  for (const auto& [seed, s] :
       testing::feasible_scenarios(10, 3, Mode::joint)) {
    double W = s.bandwidth_budget, P = s.power_budget;
    double p0 = min_joint_power(s, W);
    const int n = 12;
    std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      double w = W * (1.0 + 0.05 * i);
      for (int j = 0; j < n; ++j) {
        double p = p0 + (P - p0) * (j + 1) / n;
        r[i][j] = joint_allocate(s, w, p).allocation.sum_rate;
      }
    }
    CAPTURE(seed);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i > 0) CHECK(r[i][j] > r[i - 1][j]);
        if (j > 0) CHECK(r[i][j] > r[i][j - 1]);
      }
  }
}
