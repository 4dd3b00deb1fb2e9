#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "eealloc/errors.hpp"
#include "eealloc/oracle.hpp"
#include "eealloc/waterfill.hpp"
#include "support.hpp"

using namespace eealloc;
using doctest::Approx;

namespace {

Scenario two_user_g21() {
  return testing::fixed_scenario({2.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, 10.0);
}

double best_two_user_split(const Scenario& s, double total, double step) {
  double best = -1.0;
  for (double p1 = 0.0; p1 <= total + 1e-12; p1 += step) {
    double p2 = std::max(0.0, total - p1);
    best = std::max(best, rate(1.0, p1, s.users[0].gain) +
                              rate(1.0, p2, s.users[1].gain));
  }
  return best;
}

}  // namespace

TEST_CASE("min_power: closed-form values") {
  CHECK(min_power(1.0, 1.0, 1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(min_power(2.0, 1.0, 2.0) == Approx(2.0).epsilon(1e-15));
  CHECK(min_power(1.0, 4.0, 0.0) == 0.0);
  CHECK(rate(1.5, min_power(1.5, 3.0, 2.7), 3.0) ==
        Approx(2.7).epsilon(1e-13));
  CHECK_THROWS_AS(min_power(1.0, 1.0, 2000.0), InfeasibleError);
}

TEST_CASE("allocate: symmetric users split evenly") {
  auto s = testing::fixed_scenario({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, 10.0);
  auto r = allocate(s, 4.0);
  CHECK(r.allocation.per_user[0].power == Approx(2.0).epsilon(1e-14));
  CHECK(r.allocation.per_user[1].power == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("allocate: weak user below water at P = 0.4") {
  auto s = two_user_g21();
  auto r = allocate(s, 0.4);
  CHECK(r.allocation.per_user[0].power == Approx(0.4).epsilon(1e-14));
  CHECK(r.allocation.per_user[1].power == 0.0);
  CHECK(r.diagnostics.water_level == Approx(0.9).epsilon(1e-14));
  CHECK(r.diagnostics.binding_set == std::vector<std::size_t>{1});
  CHECK(r.allocation.sum_rate >= best_two_user_split(s, 0.4, 1e-4) - 1e-12);
}

TEST_CASE("allocate: both users above water at P = 1.5") {
  auto s = two_user_g21();
  auto r = allocate(s, 1.5);
  CHECK(r.allocation.per_user[0].power == Approx(1.0).epsilon(1e-14));
  CHECK(r.allocation.per_user[1].power == Approx(0.5).epsilon(1e-14));
  CHECK(r.diagnostics.water_level == Approx(1.5).epsilon(1e-14));
  CHECK(r.diagnostics.binding_set.empty());
  CHECK(r.allocation.sum_rate >= best_two_user_split(s, 1.5, 1e-4) - 1e-12);
}

TEST_CASE("allocate: infeasible power carries the deficit") {
  auto s = testing::fixed_scenario({1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, 10.0);
  try {
    allocate(s, 1.5);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.deficit() == Approx(0.5));
  }
  CHECK_NOTHROW(allocate(s, 2.0 - 1e-12));
}

TEST_CASE("allocate: tied base levels enter together") {
  auto s = testing::fixed_scenario({2.0, 2.0, 1.0}, {0.0, 0.0, 0.0},
                                   {1.0, 1.0, 1.0}, 10.0);
  auto r = allocate(s, 0.6);
  CHECK(r.allocation.per_user[0].power == Approx(0.3));
  CHECK(r.allocation.per_user[1].power == Approx(0.3));
  CHECK(r.diagnostics.binding_set == std::vector<std::size_t>{2});
}

TEST_CASE("kkt_residual: certificate and negative control") {
  auto s = two_user_g21();
  auto r = allocate(s, 1.5);
  CHECK(kkt_residual(s, r.allocation, r.diagnostics) <= 1e-9);

  std::vector<double> w{1.0, 1.0};
  std::vector<double> p{1.1, 0.4};
  Allocation bad = make_allocation(w, p, s);
  CHECK(kkt_residual(s, bad, r.diagnostics) >= 0.01);

  auto one = testing::fixed_scenario({1.0}, {0.0}, {1.0}, 10.0);
  auto r1 = allocate(one, 3.0);
  CHECK(r1.allocation.per_user[0].power == Approx(3.0).epsilon(1e-15));
  CHECK(kkt_residual(one, r1.allocation, r1.diagnostics) <= 1e-15);
}

TEST_CASE("d_sum_rate_dP: values") {
  auto s = two_user_g21();
  auto r = allocate(s, 1.5);
  // high-precision central difference of the sum-rate curve at P = 1.5
  CHECK(d_sum_rate_dP(s, r.diagnostics, 1.5) ==
        Approx(0.96179669393).epsilon(1e-10));
  double h = 1e-5;
  double fd = (allocate(s, 1.5 + h).allocation.sum_rate -
               allocate(s, 1.5 - h).allocation.sum_rate) /
              (2 * h);
  CHECK(d_sum_rate_dP(s, r.diagnostics, 1.5) == Approx(fd).epsilon(1e-7));

  auto one = testing::fixed_scenario({1.0}, {0.0}, {1.0}, 10.0);
  auto r1 = allocate(one, 1.0);
  CHECK(d_sum_rate_dP(one, r1.diagnostics, 1.0) ==
        Approx(1.0 / (2.0 * std::numbers::ln2)).epsilon(1e-14));
}

TEST_CASE("allocate: oracle equivalence on random instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 100; ++seed) {
    std::size_t k = 1 + seed % 3;
    Scenario s = random_scenario(seed, k, Mode::fixed);
    if (!testing::fixed_feasible(s)) continue;
    ++checked;
    double p = s.power_budget;
    auto r = allocate(s, p);
    auto o = grid_power_oracle(s, p, 200);
    CAPTURE(seed);
    CHECK(r.allocation.sum_rate >= o.best_rate - 1e-3 * r.allocation.sum_rate);
    CHECK(o.best_rate <= r.allocation.sum_rate + 1e-6);
    CHECK(kkt_residual(s, r.allocation, r.diagnostics) <= 1e-9);
  }
}

TEST_CASE("allocate: water level reproduces from the binding set") {
  for (const auto& [seed, s] :
       testing::feasible_scenarios(30, 3, Mode::fixed)) {
    auto r = allocate(s, s.power_budget);
    const auto& d = r.diagnostics;
    double num = s.power_budget, den = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      double w = *s.users[k].fixed_bandwidth;
      bool bound = std::find(d.binding_set.begin(), d.binding_set.end(), k) !=
                   d.binding_set.end();
      if (bound) {
        num -= d.min_powers[k];
      } else {
        num += w / s.users[k].gain;
        den += w;
      }
    }
    CAPTURE(seed);
    CHECK(num / den == Approx(d.water_level).epsilon(1e-12));
  }
}

TEST_CASE("allocate: sum rate increasing and concave, powers monotone in P") {
  for (const auto& [seed, s] :
       testing::feasible_scenarios(20, 3, Mode::fixed)) {
    double p0 = allocate(s, s.power_budget).diagnostics.min_total_power;
    const int n = 500;
    double h = (s.power_budget - p0) / (n - 1);
    std::vector<double> r(n);
    std::vector<double> prev(s.size(), -1.0);
    bool ok_monotone_power = true;
    for (int i = 0; i < n; ++i) {
      auto a = allocate(s, p0 + h * i);
      r[i] = a.allocation.sum_rate;
      for (std::size_t k = 0; k < s.size(); ++k) {
        double pk = a.allocation.per_user[k].power;
        if (pk < prev[k] - 1e-12 * std::max(1.0, pk)) ok_monotone_power = false;
        prev[k] = pk;
      }
    }
    bool inc = true, concave = true;
    for (int i = 1; i < n; ++i) inc = inc && r[i] - r[i - 1] > 0.0;
    for (int i = 1; i + 1 < n; ++i)
      concave = concave && r[i + 1] - 2 * r[i] + r[i - 1] <= 1e-9;
    CAPTURE(seed);
    CHECK(inc);
    CHECK(concave);
    CHECK(ok_monotone_power);
  }
}
