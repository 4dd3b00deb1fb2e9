#include "eealloc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eealloc/errors.hpp"

namespace eealloc {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr double kBranchSlack = 1e-12;

double initial_guess(double x) {
  if (x < -0.25) {
    // Series in p = sqrt(2(ex + 1)) about the branch point.
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  }
  if (x > std::numbers::e) {
    const double l1 = std::log(x);
    return l1 - std::log(l1);
  }
  return std::log1p(x) * (1.0 - std::log1p(x) / (2.0 + std::log1p(x)));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) {
    throw DomainError("lambert_w0: NaN argument");
  }
  if (x <= -kInvE) {
    if (x < -kInvE - kBranchSlack) {
      throw DomainError("lambert_w0: argument below -1/e");
    }
    return -1.0;
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return x;
  }

  double w = initial_guess(x);
  for (int iter = 0; iter < 32; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 <= 0.0) {
      break;
    }
    // Halley step.
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    const double next = w - step;
    if (!std::isfinite(next)) {
      break;
    }
    w = next < -1.0 ? -1.0 : next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

double phi(double x) {
  if (!(x > 0.0)) {
    throw DomainError("phi: requires x > 0");
  }
  if (x > 1e3) {
    // ln(1+t) - t/(1+t) = sum_{n>=2} (-1)^n (n-1)/n t^n with t = 1/x.
    const double t = 1.0 / x;
    double term = t * t;
    double sum = 0.0;
    for (int n = 2; n <= 8; ++n) {
      sum += (n % 2 == 0 ? 1.0 : -1.0) * (n - 1.0) / n * term;
      term *= t;
    }
    return sum;
  }
  return std::log1p(1.0 / x) - 1.0 / (1.0 + x);
}

}  // namespace eealloc
