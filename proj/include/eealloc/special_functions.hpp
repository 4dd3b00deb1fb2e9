#pragma once

namespace eealloc {

/**
 * Principal branch W0 of the Lambert W function, y e^y = x with y >= -1.
 *
 * Arguments in [-1/e - 1e-12, -1/e] are clamped to the branch point. Anything
 * further left throws DomainError.
 */
double lambert_w0(double x);

/// ln(1 + 1/x) - 1/(1 + x) for x > 0; positive and strictly decreasing.
double phi(double x);

}  // namespace eealloc
