#pragma once

#include <stdexcept>
#include <string>

namespace eealloc {

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * The rate floors cannot be met with the available budget.
 *
 * deficit() is the additional transmit power that would be needed, or +inf
 * when the floors overflow double precision.
 */
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double deficit)
      : std::runtime_error(what), deficit_(deficit) {}

  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// A brute-force oracle was asked for an instance beyond its size guard.
class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eealloc
