#pragma once

#include <stdexcept>
#include <string>

namespace qwell {

// Invalid argument outside an operation's domain (zero inverse, non-unit
// rotor, sample outside a region).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Energy inside the excluded neighbourhood of sqrt(V2^2+V3^2) or
// sqrt(V1^2+V2^2+V3^2), where the exterior basis collapses.
class DegenerateEnergyError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Region-II evaluation requested above the total potential magnitude.
class UnsupportedRegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// solve_coefficients called at an energy that fails the determinant check.
class NotARootError : public DomainError {
 public:
  NotARootError(const std::string& what, double residual)
      : DomainError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Sampling window with no points, e.g. the below-threshold window of a
// purely complex well.
class EmptyWindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace qwell
