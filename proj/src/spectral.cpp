#include "qwell/spectral.hpp"

#include <cmath>

#include "qwell/errors.hpp"

namespace qwell {

namespace {
constexpr double kUnitTolerance = 1e-12;
}  // namespace

double ImaginaryEigenvalue::magnitude() const {
  return std::hypot(e1, std::hypot(e2, e3));
}

Quaternion apply_automorphism(const Quaternion& lambda, const Quaternion& u) {
  if (std::abs(norm(u) - 1.0) > kUnitTolerance) {
    throw DomainError("apply_automorphism: u is not a unit quaternion");
  }
  if (std::abs(lambda.w) > kUnitTolerance * std::max(1.0, norm(lambda))) {
    throw DomainError("apply_automorphism: lambda has a scalar part");
  }
  return conjugate(u) * lambda * u;
}

CanonicalForm canonicalize(const ImaginaryEigenvalue& lambda) {
  const double magnitude = lambda.magnitude();
  if (magnitude == 0.0) return {0.0, Quaternion::one()};

  // e1 + |lambda| without cancellation when e1 < 0.
  const double transverse2 = lambda.e2 * lambda.e2 + lambda.e3 * lambda.e3;
  const double shifted = lambda.e1 >= 0.0 ? lambda.e1 + magnitude
                                          : transverse2 / (magnitude - lambda.e1);

  // Along -i the rotor formula divides by zero; j maps -i onto +i.
  if (shifted == 0.0) return {magnitude, Quaternion::j()};

  // u = sqrt(shifted / 2|lambda|) * [1 + j (e2 - i e3) / (i shifted)]
  const double root = std::sqrt(2.0 * magnitude * shifted);
  const Complex tail = Complex(lambda.e2, -lambda.e3) / Complex(0.0, root);
  return {magnitude, symplectic_join(Complex(shifted / root, 0.0), tail)};
}

}  // namespace qwell
