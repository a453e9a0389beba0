#pragma once

#include "qwell/quaternion.hpp"

namespace qwell {

// Energy components of an anti-self-adjoint eigenvalue
// lambda = -(i*e1 + j*e2 + k*e3). Canonicalization acts on the pure
// quaternion i*e1 + j*e2 + k*e3; the overall sign is common to both sides.
struct ImaginaryEigenvalue {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;

  constexpr Quaternion as_quaternion() const { return {0.0, e1, e2, e3}; }
  constexpr Quaternion eigenvalue() const { return {0.0, -e1, -e2, -e3}; }
  double magnitude() const;
};

// Representative of an eigenclass: conj(u) * (i e1 + j e2 + k e3) * u = i * energy.
struct CanonicalForm {
  double energy = 0.0;
  Quaternion u = Quaternion::one();
};

// conj(u) * lambda * u. Requires |u| = 1 (to 1e-12) and a pure lambda.
Quaternion apply_automorphism(const Quaternion& lambda, const Quaternion& u);

CanonicalForm canonicalize(const ImaginaryEigenvalue& lambda);

}  // namespace qwell
