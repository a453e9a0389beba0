#include "qwell/quaternion.hpp"

#include "qwell/errors.hpp"

namespace qwell {

double norm(const Quaternion& q) {
  // hypot keeps the result finite for components near the overflow limit.
  return std::hypot(std::hypot(q.w, q.x), std::hypot(q.y, q.z));
}

Quaternion inverse(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 == 0.0) throw DomainError("inverse: zero quaternion");
  return conjugate(q) * (1.0 / n2);
}

SymplecticPair symplectic_multiply(const SymplecticPair& p, const SymplecticPair& q) {
  return {p.c1 * q.c1 - std::conj(p.c2) * q.c2,
          std::conj(p.c1) * q.c2 + p.c2 * q.c1};
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << "i, " << q.y << "j, " << q.z << "k)";
}

}  // namespace qwell
