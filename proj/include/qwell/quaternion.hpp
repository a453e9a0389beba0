#pragma once

#include <cmath>
#include <complex>
#include <ostream>

namespace qwell {

using Complex = std::complex<double>;

// Pair (c1, c2) with q = c1 + j*c2. Complex numbers live in span{1, i}.
struct SymplecticPair {
  Complex c1;
  Complex c2;
};

// Real quaternion w + x*i + y*j + z*k.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}
  constexpr explicit Quaternion(double real) : w(real) {}
  // Embeds a complex number as w + x*i.
  constexpr explicit Quaternion(Complex c) : w(c.real()), x(c.imag()) {}

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return w; }
  constexpr bool is_pure() const { return w == 0.0; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

// Hamilton product.
constexpr Quaternion multiply(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return multiply(p, q);
}

constexpr Quaternion conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

constexpr double norm2(const Quaternion& q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

double norm(const Quaternion& q);

// Throws DomainError for q == 0.
Quaternion inverse(const Quaternion& q);

// q = c1 + j*c2 with c1 = w + i*x and c2 = y - i*z; uses j*c = conj(c)*j.
constexpr SymplecticPair symplectic_split(const Quaternion& q) {
  return {Complex(q.w, q.x), Complex(q.y, -q.z)};
}

constexpr Quaternion symplectic_join(const Complex& c1, const Complex& c2) {
  return {c1.real(), c1.imag(), c2.real(), -c2.imag()};
}

constexpr Quaternion symplectic_join(const SymplecticPair& p) {
  return symplectic_join(p.c1, p.c2);
}

// (c1 + j c2)(d1 + j d2) = (c1 d1 - conj(c2) d2) + j (conj(c1) d2 + c2 d1)
SymplecticPair symplectic_multiply(const SymplecticPair& p, const SymplecticPair& q);

// Right multiplication by a complex scalar acts componentwise on the pair.
inline SymplecticPair operator*(const SymplecticPair& p, const Complex& s) {
  return {p.c1 * s, p.c2 * s};
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qwell
