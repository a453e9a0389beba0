#include <doctest.h>

#include <random>

#include "qwell/errors.hpp"
#include "qwell/spectral.hpp"

using namespace qwell;

namespace {

double canonical_error(const ImaginaryEigenvalue& lambda, const CanonicalForm& form) {
  const Quaternion image = conjugate(form.u) * lambda.as_quaternion() * form.u;
  return norm(image - Quaternion{0.0, form.energy, 0.0, 0.0});
}

}  // namespace

TEST_CASE("apply_automorphism") {
  const Quaternion i = Quaternion::i();
  CHECK(apply_automorphism(i, Quaternion::one()) == i);
  // conj(j) i j = -j i j = k j = -i
  CHECK(norm(apply_automorphism(i, Quaternion::j()) + i) < 1e-16);
  CHECK_THROWS_AS(apply_automorphism(i, Quaternion(2.0)), DomainError);
  CHECK_THROWS_AS(apply_automorphism(Quaternion{1.0, 1.0, 0.0, 0.0}, Quaternion::one()),
                  DomainError);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int n = 0; n < 1000; ++n) {
    Quaternion u{g(rng), g(rng), g(rng), g(rng)};
    u = u * (1.0 / norm(u));
    const Quaternion lambda{0.0, g(rng), g(rng), g(rng)};
    const Quaternion image = apply_automorphism(lambda, u);
    CHECK(std::abs(image.w) < 1e-14);
    CHECK(norm(image) == doctest::Approx(norm(lambda)).epsilon(1e-14));
  }
}

TEST_CASE("canonicalize worked examples") {
  const CanonicalForm along_i = canonicalize({5.0, 0.0, 0.0});
  CHECK(along_i.energy == 5.0);
  CHECK(norm(along_i.u - Quaternion::one()) < 1e-16);

  const ImaginaryEigenvalue tilted{3.0, 4.0, 0.0};
  const CanonicalForm form = canonicalize(tilted);
  CHECK(form.energy == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(form.u.w == doctest::Approx(0.894427190999916).epsilon(1e-12));
  CHECK(std::abs(form.u.x) < 1e-16);
  CHECK(std::abs(form.u.y) < 1e-16);
  CHECK(form.u.z == doctest::Approx(0.447213595499958).epsilon(1e-12));
  CHECK(canonical_error(tilted, form) < 1e-14);

  const ImaginaryEigenvalue reversed{-5.0, 0.0, 0.0};
  const CanonicalForm flipped = canonicalize(reversed);
  CHECK(flipped.energy == 5.0);
  CHECK(flipped.u == Quaternion::j());
  CHECK(canonical_error(reversed, flipped) < 1e-15);
}

TEST_CASE("canonicalize zero eigenvalue") {
  const CanonicalForm form = canonicalize({0.0, 0.0, 0.0});
  CHECK(form.energy == 0.0);
  CHECK(form.u == Quaternion::one());
}

TEST_CASE("canonicalize near the -i direction stays accurate") {
  for (const double tilt : {1e-3, 1e-6, 1e-9, 1e-12, 1e-15}) {
    const ImaginaryEigenvalue lambda{-7.0, 7.0 * tilt, -3.0 * tilt};
    const CanonicalForm form = canonicalize(lambda);
    CHECK(std::abs(norm(form.u) - 1.0) < 1e-13);
    CHECK(canonical_error(lambda, form) < 1e-12 * 7.0);
  }
}

TEST_CASE("canonicalize random eigenvalues") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  for (int n = 0; n < 10000; ++n) {
    const double s = std::pow(10.0, log_scale(rng));
    const ImaginaryEigenvalue lambda{s * unit(rng), s * unit(rng), s * unit(rng)};
    const CanonicalForm form = canonicalize(lambda);
    CHECK(std::abs(norm(form.u) - 1.0) < 1e-13);
    CHECK(canonical_error(lambda, form) < 1e-12 * std::max(1.0, form.energy));

    // Scale equivariance: same rotor, scaled energy.
    const double t = 1.0 + 10.0 * std::abs(unit(rng));
    const ImaginaryEigenvalue scaled{t * lambda.e1, t * lambda.e2, t * lambda.e3};
    const CanonicalForm scaled_form = canonicalize(scaled);
    CHECK(scaled_form.energy == doctest::Approx(t * form.energy).epsilon(1e-14));
    CHECK(canonical_error(scaled, CanonicalForm{scaled_form.energy, form.u}) <
          1e-12 * std::max(1.0, scaled_form.energy));
  }
}
