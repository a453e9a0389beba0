#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qwell/errors.hpp"
#include "qwell/quantization.hpp"

using namespace qwell;
using std::numbers::pi;

namespace {

const QuantizationProblem kComplex{5.0 * pi, 0.0};
const QuantizationProblem kHalf{5.0 * pi, 2.5 * pi};
const QuantizationProblem kEqual{5.0 * pi, 5.0 * pi};

// mpmath roots (40 digits) of the full 4x4 matching determinant.
const std::vector<double> kHalfRoots{2.9560539473781763648, 5.9048084726029388962,
                                     8.8375759166366200972, 11.737813313139808973,
                                     14.554149678375199965};
const std::vector<double> kEqualRoots{2.9893853425511043013, 5.9681478724087728889,
                                     8.9317280885733724393, 11.87235904887504822,
                                     14.772565666671270852, 17.569786884097438432};

std::vector<double> xs_of(const BoundStateSet& set) {
  std::vector<double> out;
  for (const auto& s : set.states) out.push_back(s.x);
  return out;
}

void check_same_roots(const std::vector<double>& got, const std::vector<double>& want,
                      double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t n = 0; n < got.size(); ++n) CHECK(std::abs(got[n] - want[n]) < tol);
}

}  // namespace

TEST_CASE("problem geometry") {
  CHECK(kHalf.x_max() == doctest::Approx(std::pow(std::pow(5 * pi, 4) + std::pow(2.5 * pi, 4), 0.25)));
  CHECK(kHalf.regime(2.0) == Regime::BelowQ);
  CHECK(kHalf.regime(9.0) == Regime::Mid);
  const auto p = QuantizationProblem::from_potential(PotentialSpec::from_kappas(3.0, 2.0, 0.5, 0.7));
  CHECK(p.kappa_c == doctest::Approx(3.0));
  CHECK(p.kappa_q == doctest::Approx(2.0));
  CHECK(p.a == 0.5);
  CHECK(p.phase == doctest::Approx(0.7));
  CHECK_THROWS_AS(QuantizationProblem({-1.0, 0.0}).validate(), DomainError);
}

TEST_CASE("f in the complex limit") {
  for (const double x : {0.5, 3.0, 7.0, 12.0, 15.5}) {
    const FValue f = f_quantization(x, kComplex);
    CHECK_FALSE(f.pole);
    CHECK(f.value == doctest::Approx(-x / std::sqrt(kComplex.kappa_c * kComplex.kappa_c - x * x))
                         .epsilon(1e-13));
  }
  CHECK(f_quantization(kComplex.kappa_c / std::sqrt(2.0), kComplex).value ==
        doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("f stays real on both sides of the quaternionic threshold") {
  const FValue below = f_quantization(0.5 * kHalf.kappa_q, kHalf);
  CHECK(below.imag_residue < 1e-10);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& prob : {kHalf, kEqual}) {
    for (int n = 0; n < 2000; ++n) {
      const double x = prob.x_max() * (1e-4 + (1.0 - 2e-4) * u(rng));
      if (std::abs(x - prob.kappa_q) < 1e-6) continue;
      CHECK(f_quantization(x, prob).imag_residue < 1e-10);
    }
  }
}

TEST_CASE("f agrees with the determinant form of the condition") {
  // tan(x) = f  <=>  zw [n- th + x][n+ t + x] = [n- t + x][n+ th + x]; check
  // f against a direct solve of that linear equation in t.
  for (const auto& prob : {kHalf, kEqual}) {
    for (const double x : {1.0, 4.0, 9.5, 13.0}) {
      if (!(x < prob.x_max())) continue;
      const CharacteristicData cd = characteristic_data(x * x, prob.scaled_potential());
      const Complex zw = cd.z * cd.w;
      const double th = std::tanh(x);
      // (n- t + x)(n+ th + x) - zw (n- th + x)(n+ t + x) = 0 is linear in t.
      const Complex slope = cd.nu_minus * (cd.nu_plus * th + x) - zw * (cd.nu_minus * th + x) * cd.nu_plus;
      const Complex offset = x * (cd.nu_plus * th + x) - zw * (cd.nu_minus * th + x) * x;
      const Complex t = -offset / slope;
      CHECK(std::abs(t.imag()) < 1e-10 * (1.0 + std::abs(t)));
      CHECK(f_quantization(x, prob).value == doctest::Approx(t.real()).epsilon(1e-11));
    }
  }
}

TEST_CASE("mismatch") {
  SUBCASE("complex limit reduces to the textbook form up to a positive factor") {
    const double kc = kComplex.kappa_c;
    for (const double x : {0.7, 2.0, 6.1, 10.0, 15.0}) {
      const double reduced = std::sin(x) * std::sqrt(kc * kc - x * x) + x * std::cos(x);
      const double num = std::sqrt(kc * kc + x * x) * std::tanh(x) + x;
      const double factor = num * num * std::sqrt(kc * kc - x * x);
      CHECK(mismatch(x, kComplex) == doctest::Approx(factor * reduced).epsilon(1e-12));
    }
  }
  SUBCASE("vanishes at the complex ground root") {
    const double x1 = 2.9525055568355454908;
    CHECK(std::abs(mismatch(x1, kComplex)) < 1e-10);
    CHECK(mismatch(2.9526, kComplex) * mismatch(2.9524, kComplex) < 0.0);
  }
  SUBCASE("changes sign across every half-well root") {
    for (const double x : kHalfRoots) {
      CHECK(mismatch(x - 1e-6, kHalf) * mismatch(x + 1e-6, kHalf) < 0.0);
    }
  }
  SUBCASE("degenerate band") {
    CHECK_THROWS_AS(mismatch(kHalf.kappa_q, kHalf), DegenerateEnergyError);
    CHECK_NOTHROW(mismatch(kHalf.kappa_q + 1e-6, kHalf));
  }
}

TEST_CASE("find_bound_states: complex well") {
  const BoundStateSet set = find_bound_states(kComplex);
  const std::vector<double> oracle_roots = oracle::complex_well_roots(kComplex.kappa_c);
  REQUIRE(oracle_roots.size() == 5);
  check_same_roots(xs_of(set), oracle_roots, 1e-10);
  CHECK(set.states.front().x == doctest::Approx(2.953).epsilon(1e-2 / 2.953));
  for (const auto& s : set.states) CHECK(s.regime == Regime::Mid);

  CHECK(find_bound_states({1.0, 0.0}).states.empty());
  CHECK(oracle::complex_well_roots(1.0).empty());
  const BoundStateSet none = find_bound_states({0.0, 0.0});
  CHECK(none.states.empty());
  CHECK(none.no_binding);
}

TEST_CASE("find_bound_states: reference wells") {
  SUBCASE("half well (kq = kc / 2)") {
    const BoundStateSet set = find_bound_states(kHalf);
    check_same_roots(xs_of(set), kHalfRoots, 1e-10);
    CHECK(set.states[0].regime == Regime::BelowQ);
    CHECK(set.states[1].regime == Regime::BelowQ);
    CHECK(set.states[2].regime == Regime::Mid);
  }
  SUBCASE("equal well (kq = kc)") {
    const BoundStateSet set = find_bound_states(kEqual);
    check_same_roots(xs_of(set), kEqualRoots, 1e-10);
    for (int n = 0; n < 5; ++n) CHECK(set.states[n].regime == Regime::BelowQ);
    CHECK(set.states[5].regime == Regime::Mid);
  }
  SUBCASE("the test-side dense scan reproduces the frozen roots") {
    check_same_roots(oracle::dense_scan_roots(kHalf.kappa_c, kHalf.kappa_q, 1e-3), kHalfRoots, 1e-10);
  }
}

TEST_CASE("bound-state invariants") {
  for (const auto& prob : {kComplex, kHalf, kEqual, QuantizationProblem{7.0, 4.0, 1.3, 0.4}}) {
    const BoundStateSet set = find_bound_states(prob);
    for (std::size_t n = 0; n < set.states.size(); ++n) {
      const BoundState& s = set.states[n];
      CHECK(s.index == static_cast<int>(n));
      CHECK(s.x > 0.0);
      CHECK(s.x < prob.x_max());
      CHECK(s.energy == doctest::Approx(s.x * s.x / (prob.a * prob.a)));
      CHECK((s.regime == Regime::BelowQ) == (s.energy < prob.kappa_q * prob.kappa_q / (prob.a * prob.a)));
      CHECK(s.det_residual < 1e-8);
      CHECK(s.continuity_residual < 1e-8);
      CHECK(verify_determinant(s, prob) < 1e-8);
      if (n > 0) CHECK(s.energy > set.states[n - 1].energy);
    }
    for (const double x : set.rejected) {
      const bool fails_det = !(verify_determinant(x, prob) < 1e-8);
      CHECK(fails_det);
    }
  }
}

TEST_CASE("verify_determinant") {
  const BoundStateSet set = find_bound_states(kHalf);
  for (std::size_t n = 0; n + 1 < set.states.size(); ++n) {
    CHECK(verify_determinant(set.states[n], kHalf) < 1e-8);
    const double mid = 0.5 * (set.states[n].x + set.states[n + 1].x);
    CHECK(verify_determinant(mid, kHalf) > 1e-3);
  }
  // complex limit: zw = 0, the condition is n- tan + x = 0
  for (const double x : oracle::complex_well_roots(kComplex.kappa_c)) {
    CHECK(verify_determinant(x, kComplex) < 1e-12);
  }
}

TEST_CASE("scan resolution does not move roots") {
  for (const auto& prob : {kHalf, kEqual}) {
    const BoundStateSet coarse = find_bound_states(prob);
    ScanOptions fine;
    fine.grid = 2 * default_scan_grid(prob);
    check_same_roots(xs_of(find_bound_states(prob, fine)), xs_of(coarse), 1e-10);
  }
}

TEST_CASE("spectrum is invariant under (v2, v3) phase rotation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 10; ++n) {
    QuantizationProblem prob{2.0 + 14.0 * u(rng), 14.0 * u(rng), 0.5 + u(rng), 0.0};
    const BoundStateSet base = find_bound_states(prob);
    prob.phase = 2.0 * pi * u(rng);
    check_same_roots(xs_of(find_bound_states(prob)), xs_of(base), 1e-10);
  }
}

TEST_CASE("trial-complex comparison") {
  CHECK(trial_complex_kappa(kComplex) == kComplex.kappa_c);
  CHECK(trial_complex_kappa(kEqual) == doctest::Approx(5.0 * pi * std::pow(2.0, 0.25)).epsilon(1e-15));
  for (const auto& prob : {kComplex, kHalf, kEqual}) {
    const double kt = trial_complex_kappa(prob);
    const BoundStateSet trial = trial_complex_states(prob);
    CHECK(trial.problem.kappa_c == kt);
    CHECK(trial.problem.kappa_q == 0.0);
    check_same_roots(xs_of(trial), oracle::complex_well_roots(kt), 1e-10);
  }
  // mpmath roots of the trial well for the equal well
  check_same_roots(xs_of(trial_complex_states(kEqual)),
                   {2.9813084553060606917, 5.9585333622991699568, 8.9265537857976985698,
                    11.877289212011322193, 14.793941079160009686, 17.617640155289889576},
                   1e-10);
}

TEST_CASE("reality report") {
  CHECK_THROWS_AS(reality_report(kComplex, 10), EmptyWindowError);
  CHECK_THROWS_AS(reality_report(kHalf, 0), DomainError);
  for (const auto& prob : {kHalf, kEqual}) {
    const RealityReport r = reality_report(prob, 1000);
    CHECK(r.samples == 1000);
    CHECK(r.max_relative_imag < 1e-10);
    CHECK(r.max_zw_deviation < 1e-12);
  }
}
