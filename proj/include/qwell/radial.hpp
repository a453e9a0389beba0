#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "qwell/quaternion.hpp"

namespace qwell {

// Square well: zero for r < a, i*v1 + j*v2 + k*v3 for r > a.
// Energies are in units with hbar^2/(2m) = 1, so epsilon = sqrt(E).
struct PotentialSpec {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double a = 1.0;

  // Builds the well with a*sqrt(v1) = kappa_c and a*(v2^2+v3^2)^(1/4) = kappa_q;
  // phase is the argument of v2 + i*v3.
  static PotentialSpec from_kappas(double kappa_c, double kappa_q, double a = 1.0,
                                   double phase = 0.0);

  double kappa_c() const;
  double kappa_q() const;
  // sqrt(v2^2 + v3^2)
  double quaternionic_threshold() const;
  // sqrt(v1^2 + v2^2 + v3^2)
  double total_threshold() const;
  // Argument of v2 + i*v3 (0 for a complex well).
  double phase() const;
  Quaternion as_quaternion() const { return {0.0, v1, v2, v3}; }

  // Throws DomainError unless v1 >= 0, a > 0 and everything is finite.
  void validate() const;
};

enum class Regime { BelowQ, Mid, Free };

const char* to_string(Regime regime);

struct CharacteristicData {
  Complex nu_minus;
  Complex nu_plus;
  Complex w;
  Complex z;
  Regime regime = Regime::Mid;
};

// Half-width of the excluded energy neighbourhoods around both thresholds.
inline constexpr double kDegenerateEnergyBand = 1e-9;

Regime classify_regime(double energy, const PotentialSpec& pot);

// True when energy lies within kDegenerateEnergyBand of either threshold.
bool is_degenerate_energy(double energy, const PotentialSpec& pot);

// (nu_minus, nu_plus) = sqrt(v1 -/+ sqrt(E^2 - v2^2 - v3^2)) with Re > 0.
// Below the quaternionic threshold the pair is built as an exact conjugate
// pair. Throws DegenerateEnergyError near either threshold, DomainError for
// E <= 0.
std::pair<Complex, Complex> characteristic_exponents(double energy, const PotentialSpec& pot);

// (w, z) of the exterior factors (1 + j w) and (z + j).
std::pair<Complex, Complex> symplectic_factors(double energy, const PotentialSpec& pot);

CharacteristicData characteristic_data(double energy, const PotentialSpec& pot);

// Residual of nu^4 - 2 v1 nu^2 + v1^2 + v2^2 + v3^2 - E^2 divided by the
// magnitude of its largest term.
double quartic_residual(const Complex& nu, double energy, const PotentialSpec& pot);

using Matrix2c = std::array<std::array<Complex, 2>, 2>;

// Matching matrix acting on (exp(-nu_- a) beta2, exp(-nu_+ a) delta2).
// Row 1 is the complex-part condition multiplied by cos(eps a), row 2 the
// j-part condition multiplied by 1/cosh(eps a), so neither row has poles.
Matrix2c continuity_matrix(double energy, const PotentialSpec& pot);
Matrix2c continuity_matrix(double energy, const PotentialSpec& pot,
                           const CharacteristicData& chardata);

// |det| / ((1 + |zw|)(|nu_-| + eps)(|nu_+| + eps)), evaluated on
// continuity_matrix. Dimensionless, zero exactly at quantized energies.
double determinant_residual(double energy, const PotentialSpec& pot);
double determinant_residual(double energy, const PotentialSpec& pot,
                            const CharacteristicData& chardata);

struct RadialState {
  PotentialSpec potential;
  double energy = 0.0;
  double epsilon = 0.0;
  Complex alpha1;
  Complex gamma1;
  Complex beta2;
  Complex delta2;
  CharacteristicData chardata;
  double norm_constant = 1.0;
  double det_residual = 0.0;
  double continuity_residual = 0.0;
};

struct SolveOptions {
  double validate_tol = 1e-8;
  // Simpson step on [0, a]; non-positive selects a / 2048.
  double grid_step = 0.0;
};

// Recovers (alpha1, gamma1, beta2, delta2) at a quantized energy, fixes the
// free complex phase so that exp(-nu_- a) beta2 is real and positive, and
// normalizes to unit radial norm. Throws NotARootError when the determinant
// residual exceeds options.validate_tol, DegenerateEnergyError near a
// threshold and UnsupportedRegimeError above the total threshold.
RadialState solve_coefficients(double energy, const PotentialSpec& pot,
                               const SolveOptions& options = {});

// sin(eps r) alpha1 + j sinh(eps r) gamma1 for 0 <= r <= a.
Quaternion eval_region1(double r, const RadialState& state);
Quaternion eval_region1_derivative(double r, const RadialState& state);
Quaternion eval_region1_second_derivative(double r, const RadialState& state);

// (1 + j w) exp(-nu_- r) beta2 + (z + j) exp(-nu_+ r) delta2 for r >= a.
Quaternion eval_region2(double r, const RadialState& state);
Quaternion eval_region2_derivative(double r, const RadialState& state);
Quaternion eval_region2_second_derivative(double r, const RadialState& state);

// Piecewise U(r) for r >= 0.
Quaternion radial_value(double r, const RadialState& state);

// Relative mismatch of value and first derivative at r = a.
double continuity_residual(const RadialState& state);

// Integral of |U(r)|^2 over [0, inf): composite Simpson on [0, a] with step
// at most grid_step, exponential tail in closed form.
double radial_norm(const RadialState& state, double grid_step);
double default_grid_step(const PotentialSpec& pot);

struct OdeResidual {
  double value = 0.0;
  double step = 0.0;
};

// Max over samples of |i U'' - V U + U i E| / (|U''| + |V||U| + E|U|), with U''
// from a central difference of step h. Each stencil uses the analytic
// solution of the region its sample belongs to.
OdeResidual ode_residual(const RadialState& state, std::span<const double> r_samples,
                         double h = 1e-4);

// n interior points of region I and n points of region II out to eight decay
// lengths, both kept one step away from r = a.
std::vector<double> default_residual_samples(const RadialState& state, int n = 32,
                                             double h = 1e-4);

}  // namespace qwell
