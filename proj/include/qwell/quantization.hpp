#pragma once

#include <vector>

#include "qwell/quaternion.hpp"
#include "qwell/radial.hpp"

namespace qwell {

// Dimensionless well: kappa_c = a sqrt(v1), kappa_q = a (v2^2 + v3^2)^(1/4).
// phase is the argument of v2 + i v3; the spectrum does not depend on it but
// the intermediate factors w and z do.
struct QuantizationProblem {
  double kappa_c = 0.0;
  double kappa_q = 0.0;
  double a = 1.0;
  double phase = 0.0;

  static QuantizationProblem from_potential(const PotentialSpec& pot);

  // (kappa_c^4 + kappa_q^4)^(1/4): upper end of the bound window in x = eps a.
  double x_max() const;
  // Same well with a = 1, energies measured as x^2.
  PotentialSpec scaled_potential() const;
  PotentialSpec physical_potential() const;
  double energy(double x) const { return x * x / (a * a); }
  Regime regime(double x) const { return x < kappa_q ? Regime::BelowQ : Regime::Mid; }
  void validate() const;
};

// Half-width of the band around x = kappa_q excluded from scanning.
inline constexpr double kDegenerateXBand = 1e-9;

struct QuantizationTerms {
  Complex num;
  Complex den;
  // num * conj(den); real in exact arithmetic on both sides of kappa_q.
  Complex num_conj_den;
  double den_norm2 = 0.0;
};

// Num and Den of tan(x) = -x Num / Den at x = eps a.
// Throws DegenerateEnergyError inside the excluded bands.
QuantizationTerms quantization_terms(double x, const QuantizationProblem& prob);

struct FValue {
  double value = 0.0;
  // |Im f| / (|Re f| + 1) of the discarded imaginary part.
  double imag_residue = 0.0;
  // |Den| < 1e-300: f has a pole here and value is meaningless.
  bool pole = false;
};

// f(x; kappa_c, kappa_q) = -x Re(Num conj(Den)) / |Den|^2.
FValue f_quantization(double x, const QuantizationProblem& prob);

// Pole-free root function sin(x) |Den|^2 + x cos(x) Re(Num conj(Den)).
// In the complex limit it equals Num^2 nu_- (sin(x) sqrt(kc^2 - x^2) + x cos(x)).
double mismatch(double x, const QuantizationProblem& prob);

struct BoundState {
  int index = 0;
  double x = 0.0;
  double energy = 0.0;
  Regime regime = Regime::Mid;
  double det_residual = 0.0;
  double continuity_residual = 0.0;
  bool near_degenerate = false;
  RadialState wavefunction;
};

struct ScanOptions {
  // Scan points over the window; non-positive selects 4096 per unit of x_max / pi.
  int grid = 0;
  double refine_tol = 1e-12;
  double validate_tol = 1e-8;
  // Distance kept from both ends of (0, x_max).
  double edge = 1e-6;
};

struct BoundStateSet {
  QuantizationProblem problem;
  std::vector<BoundState> states;
  double scan_resolution = 0.0;
  bool no_binding = false;
  // Sign changes of the root function that failed validation.
  std::vector<double> rejected;
  // Sign changes straddling the kappa_q band, reported but not solved.
  std::vector<double> near_degenerate;
};

int default_scan_grid(const QuantizationProblem& prob);

BoundStateSet find_bound_states(const QuantizationProblem& prob, const ScanOptions& options = {});

// Dimensionless determinant residual of the matching condition at a root.
double verify_determinant(const BoundState& state, const QuantizationProblem& prob);
double verify_determinant(double x, const QuantizationProblem& prob);

double trial_complex_kappa(const QuantizationProblem& prob);

// Complex well of depth sqrt(v1^2 + v2^2 + v3^2).
BoundStateSet trial_complex_states(const QuantizationProblem& prob, const ScanOptions& options = {});

// Complex well with the quaternionic part removed.
BoundStateSet complex_limit_states(const QuantizationProblem& prob, const ScanOptions& options = {});

struct RealityReport {
  int samples = 0;
  // max |Im(Num conj(Den))| / (|Num conj(Den)| + 1)
  double max_relative_imag = 0.0;
  double max_abs_imag = 0.0;
  // max ||zw| - 1|
  double max_zw_deviation = 0.0;
};

// Samples the below-threshold window (0, min(kappa_q, x_max)) uniformly.
// Throws EmptyWindowError when kappa_q = 0.
RealityReport reality_report(const QuantizationProblem& prob, int n_samples);

}  // namespace qwell
