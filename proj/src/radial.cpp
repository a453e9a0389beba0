#include "qwell/radial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qwell/errors.hpp"

namespace qwell {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTrigFloor = 1e-10;
constexpr double kGaugeFloor = 1e-12;
constexpr int kDefaultSimpsonIntervals = 2048;

// E^2 - (v2^2 + v3^2) as (E - m)(E + m).
double threshold_gap(double energy, double m) { return (energy - m) * (energy + m); }

Complex positive_branch(Complex c) {
  Complex root = std::sqrt(c);
  return root.real() < 0.0 ? -root : root;
}

struct ExteriorAmplitudes {
  Complex minus;
  Complex plus;
};

ExteriorAmplitudes exterior_amplitudes(double r, const RadialState& state) {
  return {std::exp(-state.chardata.nu_minus * r) * state.beta2,
          std::exp(-state.chardata.nu_plus * r) * state.delta2};
}

// Region-II combination of per-exponential amplitudes.
Quaternion combine_exterior(const ExteriorAmplitudes& amp, const CharacteristicData& cd) {
  return symplectic_join(amp.minus + cd.z * amp.plus, cd.w * amp.minus + amp.plus);
}

Quaternion region1_unchecked(double r, const RadialState& s) {
  const double x = s.epsilon * r;
  return symplectic_join(std::sin(x) * s.alpha1, std::sinh(x) * s.gamma1);
}

Quaternion region2_unchecked(double r, const RadialState& s) {
  return combine_exterior(exterior_amplitudes(r, s), s.chardata);
}

void require_bound(const RadialState& state) {
  if (state.chardata.regime == Regime::Free) {
    throw UnsupportedRegimeError(
        "region II: energy above the total threshold has no damped solution");
  }
}

}  // namespace

PotentialSpec PotentialSpec::from_kappas(double kappa_c, double kappa_q, double a,
                                         double phase) {
  const double magnitude = kappa_q * kappa_q / (a * a);
  return {kappa_c * kappa_c / (a * a), magnitude * std::cos(phase),
          magnitude * std::sin(phase), a};
}

double PotentialSpec::kappa_c() const { return a * std::sqrt(v1); }
double PotentialSpec::kappa_q() const { return a * std::sqrt(quaternionic_threshold()); }
double PotentialSpec::quaternionic_threshold() const { return std::hypot(v2, v3); }
double PotentialSpec::total_threshold() const { return std::hypot(v1, std::hypot(v2, v3)); }
double PotentialSpec::phase() const { return std::atan2(v3, v2); }

void PotentialSpec::validate() const {
  if (!std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(v3) || !std::isfinite(a)) {
    throw DomainError("potential: non-finite parameter");
  }
  if (v1 < 0.0) throw DomainError("potential: v1 must be non-negative");
  if (a <= 0.0) throw DomainError("potential: well radius must be positive");
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::BelowQ: return "below_q";
    case Regime::Mid: return "mid";
    case Regime::Free: return "free";
  }
  return "unknown";
}

Regime classify_regime(double energy, const PotentialSpec& pot) {
  if (energy < pot.quaternionic_threshold()) return Regime::BelowQ;
  if (energy < pot.total_threshold()) return Regime::Mid;
  return Regime::Free;
}

bool is_degenerate_energy(double energy, const PotentialSpec& pot) {
  const bool quaternionic = pot.quaternionic_threshold() > 0.0 &&
                            std::abs(energy - pot.quaternionic_threshold()) < kDegenerateEnergyBand;
  return quaternionic || std::abs(energy - pot.total_threshold()) < kDegenerateEnergyBand;
}

std::pair<Complex, Complex> characteristic_exponents(double energy, const PotentialSpec& pot) {
  if (!(energy > 0.0)) throw DomainError("characteristic_exponents: energy must be positive");
  if (is_degenerate_energy(energy, pot)) {
    throw DegenerateEnergyError("characteristic_exponents: energy at a threshold");
  }
  const double m = pot.quaternionic_threshold();
  if (energy < m) {
    // M = sqrt(v1^2 + m^2 - E^2); nu_-/+ = sqrt((v1+M)/2) -/+ i sqrt((M-v1)/2).
    const double gap = -threshold_gap(energy, m);
    const double big_m = std::sqrt(pot.v1 * pot.v1 + gap);
    const double re = std::sqrt(0.5 * (pot.v1 + big_m));
    const double im = std::sqrt(0.5 * gap / (big_m + pot.v1));
    return {Complex(re, -im), Complex(re, im)};
  }
  const double s = std::sqrt(threshold_gap(energy, m));
  return {positive_branch(Complex(pot.v1 - s, 0.0)), positive_branch(Complex(pot.v1 + s, 0.0))};
}

std::pair<Complex, Complex> symplectic_factors(double energy, const PotentialSpec& pot) {
  if (!(energy > 0.0)) throw DomainError("symplectic_factors: energy must be positive");
  if (pot.v2 == 0.0 && pot.v3 == 0.0) return {Complex(0.0), Complex(0.0)};
  const Complex s = std::sqrt(Complex(threshold_gap(energy, pot.quaternionic_threshold()), 0.0));
  const Complex denom = energy + s;
  const Complex w = -kI * Complex(pot.v2, -pot.v3) / denom;
  const Complex z = kI * Complex(pot.v2, pot.v3) / denom;
  return {w, z};
}

CharacteristicData characteristic_data(double energy, const PotentialSpec& pot) {
  const auto [nu_minus, nu_plus] = characteristic_exponents(energy, pot);
  const auto [w, z] = symplectic_factors(energy, pot);
  return {nu_minus, nu_plus, w, z, classify_regime(energy, pot)};
}

double quartic_residual(const Complex& nu, double energy, const PotentialSpec& pot) {
  const Complex nu2 = nu * nu;
  const double constant = pot.v1 * pot.v1 + pot.v2 * pot.v2 + pot.v3 * pot.v3 - energy * energy;
  const Complex value = nu2 * nu2 - 2.0 * pot.v1 * nu2 + constant;
  const double scale = std::max({std::norm(nu2), 2.0 * pot.v1 * std::abs(nu2),
                                 pot.v1 * pot.v1 + pot.v2 * pot.v2 + pot.v3 * pot.v3,
                                 energy * energy});
  return std::abs(value) / scale;
}

Matrix2c continuity_matrix(double energy, const PotentialSpec& pot) {
  return continuity_matrix(energy, pot, characteristic_data(energy, pot));
}

Matrix2c continuity_matrix(double energy, const PotentialSpec& pot,
                           const CharacteristicData& cd) {
  const double eps = std::sqrt(energy);
  const double x = eps * pot.a;
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double th = std::tanh(x);
  Matrix2c m;
  m[0][0] = cd.nu_minus * s + eps * c;
  m[0][1] = cd.z * (cd.nu_plus * s + eps * c);
  m[1][0] = cd.w * (cd.nu_minus * th + eps);
  m[1][1] = cd.nu_plus * th + eps;
  return m;
}

double determinant_residual(double energy, const PotentialSpec& pot) {
  return determinant_residual(energy, pot, characteristic_data(energy, pot));
}

double determinant_residual(double energy, const PotentialSpec& pot,
                            const CharacteristicData& cd) {
  const Matrix2c m = continuity_matrix(energy, pot, cd);
  const double eps = std::sqrt(energy);
  const Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double scale = (1.0 + std::abs(cd.z * cd.w)) * (std::abs(cd.nu_minus) + eps) *
                       (std::abs(cd.nu_plus) + eps);
  return std::abs(det) / scale;
}

double default_grid_step(const PotentialSpec& pot) { return pot.a / kDefaultSimpsonIntervals; }

RadialState solve_coefficients(double energy, const PotentialSpec& pot,
                               const SolveOptions& options) {
  pot.validate();
  if (!(energy > 0.0)) throw DomainError("solve_coefficients: energy must be positive");
  if (is_degenerate_energy(energy, pot)) {
    throw DegenerateEnergyError("solve_coefficients: energy at a threshold");
  }
  RadialState state;
  state.potential = pot;
  state.energy = energy;
  state.epsilon = std::sqrt(energy);
  state.chardata = characteristic_data(energy, pot);
  require_bound(state);

  const CharacteristicData& cd = state.chardata;
  state.det_residual = determinant_residual(energy, pot, cd);
  if (!(state.det_residual <= options.validate_tol)) {
    throw NotARootError("solve_coefficients: energy is not a quantization root",
                        state.det_residual);
  }

  const Matrix2c m = continuity_matrix(energy, pot, cd);
  Eigen::Matrix2cd mat;
  mat << m[0][0], m[0][1], m[1][0], m[1][1];
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(mat, Eigen::ComputeFullV);
  const Eigen::Vector2cd null = svd.matrixV().col(1);

  // The system is right-complex linear; pick the phase that makes the
  // leading exterior amplitude real and positive.
  Complex b = null(0);
  Complex d = null(1);
  const Complex anchor = std::abs(b) >= kGaugeFloor ? b : d;
  const Complex phase = std::conj(anchor) / std::abs(anchor);
  b *= phase;
  d *= phase;

  const double eps = state.epsilon;
  const double x = eps * pot.a;
  const double sn = std::sin(x);
  const double sh = std::sinh(x);
  state.alpha1 = std::abs(sn) >= kTrigFloor
                     ? (b + cd.z * d) / sn
                     : -(cd.nu_minus * b + cd.z * cd.nu_plus * d) / (eps * std::cos(x));
  state.gamma1 = std::abs(sh) >= kTrigFloor
                     ? (cd.w * b + d) / sh
                     : -(cd.w * cd.nu_minus * b + cd.nu_plus * d) / (eps * std::cosh(x));
  state.beta2 = b * std::exp(cd.nu_minus * pot.a);
  state.delta2 = d * std::exp(cd.nu_plus * pot.a);

  const double step = options.grid_step > 0.0 ? options.grid_step : default_grid_step(pot);
  const double raw_norm = radial_norm(state, step);
  const double scale = 1.0 / std::sqrt(raw_norm);
  state.alpha1 *= scale;
  state.gamma1 *= scale;
  state.beta2 *= scale;
  state.delta2 *= scale;
  state.norm_constant = scale;
  state.continuity_residual = continuity_residual(state);
  return state;
}

Quaternion eval_region1(double r, const RadialState& state) {
  if (!(r >= 0.0 && r <= state.potential.a)) throw DomainError("eval_region1: r outside [0, a]");
  return region1_unchecked(r, state);
}

Quaternion eval_region1_derivative(double r, const RadialState& s) {
  if (!(r >= 0.0 && r <= s.potential.a)) throw DomainError("eval_region1: r outside [0, a]");
  const double x = s.epsilon * r;
  return symplectic_join(s.epsilon * std::cos(x) * s.alpha1, s.epsilon * std::cosh(x) * s.gamma1);
}

Quaternion eval_region1_second_derivative(double r, const RadialState& s) {
  if (!(r >= 0.0 && r <= s.potential.a)) throw DomainError("eval_region1: r outside [0, a]");
  const double x = s.epsilon * r;
  return symplectic_join(-s.energy * std::sin(x) * s.alpha1, s.energy * std::sinh(x) * s.gamma1);
}

Quaternion eval_region2(double r, const RadialState& state) {
  if (!(r >= state.potential.a)) throw DomainError("eval_region2: r below the well radius");
  require_bound(state);
  return region2_unchecked(r, state);
}

Quaternion eval_region2_derivative(double r, const RadialState& state) {
  if (!(r >= state.potential.a)) throw DomainError("eval_region2: r below the well radius");
  require_bound(state);
  ExteriorAmplitudes amp = exterior_amplitudes(r, state);
  amp.minus *= -state.chardata.nu_minus;
  amp.plus *= -state.chardata.nu_plus;
  return combine_exterior(amp, state.chardata);
}

Quaternion eval_region2_second_derivative(double r, const RadialState& state) {
  if (!(r >= state.potential.a)) throw DomainError("eval_region2: r below the well radius");
  require_bound(state);
  ExteriorAmplitudes amp = exterior_amplitudes(r, state);
  amp.minus *= state.chardata.nu_minus * state.chardata.nu_minus;
  amp.plus *= state.chardata.nu_plus * state.chardata.nu_plus;
  return combine_exterior(amp, state.chardata);
}

Quaternion radial_value(double r, const RadialState& state) {
  if (r < 0.0) throw DomainError("radial_value: negative radius");
  return r <= state.potential.a ? eval_region1(r, state) : eval_region2(r, state);
}

double continuity_residual(const RadialState& state) {
  const double a = state.potential.a;
  const Quaternion in_value = eval_region1(a, state);
  const Quaternion out_value = eval_region2(a, state);
  const Quaternion in_slope = eval_region1_derivative(a, state);
  const Quaternion out_slope = eval_region2_derivative(a, state);
  // Derivatives are brought to value units with the fastest local rate.
  const double rate = std::max({state.epsilon, std::abs(state.chardata.nu_minus),
                                std::abs(state.chardata.nu_plus)});
  const double mismatch =
      std::max(norm(in_value - out_value), norm(in_slope - out_slope) / rate);
  const double scale = std::max({norm(in_value), norm(out_value), norm(in_slope) / rate,
                                 norm(out_slope) / rate});
  return scale > 0.0 ? mismatch / scale : mismatch;
}

double radial_norm(const RadialState& state, double grid_step) {
  if (!(grid_step > 0.0)) throw DomainError("radial_norm: grid step must be positive");
  const double a = state.potential.a;
  int intervals = static_cast<int>(std::ceil(a / grid_step));
  if (intervals % 2 != 0) ++intervals;
  intervals = std::max(intervals, 2);
  const double h = a / intervals;

  const double a1 = std::norm(state.alpha1);
  const double g1 = std::norm(state.gamma1);
  auto density = [&](double r) {
    const double x = state.epsilon * r;
    const double s = std::sin(x);
    const double sh = std::sinh(x);
    return s * s * a1 + sh * sh * g1;
  };
  double sum = density(0.0) + density(a);
  for (int n = 1; n < intervals; ++n) sum += (n % 2 == 1 ? 4.0 : 2.0) * density(n * h);
  const double interior = sum * h / 3.0;

  if (state.beta2 == Complex(0.0) && state.delta2 == Complex(0.0)) return interior;
  require_bound(state);
  // Each symplectic component is A exp(-nu_- t) + B exp(-nu_+ t), t = r - a.
  const CharacteristicData& cd = state.chardata;
  const Complex nm = cd.nu_minus;
  const Complex np = cd.nu_plus;
  auto tail = [&](Complex amp_minus, Complex amp_plus) {
    return std::norm(amp_minus) / (2.0 * nm.real()) + std::norm(amp_plus) / (2.0 * np.real()) +
           2.0 * (amp_minus * std::conj(amp_plus) / (nm + std::conj(np))).real();
  };
  const Complex b = std::exp(-nm * a) * state.beta2;
  const Complex d = std::exp(-np * a) * state.delta2;
  return interior + tail(b, cd.z * d) + tail(cd.w * b, d);
}

OdeResidual ode_residual(const RadialState& state, std::span<const double> r_samples, double h) {
  if (!(h > 0.0)) throw DomainError("ode_residual: step must be positive");
  const double a = state.potential.a;
  const Quaternion potential = state.potential.as_quaternion();
  const Quaternion energy_i{0.0, state.energy, 0.0, 0.0};
  double worst = 0.0;
  for (const double r : r_samples) {
    const bool inside = r <= a;
    auto value = [&](double t) {
      return inside ? region1_unchecked(t, state) : region2_unchecked(t, state);
    };
    const Quaternion u = value(r);
    const Quaternion u2 = (value(r + h) - 2.0 * u + value(r - h)) * (1.0 / (h * h));
    const Quaternion v = inside ? Quaternion{} : potential;
    const Quaternion residual = Quaternion::i() * u2 - v * u + u * energy_i;
    const double scale = norm(u2) + norm(v) * norm(u) + state.energy * norm(u);
    if (scale > 0.0) worst = std::max(worst, norm(residual) / scale);
  }
  return {worst, h};
}

std::vector<double> default_residual_samples(const RadialState& state, int n, double h) {
  const double a = state.potential.a;
  std::vector<double> samples;
  samples.reserve(2 * n);
  const double inner = a - 2.0 * h;
  for (int k = 1; k <= n; ++k) samples.push_back(inner * k / (n + 1.0));
  const double rate = std::min(state.chardata.nu_minus.real(), state.chardata.nu_plus.real());
  const double reach = 8.0 / rate;
  for (int k = 0; k < n; ++k) samples.push_back(a + 2.0 * h + reach * k / std::max(1, n - 1));
  return samples;
}

}  // namespace qwell
