#include "qwell/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qwell/errors.hpp"

namespace qwell {

namespace {

constexpr double kPoleFloor = 1e-300;
constexpr int kGridPerUnit = 4096;
constexpr int kMaxBisections = 200;

struct Sample {
  double x;
  double g;
};

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(const QuantizationProblem& prob, double lo, double hi, double g_lo, double tol) {
  for (int it = 0; it < kMaxBisections && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = mismatch(mid, prob);
    if (g_mid == 0.0) return mid;
    if (sign_of(g_mid) == sign_of(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> try_mismatch(double x, const QuantizationProblem& prob) {
  try {
    return mismatch(x, prob);
  } catch (const DegenerateEnergyError&) {
    return std::nullopt;
  }
}

}  // namespace

QuantizationProblem QuantizationProblem::from_potential(const PotentialSpec& pot) {
  pot.validate();
  return {pot.kappa_c(), pot.kappa_q(), pot.a, pot.phase()};
}

double QuantizationProblem::x_max() const {
  return std::sqrt(std::hypot(kappa_c * kappa_c, kappa_q * kappa_q));
}

PotentialSpec QuantizationProblem::scaled_potential() const {
  return PotentialSpec::from_kappas(kappa_c, kappa_q, 1.0, phase);
}

PotentialSpec QuantizationProblem::physical_potential() const {
  return PotentialSpec::from_kappas(kappa_c, kappa_q, a, phase);
}

void QuantizationProblem::validate() const {
  if (!std::isfinite(kappa_c) || !std::isfinite(kappa_q) || !std::isfinite(a) ||
      !std::isfinite(phase)) {
    throw DomainError("quantization problem: non-finite parameter");
  }
  if (kappa_c < 0.0 || kappa_q < 0.0) throw DomainError("quantization problem: negative kappa");
  if (a <= 0.0) throw DomainError("quantization problem: well radius must be positive");
}

QuantizationTerms quantization_terms(double x, const QuantizationProblem& prob) {
  if (!(x > 0.0 && x < prob.x_max())) throw DomainError("quantization: x outside (0, x_max)");
  if (prob.kappa_q > 0.0 && std::abs(x - prob.kappa_q) < kDegenerateXBand) {
    throw DegenerateEnergyError("quantization: x inside the kappa_q band");
  }
  const CharacteristicData cd = characteristic_data(x * x, prob.scaled_potential());
  const Complex zw = cd.z * cd.w;
  const Complex one_minus = 1.0 - zw;
  const double th = std::tanh(x);
  QuantizationTerms t;
  t.num = (cd.nu_plus - zw * cd.nu_minus) * th + one_minus * x;
  t.den = cd.nu_minus * cd.nu_plus * one_minus * th + (cd.nu_minus - zw * cd.nu_plus) * x;
  t.num_conj_den = t.num * std::conj(t.den);
  t.den_norm2 = std::norm(t.den);
  return t;
}

FValue f_quantization(double x, const QuantizationProblem& prob) {
  const QuantizationTerms t = quantization_terms(x, prob);
  FValue out;
  if (std::abs(t.den) < kPoleFloor) {
    out.pole = true;
    return out;
  }
  const Complex f = -x * t.num_conj_den / t.den_norm2;
  out.value = f.real();
  out.imag_residue = std::abs(f.imag()) / (std::abs(f.real()) + 1.0);
  return out;
}

double mismatch(double x, const QuantizationProblem& prob) {
  const QuantizationTerms t = quantization_terms(x, prob);
  return std::sin(x) * t.den_norm2 + x * std::cos(x) * t.num_conj_den.real();
}

int default_scan_grid(const QuantizationProblem& prob) {
  return std::max(16, static_cast<int>(std::ceil(kGridPerUnit * prob.x_max() / std::numbers::pi)));
}

double verify_determinant(double x, const QuantizationProblem& prob) {
  return determinant_residual(x * x, prob.scaled_potential());
}

double verify_determinant(const BoundState& state, const QuantizationProblem& prob) {
  return verify_determinant(state.x, prob);
}

BoundStateSet find_bound_states(const QuantizationProblem& prob, const ScanOptions& options) {
  prob.validate();
  BoundStateSet result;
  result.problem = prob;
  if (prob.kappa_c == 0.0) {
    result.no_binding = true;
    return result;
  }

  const double lo = options.edge;
  const double hi = prob.x_max() - options.edge;
  const int grid = options.grid > 0 ? options.grid : default_scan_grid(prob);
  const double step = (hi - lo) / grid;
  result.scan_resolution = step;

  const bool has_band = prob.kappa_q > lo && prob.kappa_q < hi;
  const double band_lo = prob.kappa_q - kDegenerateXBand * (1.0 + 1e-6);
  const double band_hi = prob.kappa_q + kDegenerateXBand * (1.0 + 1e-6);

  std::vector<double> xs;
  xs.reserve(grid + 3);
  for (int n = 0; n <= grid; ++n) {
    const double x = n == grid ? hi : lo + n * step;
    if (has_band && x > band_lo && x < band_hi) continue;
    xs.push_back(x);
  }
  if (has_band) {
    xs.push_back(band_lo);
    xs.push_back(band_hi);
    std::sort(xs.begin(), xs.end());
  }

  std::vector<Sample> samples;
  samples.reserve(xs.size());
  for (const double x : xs) {
    if (const auto g = try_mismatch(x, prob)) samples.push_back({x, *g});
  }

  std::vector<double> candidates;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const Sample& cur = samples[n];
    if (cur.g == 0.0) {
      candidates.push_back(cur.x);
      continue;
    }
    if (n == 0) continue;
    const Sample& prev = samples[n - 1];
    if (prev.g == 0.0 || sign_of(prev.g) == sign_of(cur.g)) continue;
    if (has_band && prev.x == band_lo && cur.x == band_hi) {
      result.near_degenerate.push_back(prob.kappa_q);
      continue;
    }
    candidates.push_back(bisect(prob, prev.x, cur.x, prev.g, options.refine_tol));
  }

  const PotentialSpec physical = prob.physical_potential();
  SolveOptions solve;
  solve.validate_tol = options.validate_tol;
  for (const double x : candidates) {
    const double det = verify_determinant(x, prob);
    if (!(det < options.validate_tol)) {
      result.rejected.push_back(x);
      continue;
    }
    BoundState state;
    try {
      state.wavefunction = solve_coefficients(prob.energy(x), physical, solve);
    } catch (const DomainError&) {
      result.rejected.push_back(x);
      continue;
    }
    if (!(state.wavefunction.continuity_residual < options.validate_tol)) {
      result.rejected.push_back(x);
      continue;
    }
    state.x = x;
    state.energy = prob.energy(x);
    state.regime = prob.regime(x);
    state.det_residual = det;
    state.continuity_residual = state.wavefunction.continuity_residual;
    state.index = static_cast<int>(result.states.size());
    result.states.push_back(std::move(state));
  }
  return result;
}

double trial_complex_kappa(const QuantizationProblem& prob) { return prob.x_max(); }

BoundStateSet trial_complex_states(const QuantizationProblem& prob, const ScanOptions& options) {
  return find_bound_states({trial_complex_kappa(prob), 0.0, prob.a, 0.0}, options);
}

BoundStateSet complex_limit_states(const QuantizationProblem& prob, const ScanOptions& options) {
  return find_bound_states({prob.kappa_c, 0.0, prob.a, 0.0}, options);
}

RealityReport reality_report(const QuantizationProblem& prob, int n_samples) {
  prob.validate();
  if (n_samples < 1) throw DomainError("reality_report: need at least one sample");
  const double window = std::min(prob.kappa_q, prob.x_max());
  if (!(window > 0.0)) throw EmptyWindowError("reality_report: empty below-threshold window");

  const PotentialSpec scaled = prob.scaled_potential();
  RealityReport report;
  for (int k = 0; k < n_samples; ++k) {
    const double x = window * (k + 0.5) / n_samples;
    QuantizationTerms t;
    try {
      t = quantization_terms(x, prob);
    } catch (const DegenerateEnergyError&) {
      continue;
    }
    const auto [w, z] = symplectic_factors(x * x, scaled);
    const double imag = std::abs(t.num_conj_den.imag());
    report.max_abs_imag = std::max(report.max_abs_imag, imag);
    report.max_relative_imag =
        std::max(report.max_relative_imag, imag / (std::abs(t.num_conj_den) + 1.0));
    report.max_zw_deviation = std::max(report.max_zw_deviation, std::abs(std::abs(z * w) - 1.0));
    ++report.samples;
  }
  return report;
}

}  // namespace qwell
