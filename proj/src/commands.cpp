#include "qwell/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "qwell/errors.hpp"
#include "qwell/spectral.hpp"

namespace qwell {

namespace {

using nlohmann::json;

constexpr double kDefaultValidateTol = 1e-8;
constexpr double kDefaultRealityTol = 1e-10;
constexpr int kDefaultCurveGrid = 2000;
constexpr std::uint64_t kVerifySeed = 20070515;

double parse_double(std::string_view key, std::string_view text) {
  const std::string owned(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(owned, &used);
    if (used != owned.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + std::string(key) + ": '" + owned + "'");
  }
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid integer for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

ScanOptions scan_options(const RunConfig& config) {
  ScanOptions opts;
  opts.refine_tol = config.refine_tol;
  opts.validate_tol = config.validate_tol.value_or(kDefaultValidateTol);
  if (config.mode != Mode::Curves) opts.grid = config.grid;
  return opts;
}

json complex_pair(const Complex& c) { return json::array({c.real(), c.imag()}); }

json config_json(const RunConfig& config, const QuantizationProblem& prob) {
  const PotentialSpec pot = prob.physical_potential();
  json j;
  j["mode"] = to_string(config.mode);
  j["kappa_c"] = prob.kappa_c;
  j["kappa_q"] = prob.kappa_q;
  j["a"] = prob.a;
  j["phase"] = prob.phase;
  j["v1"] = pot.v1;
  j["v2"] = pot.v2;
  j["v3"] = pot.v3;
  j["refine_tol"] = config.refine_tol;
  j["validate_tol"] = config.validate_tol.value_or(
      config.mode == Mode::Verify ? kDefaultRealityTol : kDefaultValidateTol);
  j["grid"] = config.grid;
  j["format"] = config.format == OutputFormat::Json ? "json" : "csv";
  return j;
}

json spectrum_json(const BoundStateSet& set) {
  json levels = json::array();
  for (const BoundState& s : set.states) {
    levels.push_back({{"index", s.index}, {"x", s.x}, {"energy", s.energy},
                      {"regime", to_string(s.regime)}});
  }
  return {{"kappa_c", set.problem.kappa_c},
          {"kappa_q", set.problem.kappa_q},
          {"count", set.states.size()},
          {"levels", levels}};
}

json scan_diagnostics(const BoundStateSet& set) {
  return {{"scan_resolution", set.scan_resolution},
          {"rejected", set.rejected},
          {"near_degenerate", set.near_degenerate},
          {"no_binding", set.no_binding}};
}

Cell number_or_empty(const std::vector<BoundState>& states, std::size_t n, double BoundState::*field) {
  if (n >= states.size()) return std::monostate{};
  return states[n].*field;
}

// Direct bisection of tan(x) = -x / sqrt(kc^2 - x^2) in its pole-free form.
std::vector<double> complex_well_roots(double kappa_c, int grid) {
  auto g = [kappa_c](double x) {
    return std::sin(x) * std::sqrt(kappa_c * kappa_c - x * x) + x * std::cos(x);
  };
  std::vector<double> roots;
  const double lo = 1e-6;
  const double hi = kappa_c - 1e-6;
  const double step = (hi - lo) / grid;
  double x0 = lo;
  double g0 = g(x0);
  for (int n = 1; n <= grid; ++n) {
    const double x1 = lo + n * step;
    const double g1 = g(x1);
    if ((g0 < 0.0) != (g1 < 0.0)) {
      double a = x0, b = x1, ga = g0;
      for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    g0 = g1;
  }
  return roots;
}

struct Check {
  std::string name;
  double measured;
  double threshold;
  json detail = json::object();
};

double max_root_shift(const std::vector<BoundState>& lhs, const std::vector<double>& rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t n = 0; n < lhs.size(); ++n) worst = std::max(worst, std::abs(lhs[n].x - rhs[n]));
  return worst;
}

}  // namespace

Mode parse_mode(std::string_view name) {
  if (name == "solve") return Mode::Solve;
  if (name == "compare") return Mode::Compare;
  if (name == "curves") return Mode::Curves;
  if (name == "verify") return Mode::Verify;
  throw UsageError("unknown mode '" + std::string(name) + "'");
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Solve: return "solve";
    case Mode::Compare: return "compare";
    case Mode::Curves: return "curves";
    case Mode::Verify: return "verify";
  }
  return "unknown";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw UsageError("unknown format '" + std::string(name) + "'");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  if (key == "kappa-c") config.kappa_c = parse_double(key, value);
  else if (key == "kappa-q") config.kappa_q = parse_double(key, value);
  else if (key == "v1") config.v1 = parse_double(key, value);
  else if (key == "v2") config.v2 = parse_double(key, value);
  else if (key == "v3") config.v3 = parse_double(key, value);
  else if (key == "a") config.a = parse_double(key, value);
  else if (key == "grid") config.grid = parse_int(key, value);
  else if (key == "refine-tol") config.refine_tol = parse_double(key, value);
  else if (key == "validate-tol") config.validate_tol = parse_double(key, value);
  else if (key == "format") config.format = parse_format(value);
  else if (key == "output") config.output_path = std::string(value);
  else if (key == "mode") config.mode = parse_mode(value);
  else throw UsageError("unknown setting '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view line =
        trim(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

QuantizationProblem resolve_problem(const RunConfig& config) {
  const bool has_kappa = config.kappa_c.has_value() || config.kappa_q.has_value();
  const bool has_potential = config.v1.has_value() || config.v2.has_value() || config.v3.has_value();
  if (has_kappa && has_potential) {
    throw UsageError("give either --kappa-c/--kappa-q or --v1/--v2/--v3, not both");
  }
  if (!(config.a > 0.0)) throw UsageError("--a must be positive");
  if (!(config.refine_tol > 0.0)) throw UsageError("--refine-tol must be positive");
  if (config.validate_tol && !(*config.validate_tol > 0.0)) {
    throw UsageError("--validate-tol must be positive");
  }
  if (config.grid < 0) throw UsageError("--grid must be non-negative");

  QuantizationProblem prob;
  if (has_kappa) {
    if (!config.kappa_c) throw UsageError("--kappa-c is required with --kappa-q");
    prob = {*config.kappa_c, config.kappa_q.value_or(0.0), config.a, 0.0};
  } else if (has_potential) {
    if (!config.v1) throw UsageError("--v1 is required with --v2/--v3");
    const PotentialSpec pot{*config.v1, config.v2.value_or(0.0), config.v3.value_or(0.0), config.a};
    try {
      prob = QuantizationProblem::from_potential(pot);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  } else if (config.mode == Mode::Verify) {
    prob = {5.0 * std::numbers::pi, 2.5 * std::numbers::pi, config.a, 0.0};
  } else {
    throw UsageError("a well is required: --kappa-c [--kappa-q] or --v1 [--v2 --v3]");
  }
  try {
    prob.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return prob;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string render(const Document& doc, OutputFormat format) {
  if (format == OutputFormat::Json) return doc.json.dump(2) + "\n";
  std::ostringstream out;
  for (std::size_t n = 0; n < doc.header.size(); ++n) out << (n ? "," : "") << doc.header[n];
  out << '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t n = 0; n < row.size(); ++n) {
      if (n) out << ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) out << format_number(v);
            else if constexpr (std::is_same_v<T, long long>) out << v;
            else if constexpr (std::is_same_v<T, std::string>) out << v;
          },
          row[n]);
    }
    out << '\n';
  }
  return out.str();
}

Document run_solve(const RunConfig& config) {
  const QuantizationProblem prob = resolve_problem(config);
  const BoundStateSet set = find_bound_states(prob, scan_options(config));

  Document doc;
  doc.header = {"index", "x", "energy", "regime", "det_residual", "continuity_residual",
                "alpha1_re", "alpha1_im", "gamma1_re", "gamma1_im", "beta2_re", "beta2_im",
                "delta2_re", "delta2_im", "norm_constant"};
  json states = json::array();
  for (const BoundState& s : set.states) {
    const RadialState& wf = s.wavefunction;
    states.push_back({{"index", s.index},
                      {"x", s.x},
                      {"energy", s.energy},
                      {"regime", to_string(s.regime)},
                      {"det_residual", s.det_residual},
                      {"continuity_residual", s.continuity_residual},
                      {"coefficients",
                       {{"alpha1", complex_pair(wf.alpha1)},
                        {"gamma1", complex_pair(wf.gamma1)},
                        {"beta2", complex_pair(wf.beta2)},
                        {"delta2", complex_pair(wf.delta2)}}},
                      {"norm_constant", wf.norm_constant}});
    doc.rows.push_back({static_cast<long long>(s.index), s.x, s.energy, std::string(to_string(s.regime)),
                        s.det_residual, s.continuity_residual, wf.alpha1.real(), wf.alpha1.imag(),
                        wf.gamma1.real(), wf.gamma1.imag(), wf.beta2.real(), wf.beta2.imag(),
                        wf.delta2.real(), wf.delta2.imag(), wf.norm_constant});
  }
  doc.json["config"] = config_json(config, prob);
  doc.json["results"] = {{"states", states},
                         {"count", set.states.size()},
                         {"no_bound_states", set.states.empty()}};
  doc.json["diagnostics"] = scan_diagnostics(set);
  return doc;
}

Document run_compare(const RunConfig& config) {
  const QuantizationProblem prob = resolve_problem(config);
  const ScanOptions opts = scan_options(config);
  const BoundStateSet complex_set = complex_limit_states(prob, opts);
  const BoundStateSet quaternionic = find_bound_states(prob, opts);
  const BoundStateSet trial = trial_complex_states(prob, opts);

  Document doc;
  doc.header = {"level", "complex_x", "complex_energy", "quaternionic_x", "quaternionic_energy",
                "trial_x", "trial_energy"};
  const std::size_t levels =
      std::max({complex_set.states.size(), quaternionic.states.size(), trial.states.size()});
  json table = json::array();
  auto energy_or_null = [](const BoundStateSet& set, std::size_t n) -> json {
    return n < set.states.size() ? json(set.states[n].energy) : json(nullptr);
  };
  for (std::size_t n = 0; n < levels; ++n) {
    table.push_back({{"level", n},
                     {"complex_energy", energy_or_null(complex_set, n)},
                     {"quaternionic_energy", energy_or_null(quaternionic, n)},
                     {"trial_energy", energy_or_null(trial, n)}});
    doc.rows.push_back({static_cast<long long>(n),
                        number_or_empty(complex_set.states, n, &BoundState::x),
                        number_or_empty(complex_set.states, n, &BoundState::energy),
                        number_or_empty(quaternionic.states, n, &BoundState::x),
                        number_or_empty(quaternionic.states, n, &BoundState::energy),
                        number_or_empty(trial.states, n, &BoundState::x),
                        number_or_empty(trial.states, n, &BoundState::energy)});
  }
  doc.json["config"] = config_json(config, prob);
  doc.json["results"] = {{"complex", spectrum_json(complex_set)},
                         {"quaternionic", spectrum_json(quaternionic)},
                         {"trial_complex", spectrum_json(trial)},
                         {"trial_kappa", trial_complex_kappa(prob)},
                         {"table", table}};
  doc.json["diagnostics"] = {{"complex", scan_diagnostics(complex_set)},
                             {"quaternionic", scan_diagnostics(quaternionic)},
                             {"trial_complex", scan_diagnostics(trial)}};
  return doc;
}

Document run_curves(const RunConfig& config) {
  const QuantizationProblem prob = resolve_problem(config);
  const QuantizationProblem complex_well{prob.kappa_c, 0.0, prob.a, 0.0};
  const QuantizationProblem trial_well{trial_complex_kappa(prob), 0.0, prob.a, 0.0};
  const int grid = config.grid > 0 ? config.grid : kDefaultCurveGrid;
  const double lo = 1e-6;
  const double hi = prob.x_max() - 1e-6;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto safe_f = [nan](double x, const QuantizationProblem& p, bool& flagged) {
    if (!(x < p.x_max())) return nan;
    try {
      const FValue f = f_quantization(x, p);
      if (f.pole) {
        flagged = true;
        return nan;
      }
      return f.value;
    } catch (const DegenerateEnergyError&) {
      flagged = true;
      return nan;
    }
  };

  Document doc;
  doc.header = {"x", "tan", "f_quaternionic", "f_complex", "f_trial", "G"};
  json xs = json::array(), tans = json::array(), fq = json::array(), fc = json::array(),
       ft = json::array(), gs = json::array(), markers = json::array();
  for (int n = 0; n < grid; ++n) {
    const double x = grid == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * n / (grid - 1);
    std::string marker;
    const double raw_tan = std::tan(x);
    const double tan_value = std::clamp(raw_tan, -kTanClip, kTanClip);
    if (std::abs(raw_tan) > kTanClip) marker = "pole";
    bool degenerate = false;
    const double f_q = safe_f(x, prob, degenerate);
    bool ignored = false;
    const double f_c = safe_f(x, complex_well, ignored);
    const double f_t = safe_f(x, trial_well, ignored);
    double g = nan;
    try {
      g = mismatch(x, prob);
    } catch (const DegenerateEnergyError&) {
      degenerate = true;
    }
    if (degenerate) marker = "degenerate";
    xs.push_back(x);
    tans.push_back(tan_value);
    fq.push_back(f_q);
    fc.push_back(f_c);
    ft.push_back(f_t);
    gs.push_back(g);
    markers.push_back(marker);
    doc.rows.push_back({x, tan_value, f_q, f_c, f_t, g});
  }
  doc.json["config"] = config_json(config, prob);
  doc.json["results"] = {{"columns", doc.header},
                         {"x", xs},
                         {"tan", tans},
                         {"f_quaternionic", fq},
                         {"f_complex", fc},
                         {"f_trial", ft},
                         {"G", gs},
                         {"markers", markers}};
  doc.json["diagnostics"] = {{"samples", grid},
                             {"tan_clip", kTanClip},
                             {"trial_kappa", trial_complex_kappa(prob)}};
  return doc;
}

Document run_verify(const RunConfig& config) {
  const QuantizationProblem prob = resolve_problem(config);
  const double reality_tol = config.validate_tol.value_or(kDefaultRealityTol);
  std::mt19937_64 rng(kVerifySeed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> positive(0.0, 1.0);
  std::vector<Check> checks;

  auto random_quaternion = [&] { return Quaternion{unit(rng), unit(rng), unit(rng), unit(rng)}; };
  {
    double assoc = 0.0, multiplicative = 0.0, symplectic = 0.0;
    for (int n = 0; n < 20000; ++n) {
      const Quaternion p = random_quaternion(), q = random_quaternion(), r = random_quaternion();
      const Quaternion lhs = (p * q) * r;
      const Quaternion rhs = p * (q * r);
      assoc = std::max(assoc, norm(lhs - rhs));
      multiplicative =
          std::max(multiplicative, std::abs(norm(p * q) - norm(p) * norm(q)) / (norm(p) * norm(q)));
      const Quaternion via_pairs =
          symplectic_join(symplectic_multiply(symplectic_split(p), symplectic_split(q)));
      symplectic = std::max(symplectic, norm(via_pairs - p * q));
    }
    checks.push_back({"quaternion_associativity", assoc, 1e-12});
    checks.push_back({"norm_multiplicativity", multiplicative, 1e-12});
    checks.push_back({"symplectic_product_law", symplectic, 1e-13});
  }
  {
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
      ImaginaryEigenvalue lambda{10.0 * unit(rng), 10.0 * unit(rng), 10.0 * unit(rng)};
      if (n % 10 == 0) lambda = {-std::abs(lambda.e1) - 1.0, 0.0, 0.0};
      const CanonicalForm form = canonicalize(lambda);
      const Quaternion image = conjugate(form.u) * lambda.as_quaternion() * form.u;
      const double err = norm(image - Quaternion{0.0, form.energy, 0.0, 0.0});
      worst = std::max(worst, err / std::max(1.0, form.energy));
    }
    checks.push_back({"canonicalization", worst, 1e-12});
  }
  {
    double quartic = 0.0, conjugate_gap = 0.0, unit_zw = 0.0, mid_law = 0.0;
    int below = 0, mid = 0;
    for (int n = 0; n < 10000; ++n) {
      const PotentialSpec pot{0.1 + 50.0 * positive(rng), 50.0 * unit(rng), 50.0 * unit(rng), 1.0};
      const double energy = pot.total_threshold() * (0.001 + 0.998 * positive(rng));
      if (is_degenerate_energy(energy, pot)) continue;
      const CharacteristicData cd = characteristic_data(energy, pot);
      quartic = std::max({quartic, quartic_residual(cd.nu_minus, energy, pot),
                          quartic_residual(cd.nu_plus, energy, pot)});
      const Complex zw = cd.z * cd.w;
      if (cd.regime == Regime::BelowQ) {
        ++below;
        conjugate_gap = std::max(conjugate_gap, std::abs(cd.nu_plus - std::conj(cd.nu_minus)));
        unit_zw = std::max(unit_zw, std::abs(std::abs(zw) - 1.0));
      } else {
        ++mid;
        const double m2 = pot.v2 * pot.v2 + pot.v3 * pot.v3;
        const double s = std::sqrt(energy * energy - m2);
        const double expected = m2 / ((energy + s) * (energy + s));
        double err = std::abs(zw - expected);
        if (!(zw.real() > 0.0 && zw.real() <= 1.0 + 1e-15)) err = std::max(err, 1.0);
        mid_law = std::max(mid_law, err);
      }
    }
    checks.push_back({"quartic_residual", quartic, 1e-10});
    checks.push_back({"below_threshold_conjugate_pair", conjugate_gap, 0.0, {{"samples", below}}});
    checks.push_back({"below_threshold_unit_zw", unit_zw, 1e-12, {{"samples", below}}});
    checks.push_back({"mid_regime_zw_law", mid_law, 1e-12, {{"samples", mid}}});
  }
  {
    const QuantizationProblem target =
        prob.kappa_q > 0.0 ? prob
                           : QuantizationProblem{5.0 * std::numbers::pi, 2.5 * std::numbers::pi,
                                                 prob.a, 0.0};
    const RealityReport report = reality_report(target, 1000);
    checks.push_back({"reality_num_conj_den", report.max_relative_imag, reality_tol,
                      {{"max_abs_imag_num_conj_den", report.max_abs_imag},
                       {"max_zw_deviation", report.max_zw_deviation},
                       {"samples", report.samples},
                       {"kappa_c", target.kappa_c},
                       {"kappa_q", target.kappa_q}}});
  }

  ScanOptions opts = scan_options(config);
  opts.validate_tol = kDefaultValidateTol;
  const BoundStateSet base = find_bound_states(prob, opts);
  {
    double worst = 0.0;
    for (const BoundState& s : base.states) {
      worst = std::max({worst, s.det_residual, s.continuity_residual});
    }
    checks.push_back({"bound_state_validation", worst, 1e-8, {{"count", base.states.size()}}});
  }
  {
    double worst = 0.0;
    std::vector<double> reference;
    for (const BoundState& s : base.states) reference.push_back(s.x);
    for (int n = 0; n < 3; ++n) {
      QuantizationProblem rotated = prob;
      rotated.phase = std::numbers::pi * unit(rng);
      worst = std::max(worst, max_root_shift(find_bound_states(rotated, opts).states, reference));
    }
    checks.push_back({"phase_rotation_invariance", worst, 1e-10});
  }
  {
    const QuantizationProblem complex_well{prob.kappa_c, 0.0, prob.a, 0.0};
    const BoundStateSet pipeline = find_bound_states(complex_well, opts);
    const std::vector<double> direct = complex_well_roots(prob.kappa_c, default_scan_grid(complex_well));
    checks.push_back({"complex_limit_equivalence", max_root_shift(pipeline.states, direct), 1e-10,
                      {{"count", direct.size()}}});
  }

  Document doc;
  doc.header = {"property", "passed", "measured", "threshold"};
  json properties = json::array();
  bool all_passed = true;
  for (const Check& c : checks) {
    const bool passed = c.measured <= c.threshold;
    all_passed = all_passed && passed;
    json entry = {{"name", c.name}, {"passed", passed}, {"measured", c.measured},
                  {"threshold", c.threshold}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    properties.push_back(entry);
    doc.rows.push_back({c.name, std::string(passed ? "true" : "false"), c.measured, c.threshold});
  }
  doc.exit_code = all_passed ? 0 : 1;
  doc.json["config"] = config_json(config, prob);
  doc.json["results"] = {{"properties", properties}, {"all_passed", all_passed}};
  doc.json["diagnostics"] = {{"seed", kVerifySeed}, {"reality_tolerance", reality_tol}};
  return doc;
}

Document run(const RunConfig& config) {
  switch (config.mode) {
    case Mode::Solve: return run_solve(config);
    case Mode::Compare: return run_compare(config);
    case Mode::Curves: return run_curves(config);
    case Mode::Verify: return run_verify(config);
  }
  throw UsageError("unknown mode");
}

}  // namespace qwell
