#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qwell/commands.hpp"
#include "qwell/errors.hpp"
#include "qwell/quantization.hpp"
#include "qwell/radial.hpp"
#include "qwell/spectral.hpp"

namespace py = pybind11;
using namespace qwell;

namespace {

std::string repr(const Quaternion& q) {
  std::ostringstream out;
  out << "Quaternion(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
  return out.str();
}

// Renders any mode to text; settings use the CLI flag names without dashes.
std::string run_mode(const std::string& mode, const std::map<std::string, std::string>& settings) {
  RunConfig cfg;
  cfg.mode = parse_mode(mode);
  for (const auto& [key, value] : settings) apply_setting(cfg, key, value);
  const Document doc = run(cfg);
  return render(doc, cfg.format);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bound states of the quaternionic square well";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegenerateEnergyError>(m, "DegenerateEnergyError", domain.ptr());
  py::register_exception<UnsupportedRegimeError>(m, "UnsupportedRegimeError", domain.ptr());
  py::register_exception<EmptyWindowError>(m, "EmptyWindowError", domain.ptr());
  py::register_exception<NotARootError>(m, "NotARootError", domain.ptr());
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  py::class_<Quaternion>(m, "Quaternion")
      .def(py::init<double, double, double, double>(), py::arg("w") = 0.0, py::arg("x") = 0.0,
           py::arg("y") = 0.0, py::arg("z") = 0.0)
      .def_readwrite("w", &Quaternion::w)
      .def_readwrite("x", &Quaternion::x)
      .def_readwrite("y", &Quaternion::y)
      .def_readwrite("z", &Quaternion::z)
      .def_static("one", &Quaternion::one)
      .def_static("i", &Quaternion::i)
      .def_static("j", &Quaternion::j)
      .def_static("k", &Quaternion::k)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self * double())
      .def(double() * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("conjugate", [](const Quaternion& q) { return conjugate(q); })
      .def("norm", [](const Quaternion& q) { return norm(q); })
      .def("inverse", [](const Quaternion& q) { return inverse(q); })
      .def("split", [](const Quaternion& q) {
        const SymplecticPair p = symplectic_split(q);
        return py::make_tuple(p.c1, p.c2);
      })
      .def_static("join", [](Complex c1, Complex c2) { return symplectic_join(c1, c2); })
      .def("__iter__", [](const Quaternion& q) {
        return py::iter(py::make_tuple(q.w, q.x, q.y, q.z));
      })
      .def("__repr__", &repr);

  m.def("apply_automorphism", &apply_automorphism, py::arg("lam"), py::arg("u"));
  m.def(
      "canonicalize",
      [](double e1, double e2, double e3) {
        const CanonicalForm form = canonicalize({e1, e2, e3});
        return py::make_tuple(form.energy, form.u);
      },
      py::arg("e1"), py::arg("e2"), py::arg("e3"),
      "Returns (|lambda|, u) with conj(u) (i e1 + j e2 + k e3) u = i |lambda|.");

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init([](double v1, double v2, double v3, double a) {
             PotentialSpec p{v1, v2, v3, a};
             p.validate();
             return p;
           }),
           py::arg("v1"), py::arg("v2") = 0.0, py::arg("v3") = 0.0, py::arg("a") = 1.0)
      .def_static("from_kappas", &PotentialSpec::from_kappas, py::arg("kappa_c"), py::arg("kappa_q"),
                  py::arg("a") = 1.0, py::arg("phase") = 0.0)
      .def_readonly("v1", &PotentialSpec::v1)
      .def_readonly("v2", &PotentialSpec::v2)
      .def_readonly("v3", &PotentialSpec::v3)
      .def_readonly("a", &PotentialSpec::a)
      .def_property_readonly("kappa_c", &PotentialSpec::kappa_c)
      .def_property_readonly("kappa_q", &PotentialSpec::kappa_q)
      .def_property_readonly("quaternionic_threshold", &PotentialSpec::quaternionic_threshold)
      .def_property_readonly("total_threshold", &PotentialSpec::total_threshold);

  m.def(
      "characteristic_data",
      [](double energy, const PotentialSpec& pot) {
        const CharacteristicData cd = characteristic_data(energy, pot);
        py::dict out;
        out["nu_minus"] = cd.nu_minus;
        out["nu_plus"] = cd.nu_plus;
        out["w"] = cd.w;
        out["z"] = cd.z;
        out["regime"] = to_string(cd.regime);
        return out;
      },
      py::arg("energy"), py::arg("potential"));

  py::class_<RadialState>(m, "RadialState")
      .def_readonly("energy", &RadialState::energy)
      .def_readonly("alpha1", &RadialState::alpha1)
      .def_readonly("gamma1", &RadialState::gamma1)
      .def_readonly("beta2", &RadialState::beta2)
      .def_readonly("delta2", &RadialState::delta2)
      .def_readonly("norm_constant", &RadialState::norm_constant)
      .def("__call__", [](const RadialState& s, double r) { return radial_value(r, s); }, py::arg("r"))
      .def("norm", [](const RadialState& s) { return radial_norm(s, default_grid_step(s.potential)); })
      .def(
          "ode_residual",
          [](const RadialState& s, double h) {
            return ode_residual(s, default_residual_samples(s, 32, h), h).value;
          },
          py::arg("h") = 1e-4);

  m.def("solve_coefficients",
        [](double energy, const PotentialSpec& pot) { return solve_coefficients(energy, pot); },
        py::arg("energy"), py::arg("potential"));

  py::class_<QuantizationProblem>(m, "QuantizationProblem")
      .def(py::init([](double kc, double kq, double a, double phase) {
             QuantizationProblem p{kc, kq, a, phase};
             p.validate();
             return p;
           }),
           py::arg("kappa_c"), py::arg("kappa_q") = 0.0, py::arg("a") = 1.0, py::arg("phase") = 0.0)
      .def_static("from_potential", &QuantizationProblem::from_potential)
      .def_readonly("kappa_c", &QuantizationProblem::kappa_c)
      .def_readonly("kappa_q", &QuantizationProblem::kappa_q)
      .def_readonly("a", &QuantizationProblem::a)
      .def_readonly("phase", &QuantizationProblem::phase)
      .def_property_readonly("x_max", &QuantizationProblem::x_max)
      .def("energy", &QuantizationProblem::energy);

  py::class_<BoundState>(m, "BoundState")
      .def_readonly("index", &BoundState::index)
      .def_readonly("x", &BoundState::x)
      .def_readonly("energy", &BoundState::energy)
      .def_property_readonly("regime", [](const BoundState& s) { return to_string(s.regime); })
      .def_readonly("det_residual", &BoundState::det_residual)
      .def_readonly("continuity_residual", &BoundState::continuity_residual)
      .def_readonly("wavefunction", &BoundState::wavefunction);

  py::class_<BoundStateSet>(m, "BoundStateSet")
      .def_readonly("problem", &BoundStateSet::problem)
      .def_readonly("states", &BoundStateSet::states)
      .def_readonly("no_binding", &BoundStateSet::no_binding)
      .def_readonly("rejected", &BoundStateSet::rejected)
      .def_readonly("near_degenerate", &BoundStateSet::near_degenerate)
      .def_property_readonly("energies", [](const BoundStateSet& set) {
        std::vector<double> out;
        for (const auto& s : set.states) out.push_back(s.energy);
        return out;
      })
      .def("__len__", [](const BoundStateSet& set) { return set.states.size(); });

  auto scan = [](int grid, double refine_tol, double validate_tol) {
    ScanOptions opts;
    opts.grid = grid;
    opts.refine_tol = refine_tol;
    opts.validate_tol = validate_tol;
    return opts;
  };
  m.def(
      "find_bound_states",
      [scan](const QuantizationProblem& p, int grid, double refine_tol, double validate_tol) {
        return find_bound_states(p, scan(grid, refine_tol, validate_tol));
      },
      py::arg("problem"), py::arg("grid") = 0, py::arg("refine_tol") = 1e-12,
      py::arg("validate_tol") = 1e-8);
  m.def(
      "trial_complex_states",
      [scan](const QuantizationProblem& p, int grid) { return trial_complex_states(p, scan(grid, 1e-12, 1e-8)); },
      py::arg("problem"), py::arg("grid") = 0);
  m.def(
      "complex_limit_states",
      [scan](const QuantizationProblem& p, int grid) { return complex_limit_states(p, scan(grid, 1e-12, 1e-8)); },
      py::arg("problem"), py::arg("grid") = 0);
  m.def("trial_complex_kappa", &trial_complex_kappa, py::arg("problem"));

  m.def(
      "f_quantization",
      [](double x, const QuantizationProblem& p) {
        const FValue f = f_quantization(x, p);
        return py::make_tuple(f.value, f.imag_residue, f.pole);
      },
      py::arg("x"), py::arg("problem"), "Returns (f, relative imaginary residue, pole flag).");
  m.def("mismatch", &mismatch, py::arg("x"), py::arg("problem"));
  m.def("verify_determinant", py::overload_cast<double, const QuantizationProblem&>(&verify_determinant),
        py::arg("x"), py::arg("problem"));
  m.def(
      "reality_report",
      [](const QuantizationProblem& p, int n) {
        const RealityReport r = reality_report(p, n);
        py::dict out;
        out["samples"] = r.samples;
        out["max_relative_imag"] = r.max_relative_imag;
        out["max_abs_imag"] = r.max_abs_imag;
        out["max_zw_deviation"] = r.max_zw_deviation;
        return out;
      },
      py::arg("problem"), py::arg("samples") = 1000);

  m.def("run", &run_mode, py::arg("mode"), py::arg("settings") = std::map<std::string, std::string>{});
}
