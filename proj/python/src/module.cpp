#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floqlab/effective.hpp"
#include "floqlab/errors.hpp"
#include "floqlab/evolve.hpp"
#include "floqlab/floquet.hpp"
#include "floqlab/harness.hpp"
#include "floqlab/linalg.hpp"
#include "floqlab/model.hpp"

namespace py = pybind11;
using namespace floqlab;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

py::array_t<Complex> to_numpy(const ComplexMatrix& m) {
  py::array_t<Complex> out({m.rows(), m.cols()});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return out;
}

py::array_t<Complex> to_numpy(const CVector& v) {
  py::array_t<Complex> out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ComplexMatrix from_numpy(const CArray& a) {
  if (a.ndim() != 2) throw DomainError("expected a 2-d array");
  ComplexMatrix m(a.shape(0), a.shape(1));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

CVector vector_from_numpy(const CArray& a) {
  if (a.ndim() != 1) throw DomainError("expected a 1-d array");
  return CVector(a.data(), a.data() + a.shape(0));
}

py::tuple eigen_tuple(const EigenDecomposition& e) {
  ComplexMatrix vecs(e.eigenvectors.empty() ? 0 : e.eigenvectors[0].size(), e.size());
  for (std::size_t k = 0; k < e.size(); ++k) vecs.set_column(k, e.eigenvectors[k]);
  return py::make_tuple(to_numpy(e.eigenvalues), to_numpy(vecs));
}

PropagationSettings settings_for(int steps_per_period) {
  PropagationSettings s;
  s.steps_per_period = steps_per_period;
  return s;
}

}  // namespace

PYBIND11_MODULE(_floqlab, m) {
  m.doc() = "Driven tight-binding chains: propagation, Floquet spectra, effective model";

  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      py::set_error(domain_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  // linalg
  m.def("hermitian_eigen", [](const CArray& a) { return eigen_tuple(hermitian_eigen(from_numpy(a))); },
        "Ascending eigenvalues and column eigenvectors of a Hermitian matrix.");
  m.def("unitary_eigen", [](const CArray& a) { return eigen_tuple(unitary_eigen(from_numpy(a))); },
        "Unit-modulus eigenvalues (ascending phase) and column eigenvectors of a unitary matrix.");
  m.def("tridiag_det_sequence", &tridiag_det_sequence, py::arg("v_eff"), py::arg("v"), py::arg("n_max"));

  // model
  py::class_<DrivenSystem>(m, "DrivenSystem")
      .def(py::init<int, double, double, double, std::vector<int>>(), py::arg("n"), py::arg("v"),
           py::arg("amplitude"), py::arg("omega"), py::arg("drive_signs"))
      .def_property_readonly("n", &DrivenSystem::n)
      .def_property_readonly("v", &DrivenSystem::v)
      .def_property_readonly("amplitude", &DrivenSystem::amplitude)
      .def_property_readonly("omega", &DrivenSystem::omega)
      .def_property_readonly("period", &DrivenSystem::period)
      .def_property_readonly("ratio", &DrivenSystem::ratio)
      .def_property_readonly("drive_signs", &DrivenSystem::drive_signs)
      .def("__repr__", [](const DrivenSystem& s) {
        return "DrivenSystem(n=" + std::to_string(s.n()) + ", v=" + std::to_string(s.v()) +
               ", amplitude=" + std::to_string(s.amplitude()) + ", omega=" + std::to_string(s.omega()) + ")";
      });
  m.def("canonical_system", &canonical_system, py::arg("n"), py::arg("v"), py::arg("amplitude"), py::arg("omega"));
  m.def("hamiltonian_at", [](const DrivenSystem& s, double t) { return to_numpy(hamiltonian_at(s, t)); },
        py::arg("system"), py::arg("t"));

  // evolve
  m.def(
      "propagate",
      [](const DrivenSystem& s, const CArray& initial, double t0, double t1, int spp) {
        const Trajectory tr = propagate(s, StateVector(vector_from_numpy(initial)), t0, t1, settings_for(spp));
        py::array_t<double> pops({tr.populations.size(), static_cast<std::size_t>(s.n())});
        auto r = pops.mutable_unchecked<2>();
        for (std::size_t i = 0; i < tr.populations.size(); ++i)
          for (int j = 0; j < s.n(); ++j) r(i, j) = tr.populations[i][j];
        py::dict d;
        d["times"] = py::array_t<double>(tr.times.size(), tr.times.data());
        d["populations"] = pops;
        d["final_state"] = to_numpy(tr.states.back());
        d["max_norm_drift"] = tr.max_norm_drift;
        return d;
      },
      py::arg("system"), py::arg("initial"), py::arg("t0"), py::arg("t1"), py::arg("steps_per_period") = 2000);
  m.def(
      "min_population",
      [](const DrivenSystem& s, int site, int periods, int spp) {
        const auto r = sampled_min_population(s, StateVector::basis(s.n(), 0), site, periods, settings_for(spp));
        return py::make_tuple(r.min_population, r.time_of_min, r.max_norm_drift);
      },
      py::arg("system"), py::arg("site") = 0, py::arg("periods") = 400, py::arg("steps_per_period") = 2000,
      "(min |c_site|^2, time of min, norm drift) starting from site 1.");
  m.def(
      "monodromy", [](const DrivenSystem& s, int spp) { return to_numpy(monodromy(s, settings_for(spp))); },
      py::arg("system"), py::arg("steps_per_period") = 2000);

  // floquet
  py::class_<FloquetMode>(m, "FloquetMode")
      .def_readonly("quasi_energy", &FloquetMode::quasi_energy)
      .def_property_readonly("eigenvector", [](const FloquetMode& f) { return to_numpy(f.eigenvector); })
      .def_readonly("avg_populations", &FloquetMode::avg_populations);
  m.def("fold_quasi_energy", &fold_quasi_energy, py::arg("eps"), py::arg("omega"));
  m.def(
      "floquet_spectrum",
      [](const DrivenSystem& s, int spp) { return floquet_spectrum(s, settings_for(spp)).modes; },
      py::arg("system"), py::arg("steps_per_period") = 2000, "Modes sorted by ascending quasi-energy.");
  m.def(
      "dark_mode",
      [](const DrivenSystem& s, double eps_tol, double pop_tol, int spp) -> std::optional<FloquetMode> {
        const auto spec = floquet_spectrum(s, settings_for(spp));
        const auto d = eps_tol > 0.0 ? dark_mode(spec, eps_tol, pop_tol) : dark_mode(spec);
        return d.mode;
      },
      py::arg("system"), py::arg("eps_tol") = 0.0, py::arg("pop_tol") = 0.02, py::arg("steps_per_period") = 2000,
      "The unique zero quasi-energy mode with empty even sites, or None. eps_tol <= 0 uses 1e-4 * omega.");

  // effective
  m.def("bessel_j0", &bessel_j0, py::arg("x"));
  m.def("effective_matrix", [](int n, double v, double v_eff) { return to_numpy(effective_matrix(n, v, v_eff)); },
        py::arg("n"), py::arg("v"), py::arg("v_eff"));
  m.def(
      "dark_state_closed_form",
      [](int n, double v, double v_eff) {
        const auto d = dark_state_closed_form(n, v, v_eff);
        return py::make_tuple(d.vector, d.localization);
      },
      py::arg("n"), py::arg("v"), py::arg("v_eff"));
  m.def(
      "localization",
      [](int n, double v, double v_eff) {
        const auto l = localization(n, v, v_eff);
        return py::make_tuple(l.weight, l.localized);
      },
      py::arg("n"), py::arg("v"), py::arg("v_eff"));
  m.def("min_p1_oracle", &min_p1_oracle, py::arg("n"), py::arg("v"), py::arg("v_eff"));

  py::class_<PropertyReport>(m, "PropertyReport")
      .def_property_readonly("violations", &PropertyReport::violations)
      .def_property_readonly("check_count", [](const PropertyReport& r) { return r.checks.size(); })
      .def("to_text", &PropertyReport::to_text)
      .def("to_json", &PropertyReport::to_json);
  m.def(
      "verify_properties",
      [](std::vector<int> n_values, int trials, std::uint64_t seed, double h13) {
        PropertyConfig c;
        c.n_values = std::move(n_values);
        c.trials = trials;
        c.seed = seed;
        c.h13_perturbation = h13;
        return verify_properties(c);
      },
      py::arg("n_values") = std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, py::arg("trials") = 100,
      py::arg("seed") = 20240601, py::arg("h13_perturbation") = 0.0);

  // harness
  py::class_<CsvTable>(m, "CsvTable")
      .def_readonly("metadata", &CsvTable::metadata)
      .def_readonly("columns", &CsvTable::columns)
      .def_readonly("rows", &CsvTable::rows)
      .def("column", &CsvTable::column)
      .def("__str__", &CsvTable::str);
  m.def(
      "run_experiment",
      [](const std::string& name, int n, double v, double omega, double amplitude, const std::string& ratio_grid,
         int periods, int spp, bool timestamp) {
        ExperimentConfig c;
        c.experiment = parse_experiment(name);
        c.n = n;
        c.v = v;
        c.omega = omega;
        c.amplitude = amplitude;
        if (!ratio_grid.empty()) c.ratios = parse_ratio_grid(ratio_grid);
        c.horizon_periods = periods > 0 ? periods : (c.experiment == Experiment::dynamics ? 20 : 400);
        c.settings = settings_for(spp);
        c.timestamp = timestamp;
        switch (c.experiment) {
          case Experiment::dynamics: return run_dynamics(c);
          case Experiment::min_pop_sweep: return run_min_pop_sweep(c);
          case Experiment::floquet_sweep: return run_floquet_sweep(c);
          case Experiment::effective_compare: return run_effective_compare(c).table;
          case Experiment::properties: break;
        }
        throw DomainError("use verify_properties for the properties experiment");
      },
      py::arg("name"), py::arg("n") = 3, py::arg("v") = 1.0, py::arg("omega") = 10.0, py::arg("amplitude") = 0.0,
      py::arg("ratio_grid") = "", py::arg("periods") = 0, py::arg("steps_per_period") = 2000,
      py::arg("timestamp") = false, "Runs a table-producing experiment by its CLI name.");
}
