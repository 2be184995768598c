#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "helium/device_model.hpp"
#include "helium/errors.hpp"
#include "helium/harness/config.hpp"
#include "helium/harness/csv.hpp"
#include "helium/harness/runner.hpp"
#include "helium/ising.hpp"
#include "helium/readout.hpp"
#include "helium/schrodinger.hpp"

namespace py = pybind11;
using namespace helium;

namespace {

py::dict well_dict(const WellCharacterization& w) {
  py::dict d;
  d["is_double_well"] = w.is_double_well;
  d["y_min_nm"] = w.y_min;
  d["potential_min_K"] = w.potential_min;
  d["barrier_U0_K"] = w.barrier_U0;
  d["hbar_omega_K"] = w.omega;
  d["hbar_omega_numeric_K"] = w.omega_numeric;
  d["E0_K"] = w.ground_energy_E0;
  d["tunnel_action"] = w.tunnel_action;
  d["stationary_points_nm"] = w.stationary_points;
  if (w.turning_points) d["turning_points_nm"] = py::make_tuple(w.turning_points->inner, w.turning_points->outer);
  return d;
}

ising::IsingChain make_chain(int n, double gamma_x, double coupling, double gamma_z, const std::string& boundary) {
  auto c = ising::IsingChain::uniform(n, gamma_x, coupling, gamma_z, ising::boundary_from_string(boundary));
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Electrons on helium as a transverse-field Ising chain";

  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "HeliumError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<DeviceGeometry>(m, "DeviceGeometry")
      .def(py::init<>())
      .def(py::init([](double a, double d, double h, double lam) {
             DeviceGeometry g;
             g.sphere_radius_a = a;
             g.sphere_gap_d = d;
             g.film_height_h = h;
             g.site_spacing_lambda = lam;
             g.validate();
             return g;
           }),
           py::arg("a_nm"), py::arg("d_nm"), py::arg("h_nm"), py::arg("lambda_nm"))
      .def_readwrite("a_nm", &DeviceGeometry::sphere_radius_a)
      .def_readwrite("d_nm", &DeviceGeometry::sphere_gap_d)
      .def_readwrite("h_nm", &DeviceGeometry::film_height_h)
      .def_readwrite("lambda_nm", &DeviceGeometry::site_spacing_lambda)
      .def_readwrite("eps_r", &DeviceGeometry::helium_rel_permittivity)
      .def_readwrite("temperature_K", &DeviceGeometry::temperature)
      .def_readwrite("n_sites", &DeviceGeometry::n_sites)
      .def("alpha", &DeviceGeometry::alpha)
      .def("beta_squared", &DeviceGeometry::beta_squared)
      .def("validate", &DeviceGeometry::validate);

  m.def("pair_potential", &pair_potential, py::arg("geometry"), py::arg("x_nm"), py::arg("y_nm"));
  m.def(
      "characterize_well", [](const DeviceGeometry& g) { return well_dict(characterize_well(g)); },
      py::arg("geometry"));
  m.def(
      "wkb_splitting", [](const DeviceGeometry& g) { return wkb_splitting(g, characterize_well(g)); },
      py::arg("geometry"));
  m.def("coupling_J", &coupling_J, py::arg("geometry"));
  m.def("longitudinal_gamma", &longitudinal_gamma, py::arg("geometry"), py::arg("field_V_per_m"));
  m.def(
      "derive_parameters",
      [](const DeviceGeometry& g, double field) {
        const auto r = derive_parameters(g, field);
        py::dict d;
        d["well"] = well_dict(r.well);
        d["Gamma_K"] = r.gamma_transverse ? py::cast(*r.gamma_transverse) : py::none();
        d["Gamma_note"] = r.gamma_note;
        d["J_K"] = r.coupling_J;
        d["gamma_K"] = r.gamma_longitudinal;
        d["hierarchy_pass"] = r.hierarchy.all_pass;
        d["repulsion_K"] = r.stability.repulsion;
        d["binding_K"] = r.stability.binding;
        d["stable"] = r.stability.stable;
        return d;
      },
      py::arg("geometry"), py::arg("field_V_per_m") = 0.0);

  m.def(
      "solve_1d",
      [](const std::function<double(double)>& v, double half_width, int points, int states, int stencil_order) {
        oracle::SolveOptions o;
        o.stencil_order = stencil_order;
        const auto r = oracle::solve_1d(v, oracle::GridSpec::line(half_width, points), states, o);
        py::dict d;
        d["energies_K"] = r.energies;
        std::vector<std::string> parities;
        for (auto p : r.parities) parities.emplace_back(oracle::to_string(p));
        d["parities"] = parities;
        d["residuals"] = r.residuals;
        d["provenance"] = r.provenance;
        if (r.doublet_splitting) d["doublet_splitting_K"] = *r.doublet_splitting;
        return d;
      },
      py::arg("potential"), py::arg("half_width_nm"), py::arg("points") = 1025, py::arg("states") = 3,
      py::arg("stencil_order") = 2,
      "Lowest levels of a 1D potential (K, nm); the callable is evaluated on the grid.");

  m.def("ground_energy", [](int n, double gx, double j, double gz, const std::string& b) {
        return ising::ground_state(make_chain(n, gx, j, gz, b)).energy;
      },
      py::arg("n"), py::arg("Gamma"), py::arg("J"), py::arg("gamma") = 0.0, py::arg("boundary") = "open");
  m.def(
      "free_fermion_spectrum",
      [](int n, double gx, double j, const std::string& b) {
        const auto s = ising::free_fermion_solve(make_chain(n, gx, j, 0.0, b), {.want_modes = b != "open"});
        py::dict d;
        d["ground_energy"] = s.ground_energy;
        d["gap"] = s.gap;
        d["sector_gap"] = s.sector_gap;
        d["ground_parity"] = s.ground_parity;
        d["mode_energies"] = s.mode_energies;
        return d;
      },
      py::arg("n"), py::arg("Gamma"), py::arg("J"), py::arg("boundary") = "open");
  m.def(
      "susceptibility",
      [](int n, double gx, double j) {
        const auto s = ising::susceptibility(make_chain(n, gx, j, 0.0, "open"));
        return py::make_tuple(s.mean, s.per_site, s.non_analytic);
      },
      py::arg("n"), py::arg("Gamma"), py::arg("J"));
  m.def(
      "quench_kink_density",
      [](int n, double gamma_start, double gamma_end, double j, double tau_q) {
        const auto base = make_chain(n, gamma_start, j, 0.0, "open");
        const auto sched = ising::SweepSchedule::transverse_ramp(base, gamma_start, gamma_end, tau_q);
        py::gil_scoped_release release;
        return ising::evolve_quadratic(sched).kink_density;
      },
      py::arg("n"), py::arg("Gamma_start"), py::arg("Gamma_end"), py::arg("J"), py::arg("tau_q"));

  m.def(
      "electrode_field",
      [](double r_um, double sep_mm, double volts) {
        readout::ElectrodeConfig c{r_um, sep_mm, volts};
        c.validate();
        return readout::electrode_field(c);
      },
      py::arg("R_um") = 100.0, py::arg("sep_mm") = 1.0, py::arg("V") = 1e-6);
  m.def("kink_signal", &readout::kink_signal, py::arg("n"), py::arg("up_sites") = py::none());
  m.def("average_kink_signal", &readout::average_kink_signal, py::arg("n"));

  m.attr("DEFAULT_SEED") = harness::kDefaultSeed;
  m.def(
      "run_config",
      [](const std::string& text, std::size_t workers) {
        const auto spec = harness::parse_config(text);
        harness::ResultSet rs;
        {
          py::gil_scoped_release release;
          rs = harness::run_experiment(spec, workers);
        }
        return harness::to_csv(rs);
      },
      py::arg("text"), py::arg("workers") = 1, "Runs a configuration and returns results.csv as text.");
  m.def(
      "normalize_config", [](const std::string& text) { return harness::render_config(harness::parse_config(text)); },
      py::arg("text"));
  m.attr("__version__") = harness::tool_version();
}
