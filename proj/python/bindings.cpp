#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "roughscat/bem_solver.hpp"
#include "roughscat/identities.hpp"
#include "roughscat/inverse.hpp"
#include "roughscat/maxwell_images.hpp"
#include "roughscat/scene.hpp"
#include "roughscat/scene_config.hpp"

namespace py = pybind11;
using namespace roughscat;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Half-space rough-surface scattering: images, boundary elements, identities, inversion.";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InverseCrimeError>(m, "InverseCrimeError", PyExc_ValueError);
  py::register_exception<InversionError>(m, "InversionError", PyExc_RuntimeError);

  py::enum_<BoundaryCondition>(m, "BoundaryCondition")
      .value("dirichlet", BoundaryCondition::dirichlet)
      .value("neumann", BoundaryCondition::neumann);
  py::enum_<ProfileKind>(m, "ProfileKind")
      .value("zero", ProfileKind::zero)
      .value("gaussian_bump", ProfileKind::gaussian_bump)
      .value("piecewise_linear", ProfileKind::piecewise_linear);

  py::class_<ProfileSpec>(m, "ProfileSpec")
      .def(py::init<>())
      .def_readwrite("kind", &ProfileSpec::kind)
      .def_readwrite("support_radius", &ProfileSpec::support_radius)
      .def_readwrite("amplitude", &ProfileSpec::amplitude)
      .def_readwrite("width", &ProfileSpec::width)
      .def_readwrite("grid_n", &ProfileSpec::grid_n)
      .def_readwrite("heights", &ProfileSpec::heights)
      .def_readwrite("allow_dip", &ProfileSpec::allow_dip);
  m.def("gaussian_bump", [](double a, double sigma, double R) {
    ProfileSpec s;
    s.kind = ProfileKind::gaussian_bump;
    s.amplitude = a;
    s.width = sigma;
    s.support_radius = R;
    return s;
  }, py::arg("amplitude"), py::arg("width"), py::arg("support_radius") = 1.0);

  py::class_<SurfaceProfile>(m, "SurfaceProfile")
      .def("height", py::overload_cast<double, double>(&SurfaceProfile::height, py::const_))
      .def_property_readonly("max_height", &SurfaceProfile::max_height)
      .def_property_readonly("max_slope", &SurfaceProfile::max_slope)
      .def_property_readonly("support_radius", &SurfaceProfile::support_radius);
  m.def("build_profile", &build_profile);

  py::class_<PanelMesh>(m, "PanelMesh")
      .def_readonly("h", &PanelMesh::h)
      .def("__len__", &PanelMesh::size);

  py::class_<Scene>(m, "Scene")
      .def_readonly("profile", &Scene::profile)
      .def_readonly("mesh", &Scene::mesh)
      .def_readonly("k", &Scene::k)
      .def_readonly("bc", &Scene::bc)
      .def_readonly("hash", &Scene::hash);
  m.def("make_scene", py::overload_cast<const ProfileSpec&, double, double, BoundaryCondition>(&make_scene),
        py::arg("profile"), py::arg("target_h"), py::arg("k"), py::arg("bc"));

  py::class_<IncidentWave>(m, "IncidentWave");
  m.def("plane_wave", &make_plane_wave, py::arg("phi"), py::arg("theta"), py::arg("k"), py::arg("bc"));
  m.def("point_source", &make_point_source, py::arg("z"), py::arg("k"), py::arg("bc"));
  m.def("incident_field", &eval_pair, py::arg("wave"), py::arg("x"));

  py::class_<DirectionGrid>(m, "DirectionGrid")
      .def_readonly("directions", &DirectionGrid::directions)
      .def("__len__", &DirectionGrid::size);
  m.def("hemisphere_grid", &make_hemisphere_grid, py::arg("n_theta"), py::arg("n_phi"));

  py::class_<LayerDensity>(m, "LayerDensity").def_readonly("coefficients", &LayerDensity::coefficients);
  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("panel_count", &SolveReport::panel_count)
      .def_readonly("condition_estimate", &SolveReport::condition_estimate)
      .def_readonly("residual_norm", &SolveReport::residual_norm)
      .def_readonly("rhs_norm", &SolveReport::rhs_norm);
  py::class_<FarFieldPattern>(m, "FarFieldPattern")
      .def_readonly("grid", &FarFieldPattern::grid)
      .def_readonly("values", &FarFieldPattern::values)
      .def("to_csv", [](const FarFieldPattern& ff) {
        std::ostringstream os;
        write_farfield_csv(os, ff);
        return os.str();
      });

  m.def("solve", [](const Scene& s, const IncidentWave& w) { return solve_scattered(s.mesh, w); },
        py::arg("scene"), py::arg("wave"), py::call_guard<py::gil_scoped_release>());
  m.def("scattered_field", [](const Scene& s, const LayerDensity& d, const Vec3& x) {
    return eval_scattered(d, s.mesh, x);
  });
  m.def("farfield", [](const Scene& s, const LayerDensity& d, const DirectionGrid& g) {
    return eval_farfield(d, s.mesh, g);
  });

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("name", &IdentityReport::name)
      .def_readonly("lhs", &IdentityReport::lhs)
      .def_readonly("rhs", &IdentityReport::rhs)
      .def_readonly("rel_err", &IdentityReport::rel_err);
  py::class_<SlopeReport>(m, "SlopeReport")
      .def_readonly("slope", &SlopeReport::slope)
      .def_readonly("vacuous", &SlopeReport::vacuous);
  m.def("check_mixed_reciprocity", py::overload_cast<const Scene&, const Vec3&, const Vec3&>(&check_mixed_reciprocity),
        py::call_guard<py::gil_scoped_release>());
  m.def("check_point_symmetry", py::overload_cast<const Scene&, const Vec3&, const Vec3&>(&check_point_symmetry),
        py::call_guard<py::gil_scoped_release>());
  m.def("check_reflected_farfield", &check_reflected_farfield, py::arg("z"), py::arg("d"), py::arg("k"), py::arg("bc"));

  py::class_<EMSample>(m, "EMSample").def_readonly("E", &EMSample::E).def_readonly("H", &EMSample::H);
  py::class_<DipoleSource>(m, "DipoleSource");
  m.def("dipole", &make_dipole, py::arg("y"), py::arg("p"), py::arg("k"));
  m.def("dipole_total_field", [](const DipoleSource& s, const Vec3& x) { return eval_total_field(s, ground_plane(), x); });

  py::class_<ProfileParams>(m, "ProfileParams").def_readonly("values", &ProfileParams::values);
  m.def("bump_params", &make_bump_params, py::arg("amplitude"), py::arg("width"), py::arg("support_radius") = 1.0);

  m.def("config_hash", [](const std::string& text) { return parse_config(text).hash; });
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
