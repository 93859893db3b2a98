#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlab/beltrami.hpp"
#include "qlab/carleson.hpp"
#include "qlab/cauchy.hpp"
#include "qlab/error.hpp"
#include "qlab/experiments.hpp"
#include "qlab/extension.hpp"
#include "qlab/io.hpp"
#include "qlab/regularity.hpp"
#include "qlab/transforms.hpp"

namespace py = pybind11;
using namespace qlab;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using Box4 = std::array<double, 4>;  // x0, x1, y0, y1

Grid grid_of(const Box4& b, int nx, int ny) { return Grid(Box{b[0], b[1], b[2], b[3]}, nx, ny); }

/// A (ny, nx) complex array on the box.
GridField field_from(const CArray& a, const Box4& box) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d complex array of shape (ny, nx)");
  const Grid g = grid_of(box, static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  return GridField(g, std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray to_array(const GridField& f) {
  CArray out({f.grid().ny(), f.grid().nx()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

CArray to_array(std::span<const Complex> v) {
  CArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Region region_of(const std::string& name, const ParametricCurve& c) {
  if (name == "upper") return Region(RegionTag::UpperHalf, c);
  if (name == "lower") return Region(RegionTag::LowerHalf, c);
  if (name == "inside") return Region(RegionTag::InsideCurve, c);
  if (name == "outside") return Region(RegionTag::OutsideCurve, c);
  throw py::value_error("region must be upper, lower, inside or outside");
}

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }
nlohmann::json from_python(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_qlab, m) {
  m.doc() = "Quasiconformal maps, Carleson measures and Cauchy integrals on quasicircles";

  static py::exception<Error> qlab_error(m, "QlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = qlab_error;
      py::object exc = err(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(err.ptr(), exc.ptr());
    }
  });

  py::class_<ParametricCurve>(m, "Curve")
      .def_static("circle", &ParametricCurve::circle, py::arg("center") = Complex{}, py::arg("radius") = 1.0,
                  py::arg("n") = 1024)
      .def_static("real_line", &ParametricCurve::real_line, py::arg("n") = 4096, py::arg("span") = 2.0)
      .def_static("segment", &ParametricCurve::segment, py::arg("a"), py::arg("b"), py::arg("n"))
      .def_static("read", [](const std::string& path) { return io::read_curve(path); })
      .def("write", [](const ParametricCurve& c, const std::string& path) { io::write_curve(path, c); })
      .def("__len__", &ParametricCurve::size)
      .def_property_readonly("closed", &ParametricCurve::closed)
      .def_property_readonly("params", [](const ParametricCurve& c) {
        std::vector<double> t(c.size());
        for (std::size_t j = 0; j < t.size(); ++j) t[j] = c.param(j);
        return t;
      })
      .def_property_readonly("points", [](const ParametricCurve& c) {
        std::vector<Complex> v(c.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = c.point(j);
        return to_array(v);
      })
      .def_property_readonly("derivatives", [](const ParametricCurve& c) {
        std::vector<Complex> v(c.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = c.deriv(j);
        return to_array(v);
      });

  py::class_<PlanarMap>(m, "PlanarMap")
      .def_property_readonly("residual", &PlanarMap::residual)
      .def_property_readonly("iterations", &PlanarMap::iterations)
      .def_property_readonly("displacement", [](const PlanarMap& p) { return to_array(p.displacement()); })
      .def_property_readonly("dz_field", [](const PlanarMap& p) { return to_array(p.dz_field()); })
      .def("__call__", &PlanarMap::operator(), py::arg("z"))
      .def("dz", &PlanarMap::dz, py::arg("z"))
      .def("dbar", &PlanarMap::dbar, py::arg("z"))
      .def("invert", &PlanarMap::invert, py::arg("w"))
      .def("trace", &trace_quasicircle, py::arg("n_points") = 2048, py::arg("span") = 2.0);

  m.def(
      "solve_beltrami",
      [](const CArray& mu, const Box4& box, double tol, int max_iter) {
        return solve_principal(BeltramiField::make(field_from(mu, box)), SolveOptions{tol, max_iter});
      },
      py::arg("mu"), py::arg("box"), py::arg("tol") = 1e-8, py::arg("max_iter") = 200,
      "Principal solution of dbar f = mu dz f; mu has shape (ny, nx) on box (x0, x1, y0, y1).");

  m.def(
      "cauchy_transform", [](const CArray& f, const Box4& box) { return to_array(cauchy_transform(field_from(f, box))); },
      py::arg("f"), py::arg("box"));
  m.def(
      "beurling_transform",
      [](const CArray& f, const Box4& box) { return to_array(beurling_transform(field_from(f, box))); },
      py::arg("f"), py::arg("box"));

  m.def(
      "carleson_norm",
      [](const CArray& mu, const Box4& box, const std::string& density, double epsilon, const ParametricCurve& curve,
         int n_centers, int j_max, double r_max) {
        const GridField f = field_from(mu, box);
        CarlesonDensity d;
        if (density == "mu2_over_y") d = CarlesonDensity::mu2_over_y(f, epsilon);
        else if (density == "mu2_over_y_plain") d = CarlesonDensity::mu2_over_y_plain(f);
        else if (density == "mu2_over_dist_circle") d = CarlesonDensity::mu2_over_dist_circle(f, epsilon);
        else throw py::value_error("density must be mu2_over_y, mu2_over_y_plain or mu2_over_dist_circle");
        const CarlesonReport r = carleson_norm(d, curve, CarlesonOptions{n_centers, j_max, r_max});
        py::dict out;
        out["norm"] = r.norm;
        out["divergent"] = r.divergent;
        out["radii"] = r.radii;
        out["profile"] = r.profile;
        out["masses"] = r.masses;
        out["exponent"] = profile_exponent(r);
        return out;
      },
      py::arg("mu"), py::arg("box"), py::arg("density") = "mu2_over_y", py::arg("epsilon") = 0.0, py::arg("curve"),
      py::arg("n_centers") = 64, py::arg("j_max") = -1, py::arg("r_max") = 0.0);

  auto boundary = [](const ParametricCurve& c, const py::object& g) {
    if (py::isinstance<py::str>(g)) return BoundaryFunction::builtin(g.cast<std::string>(), c);
    const auto v = g.cast<std::vector<Complex>>();
    if (v.size() != c.size()) throw py::value_error("g needs one sample per curve point");
    return BoundaryFunction::from_samples(v);
  };
  m.def(
      "cauchy_integral",
      [boundary](const ParametricCurve& c, const py::object& g, Complex z, bool near) {
        const BoundaryFunction b = boundary(c, g);
        return near ? cauchy_integral_near(c, b, z) : cauchy_integral(c, b, z);
      },
      py::arg("curve"), py::arg("g"), py::arg("z"), py::arg("near") = false,
      "g is a builtin name (one, identity, pole:p, step) or one sample per curve point.");
  m.def(
      "plemelj_values",
      [boundary](const ParametricCurve& c, const py::object& g, std::size_t j) {
        return plemelj_values(c, boundary(c, g), j);
      },
      py::arg("curve"), py::arg("g"), py::arg("j"));
  m.def(
      "hinf_profile",
      [boundary](const ParametricCurve& c, const py::object& g, const std::string& region, int m_max) {
        const HinfProfile p = hinf_profile(c, boundary(c, g), region_of(region, c), ProfileOptions{m_max, 512, 4});
        py::dict out;
        out["levels"] = p.levels;
        out["sup_values"] = p.sup_values;
        out["slope"] = p.slope;
        out["classification"] = to_string(p.classification);
        return out;
      },
      py::arg("curve"), py::arg("g"), py::arg("region"), py::arg("m_max") = 7);

  m.def(
      "holder_exponent",
      [](const std::vector<Complex>& samples, bool periodic) {
        const HolderFit h = holder_exponent(samples, periodic);
        return py::make_tuple(h.alpha, h.r2);
      },
      py::arg("samples"), py::arg("periodic") = true, "Returns (alpha, r2).");
  m.def("chord_arc_constant", [](const ParametricCurve& c) { return chord_arc_metrics(c).constant; },
        py::arg("curve"));
  m.def("bmo_norm", [](const std::vector<double>& s) { return bmo_dyadic_norm(s); }, py::arg("samples"));

  py::class_<ConformalBoundaryMap>(m, "BoundaryMap")
      .def_static("parse", &ConformalBoundaryMap::parse, py::arg("spec"))
      .def_property_readonly("name", &ConformalBoundaryMap::name)
      .def("__call__", &ConformalBoundaryMap::f)
      .def("d1", &ConformalBoundaryMap::d1)
      .def("d2", &ConformalBoundaryMap::d2);
  m.def("reflect_extend", &reflect_extend, py::arg("map"), py::arg("z"), py::arg("r0") = 0.25);
  m.def("extension_dilatation", &extension_dilatation, py::arg("map"), py::arg("z"), py::arg("r0") = 0.25);
  m.def(
      "cutoff_global",
      [](const ConformalBoundaryMap& f, double half, int n, double R0, double width) {
        return to_array(cutoff_global(f, Grid::centered_square(half, n), R0, width).mu);
      },
      py::arg("map"), py::arg("half_width") = 4.0, py::arg("n") = 512, py::arg("R0") = 1.5, py::arg("width") = 0.3);

  m.def(
      "run_scenario",
      [](const std::string& scenario, const py::object& overrides) {
        const ScenarioConfig cfg = overrides.is_none() ? ScenarioConfig::defaults(scenario)
                                                       : ScenarioConfig::with_overrides(scenario, from_python(overrides));
        return to_python(run_scenario(cfg).to_json());
      },
      py::arg("scenario"), py::arg("overrides") = py::none(),
      "Runs theorem-a, theorem-b or corollary; returns the verdict report as a dict.");
  m.def(
      "scenario_defaults", [](const std::string& s) { return to_python(ScenarioConfig::defaults(s).params); },
      py::arg("scenario"));
}
