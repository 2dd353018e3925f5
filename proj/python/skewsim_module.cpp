// Python bindings for the main library operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "skewsim/attractor.hpp"
#include "skewsim/ergodic.hpp"
#include "skewsim/measures.hpp"
#include "skewsim/skew_system.hpp"
#include "skewsim/symbolic.hpp"

namespace py = pybind11;
using namespace skewsim;

namespace {

SymbolWindow window_from_args(int k, long offset, const std::vector<int>& symbols,
                              const std::string& past, const std::string& future) {
  const auto parse = [](const std::string& t) {
    if (t == "unspecified") return Tail::unspecified();
    return Tail::constant(std::stoi(t));
  };
  return SymbolWindow(k, offset, symbols, parse(past), parse(future));
}

std::string kind_name(FiberKind k) {
  switch (k) {
    case FiberKind::Point: return "point";
    case FiberKind::Bone: return "bone";
    default: return "indeterminate";
  }
}

}  // namespace

PYBIND11_MODULE(_skewsim, m) {
  m.doc() = "Random skew products over the Bernoulli shift: invariant graphs, "
            "bony attractors, Lyapunov exponents, stationary measures.";

  py::class_<SymbolWindow>(m, "SymbolWindow")
      .def(py::init(&window_from_args), py::arg("k"), py::arg("offset"),
           py::arg("symbols"), py::arg("past_tail") = "unspecified",
           py::arg("future_tail") = "unspecified")
      .def_static("constant", &SymbolWindow::constant)
      .def("at", &SymbolWindow::at)
      .def("shifted", &SymbolWindow::shifted)
      .def("digest", &SymbolWindow::digest)
      .def_property_readonly("offset", &SymbolWindow::offset)
      .def_property_readonly("symbols", &SymbolWindow::symbols);

  m.def("base_distance", [](const SymbolWindow& a, const SymbolWindow& b) {
    const BaseDistance d = base_distance(a, b);
    return py::make_tuple(d.value, d.bound_only);
  });
  m.def("sample_bernoulli", &sample_bernoulli, py::arg("k"),
        py::arg("past_depth"), py::arg("future_depth"), py::arg("seed"));

  py::class_<SkewSystem>(m, "SkewSystem")
      .def_static("from_json", [](const std::string& text) {
        return nlohmann::json::parse(text).get<SkewSystem>();
      })
      .def("to_json", [](const SkewSystem& s) {
        return nlohmann::json(s).dump(2);
      })
      .def_property_readonly("k", &SkewSystem::alphabet_size)
      .def_property_readonly("is_step", &SkewSystem::is_step)
      .def_property_readonly("window_radius", &SkewSystem::window_radius);

  m.def("make_default_step_system", &make_default_step_system);
  m.def("make_bony_perturbation", &make_bony_perturbation, py::arg("base"),
        py::arg("m"), py::arg("u_lo") = 0.25, py::arg("u_hi") = 0.35,
        py::arg("transition") = 0.02);
  m.def("make_shifted_step_system", &make_shifted_step_system);
  m.def("dist_c2", [](const SkewSystem& f, const SkewSystem& g) {
    return dist_c2(f, g);
  });

  m.def("check_conditions", [](const SkewSystem& s, int grid) {
    return check_conditions(s, grid).to_json().dump(2);
  }, py::arg("system"), py::arg("grid") = 10000);

  m.def("forward_orbit", &forward_orbit);
  m.def("pullback_fiber", [](const SkewSystem& s, const SymbolWindow& w, int n) {
    const FiberBox b = pullback_fiber(s, w, n);
    return py::make_tuple(b.lo, b.hi);
  });
  m.def("graph_value", [](const SkewSystem& s, const SymbolWindow& w,
                          int max_depth, double tol, double eps_bone) {
    const FiberClass c = graph_value(s, w, max_depth, tol, eps_bone);
    py::dict d;
    d["kind"] = kind_name(c.kind);
    d["value"] = c.value;
    d["lo"] = c.lo;
    d["hi"] = c.hi;
    d["width"] = c.width;
    d["depth"] = c.depth;
    return d;
  }, py::arg("system"), py::arg("window"), py::arg("max_depth") = 500,
     py::arg("tol") = 1e-10, py::arg("eps_bone") = 1e-4);
  m.def("invariance_residual", &invariance_residual, py::arg("system"),
        py::arg("window"), py::arg("depth"), py::arg("tol") = 1e-11);
  m.def("bone_census", [](const SkewSystem& s, int n, int depth,
                          double eps_bone, std::uint64_t seed) {
    const CensusRecord r = bone_census(s, n, depth, eps_bone, seed);
    py::dict d;
    d["points"] = r.points;
    d["bones"] = r.bones;
    d["indeterminate"] = r.indeterminate;
    return d;
  });
  m.def("backward_code", &backward_code);

  m.def("sup_norm_exponent", [](const SkewSystem& s, int n, int grid,
                                int samples, std::uint64_t seed) {
    const ExponentEstimate e = sup_norm_exponent(s, n, grid, samples, seed);
    return py::make_tuple(e.value, e.std_error);
  });
  m.def("pointwise_exponent", [](const SkewSystem& s, int n, int samples,
                                 std::uint64_t seed) {
    const ExponentEstimate e = pointwise_exponent(s, n, samples, seed);
    return py::make_tuple(e.value, e.std_error);
  });
  m.def("orbit_stability", [](const SkewSystem& f, const SkewSystem& g,
                              int samples, int n, double eps,
                              std::uint64_t seed) {
    const StabilityRecord r = orbit_stability(f, g, samples, n, eps, seed);
    return py::make_tuple(r.median, r.mean);
  });

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def_static("atoms", &DiscreteMeasure::atoms)
      .def_static("point_mass", &DiscreteMeasure::point_mass)
      .def_static("histogram", &DiscreteMeasure::histogram)
      .def_property_readonly("weights", &DiscreteMeasure::weights)
      .def_property_readonly("atom_positions", &DiscreteMeasure::positions);
  m.def("transfer_apply", [](const DiscreteMeasure& mu, const SkewSystem& s) {
    return transfer_apply(mu, s.step_maps());
  });
  m.def("stationary_measure", [](const SkewSystem& s, int bins, double tol,
                                 int max_iter) {
    const StationaryResult r = stationary_measure(s.step_maps(), bins, tol,
                                                  max_iter);
    return py::make_tuple(r.measure, r.iterations);
  }, py::arg("system"), py::arg("bins") = 1000, py::arg("tol") = 1e-6,
     py::arg("max_iter") = 5000);
  m.def("hutchinson_distance", &hutchinson_distance);
  m.def("graph_distance", [](const SkewSystem& f, const SkewSystem& g,
                             int samples, int depth, std::uint64_t seed) {
    const GraphDistanceResult r = graph_distance(f, g, samples, depth, seed);
    return py::make_tuple(r.lower, r.upper);
  });
}
