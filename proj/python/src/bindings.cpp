#include <map>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "svfkit/error.hpp"
#include "svfkit/experiment.hpp"
#include "svfkit/geometry.hpp"
#include "svfkit/limit_analysis.hpp"
#include "svfkit/metric_algebra.hpp"
#include "svfkit/spec_io.hpp"
#include "svfkit/svf.hpp"
#include "svfkit/variation.hpp"

namespace py = pybind11;
using namespace svfkit;

namespace {

using Coords = std::vector<double>;
using Overrides = std::map<std::string, double>;

Coords coords(const Point& p) { return p.vec(); }

std::vector<Coords> coords(const std::vector<Point>& ps) {
  std::vector<Coords> out;
  out.reserve(ps.size());
  for (const Point& p : ps) out.push_back(p.vec());
  return out;
}

ToleranceConfig tolerances(double tie_tol, double sample_eps, double conv_tol) {
  ToleranceConfig t{tie_tol, sample_eps, conv_tol};
  t.validate();
  return t;
}

CompactSet make_points(const std::vector<Coords>& pts, double tie_tol) {
  std::vector<Point> ps;
  ps.reserve(pts.size());
  for (const Coords& c : pts) ps.emplace_back(c);
  return CompactSet::points(ps, tie_tol);
}

AnalysisConfig config_for(const SvfSpec& spec, const std::optional<std::string>& norm,
                          const Overrides& overrides) {
  AnalysisConfig cfg = spec.apply(AnalysisConfig{});
  if (norm) cfg.norm = norm_from_string(*norm);
  return apply_overrides(cfg, overrides);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Metric selections and limit sets of set-valued functions";

  static PyObject* error_type = py::exception<Error>(m, "SvfkitError", PyExc_RuntimeError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<CompactSet>(m, "CompactSet")
      .def_static("points", &make_points, py::arg("points"), py::arg("tie_tol") = kDefaultTieTol)
      .def_static("ball", [](const Coords& c, double r) { return CompactSet::ball(Point(c), r); },
                  py::arg("center"), py::arg("radius"))
      .def_static("union", [](const std::vector<CompactSet>& parts, double tie_tol) {
                    return CompactSet::make_union(parts, tie_tol);
                  }, py::arg("parts"), py::arg("tie_tol") = kDefaultTieTol)
      .def_property_readonly("dim", &CompactSet::dim)
      .def_property_readonly("is_finite", &CompactSet::is_finite)
      .def("finite_points", [](const CompactSet& s) { return coords(s.finite_points()); })
      .def("balls", [](const CompactSet& s) {
        std::vector<std::pair<Coords, double>> out;
        for (const Ball& b : s.ball_list()) out.emplace_back(b.center.vec(), b.radius);
        return out;
      })
      .def("contains", [](const CompactSet& s, const Coords& p, const std::string& norm, double tol) {
        return s.contains(Point(p), norm_from_string(norm), tol);
      }, py::arg("point"), py::arg("norm") = "l2", py::arg("tol") = kDefaultTieTol);

  m.def("hausdorff", [](const CompactSet& a, const CompactSet& b, const std::string& norm, double sample_eps) {
    const HausdorffEstimate h = hausdorff(a, b, norm_from_string(norm), sample_eps);
    return std::make_pair(h.value, h.error_bound);
  }, py::arg("a"), py::arg("b"), py::arg("norm") = "l2", py::arg("sample_eps") = 0.01,
        "Hausdorff distance as (value, error_bound).");

  m.def("hausdorff_via_pairs", [](const CompactSet& a, const CompactSet& b, const std::string& norm,
                                  double tie_tol, double sample_eps) {
    return hausdorff_via_pairs(a, b, norm_from_string(norm), tolerances(tie_tol, sample_eps, 1e-6));
  }, py::arg("a"), py::arg("b"), py::arg("norm") = "l2", py::arg("tie_tol") = kDefaultTieTol,
        py::arg("sample_eps") = 0.01);

  m.def("metric_pairs", [](const CompactSet& a, const CompactSet& b, const std::string& norm,
                           double tie_tol, double sample_eps) {
    std::vector<std::tuple<Coords, Coords, std::string>> out;
    for (const MetricPair& p : metric_pairs(a, b, norm_from_string(norm),
                                            tolerances(tie_tol, sample_eps, 1e-6))) {
      out.emplace_back(coords(p.a), coords(p.b), to_string(p.witness));
    }
    return out;
  }, py::arg("a"), py::arg("b"), py::arg("norm") = "l2", py::arg("tie_tol") = kDefaultTieTol,
        py::arg("sample_eps") = 0.01);

  m.def("metric_linear_combination", [](const std::vector<double>& lambdas,
                                        const std::vector<CompactSet>& sets, const std::string& norm,
                                        double tie_tol, double sample_eps) {
    return metric_linear_combination({lambdas, sets}, norm_from_string(norm),
                                     tolerances(tie_tol, sample_eps, 1e-6));
  }, py::arg("lambdas"), py::arg("sets"), py::arg("norm") = "l2",
        py::arg("tie_tol") = kDefaultTieTol, py::arg("sample_eps") = 0.01);

  m.def("minkowski_combination", [](const std::vector<double>& lambdas, const std::vector<CompactSet>& sets) {
    return minkowski_combination(lambdas, sets);
  }, py::arg("lambdas"), py::arg("sets"));

  py::class_<Svf>(m, "Svf")
      .def_property_readonly("a", &Svf::a)
      .def_property_readonly("b", &Svf::b)
      .def_property_readonly("dim", &Svf::dim)
      .def_property_readonly("name", &Svf::name)
      .def_property_readonly("breakpoints", &Svf::breakpoints)
      .def("evaluate", &Svf::evaluate, py::arg("t"));

  m.def("load_svf", [](const std::string& path) { return parse_svf_spec(path).svf; }, py::arg("path"));
  m.def("parse_svf", [](const std::string& text) { return parse_svf_spec_text(text).svf; }, py::arg("text"));

  m.def("_jump_analysis", [](const std::string& path, double xi, std::optional<std::string> norm,
                             const Overrides& overrides) {
    const SvfSpec spec = parse_svf_spec(path);
    const AnalysisConfig cfg = config_for(spec, norm, overrides);
    py::gil_scoped_release release;
    return jump_analysis_json(theorem_check(spec.svf, xi, cfg)).dump();
  });

  m.def("_variation_profile", [](const std::string& path, std::optional<std::string> norm,
                                 const Overrides& overrides) {
    const SvfSpec spec = parse_svf_spec(path);
    const AnalysisConfig cfg = config_for(spec, norm, overrides);
    py::gil_scoped_release release;
    return variation_json(total_variation(spec.svf, cfg)).dump();
  });

  m.def("_run_experiment", [](const std::string& task, const std::string& spec_path,
                              const std::string& out_dir, std::optional<double> xi,
                              std::optional<std::string> norm, const Overrides& overrides,
                              std::uint64_t seed) {
    ExperimentConfig ec;
    ec.task = task_from_string(task);
    ec.spec_path = spec_path;
    ec.out_dir = out_dir;
    ec.xi = xi;
    if (norm) ec.norm = norm_from_string(*norm);
    ec.overrides = overrides;
    ec.seed = seed;
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(ec);
    }
    return py::make_tuple(r.exit_code, r.report.dump(), r.files);
  });
}
