#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "heatcontent/cli.hpp"
#include "heatcontent/derivatives.hpp"
#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/geometry.hpp"
#include "heatcontent/inequalities.hpp"
#include "heatcontent/kernel.hpp"

namespace py = pybind11;
using namespace heatcontent;

namespace {

EngineConfig make_config(double h, double padding_sigmas, double samples_per_sigma, bool richardson,
                         std::size_t n_samples, std::uint64_t seed) {
  EngineConfig cfg;
  cfg.grid.h = h;
  cfg.grid.padding_sigmas = padding_sigmas;
  cfg.grid.samples_per_sigma = samples_per_sigma;
  cfg.grid.richardson = richardson;
  cfg.mc.n_samples = n_samples;
  cfg.mc.seed = seed;
  return cfg;
}

Method method_for(const Domain& d, const std::string& name) {
  return name == "auto" ? default_method(d) : parse_method(name);
}

#define ENGINE_ARGS                                                                                     \
  py::arg("h") = 0.0, py::arg("padding_sigmas") = 8.0, py::arg("samples_per_sigma") = 4.0,               \
  py::arg("richardson") = false, py::arg("n_samples") = std::size_t{1'000'000},                          \
  py::arg("seed") = Rng::kDefaultSeed

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Euclidean heat content engines and inequality checks";

  py::register_exception<EngineError>(m, "EngineError", PyExc_RuntimeError);
  py::register_exception<NoisyEngineError>(m, "NoisyEngineError", PyExc_ValueError);

  py::class_<Domain>(m, "Domain")
      .def_static("interval", &Domain::interval, py::arg("length"))
      .def_static("box", &Domain::box, py::arg("lengths"))
      .def_static("ball", &Domain::ball, py::arg("center"), py::arg("radius"))
      .def_static(
          "box_union",
          [](const std::vector<std::pair<Point, std::vector<double>>>& boxes) {
            std::vector<AxisBox> out;
            for (const auto& [corner, lengths] : boxes) out.push_back({corner, lengths});
            return Domain::box_union(std::move(out));
          },
          py::arg("boxes"), "Boxes given as (corner, lengths) pairs.")
      .def_static(
          "from_json", [](const std::string& text) { return domain_from_json(nlohmann::json::parse(text)); },
          py::arg("text"))
      .def_static("load", &load_domain, py::arg("path"))
      .def("to_json", [](const Domain& d) { return domain_to_json(d).dump(); })
      .def_property_readonly("dimension", &Domain::dimension)
      .def_property_readonly("kind", &Domain::kind)
      .def_property_readonly("is_raster", &Domain::is_raster)
      .def_property_readonly("volume", [](const Domain& d) { return volume(d); })
      .def_property_readonly("diameter", [](const Domain& d) { return diameter(d); })
      .def("contains", [](const Domain& d, const Point& p) { return contains(d, p); }, py::arg("point"))
      .def("rasterize", &rasterize, py::arg("h"))
      .def("__repr__", [](const Domain& d) { return "Domain(" + describe(d) + ")"; });

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("error_bound", &Estimate::error_bound)
      .def_property_readonly("kind", [](const Estimate& e) { return to_string(e.kind); })
      .def_property_readonly("method", [](const Estimate& e) { return to_string(e.method); })
      .def_readonly("meta", &Estimate::meta)
      .def("__repr__", [](const Estimate& e) {
        std::ostringstream os;
        os.precision(12);
        os << "Estimate(value=" << e.value << ", error_bound=" << e.error_bound << ", kind=" << to_string(e.kind)
           << ", method=" << to_string(e.method) << ")";
        return os.str();
      });

  py::class_<DerivativeEstimate>(m, "DerivativeEstimate")
      .def_readonly("order", &DerivativeEstimate::order)
      .def_readonly("value", &DerivativeEstimate::value)
      .def_readonly("step", &DerivativeEstimate::step)
      .def_readonly("error_estimate", &DerivativeEstimate::error_estimate)
      .def_readonly("richardson_levels", &DerivativeEstimate::richardson_levels);

  m.def("heat_kernel", [](int dim, double t, double r2) { return heat_kernel({dim, t, r2}); }, py::arg("m"),
        py::arg("t"), py::arg("r2"));
  m.def("heat_kernel_dt", [](int dim, double t, double r2) { return heat_kernel_dt({dim, t, r2}); }, py::arg("m"),
        py::arg("t"), py::arg("r2"));
  m.def(
      "kernel_dt_bound_margin",
      [](int dim, double t, double diam) { return kernel_dt_bound_check(dim, t, diam).margin; }, py::arg("m"),
      py::arg("t"), py::arg("diam"));

  m.def(
      "heat_content",
      [](const Domain& d, double t, const std::string& method, double h, double padding_sigmas,
         double samples_per_sigma, bool richardson, std::size_t n_samples, std::uint64_t seed) {
        const auto cfg = make_config(h, padding_sigmas, samples_per_sigma, richardson, n_samples, seed);
        py::gil_scoped_release release;
        return heat_content(d, t, method_for(d, method), cfg);
      },
      py::arg("domain"), py::arg("t"), py::arg("method") = "auto", ENGINE_ARGS,
      "H(t) by the named engine: auto, closed, grid, mc or brute.");

  m.def(
      "d2_semigroup",
      [](const Domain& d, double t, double h, double padding_sigmas, double samples_per_sigma) {
        GridConfig cfg;
        cfg.h = h;
        cfg.padding_sigmas = padding_sigmas;
        cfg.samples_per_sigma = samples_per_sigma;
        py::gil_scoped_release release;
        return hc_d2_semigroup(d, t, cfg);
      },
      py::arg("domain"), py::arg("t"), py::arg("h") = 0.0, py::arg("padding_sigmas") = 8.0,
      py::arg("samples_per_sigma") = 4.0, "Second derivative of H at time 2t from the Laplacian field.");

  m.def(
      "derivative",
      [](const Domain& d, double t, int order, const std::string& method, int levels, double h,
         double padding_sigmas, double samples_per_sigma, bool richardson, std::size_t n_samples,
         std::uint64_t seed) {
        const auto cfg = make_config(h, padding_sigmas, samples_per_sigma, richardson, n_samples, seed);
        const Method mth = method_for(d, method);
        const Domain vd = verification_domain(d, {mth, cfg});
        py::gil_scoped_release release;
        return fd_derivative([&](double s) { return heat_content(vd, s, mth, cfg); }, t, order, levels);
      },
      py::arg("domain"), py::arg("t"), py::arg("order"), py::arg("method") = "auto", py::arg("levels") = 0,
      ENGINE_ARGS);

  m.def(
      "verify",
      [](const std::string& case_id, const Domain& d, std::vector<double> t_grid, const std::string& method,
         double tolerance_floor, double tolerance_scale) {
        const CaseId id = parse_case_id(case_id);
        const EngineChoice engine{method_for(d, method), {}};
        if (t_grid.empty()) t_grid = default_t_grid(id, diameter(verification_domain(d, engine)));
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = verify(build_case(id), d, t_grid, engine, {tolerance_floor, tolerance_scale});
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict item;
          item["t"] = row.t;
          item["lhs"] = row.lhs;
          item["rhs"] = row.rhs;
          item["margin"] = row.margin;
          item["tolerance"] = row.tolerance;
          item["verdict"] = to_string(row.verdict);
          rows.append(item);
        }
        py::dict out;
        out["case_id"] = to_string(r.case_id);
        out["domain"] = r.domain_id;
        out["m"] = r.m;
        out["volume"] = r.volume;
        out["diameter"] = r.diameter;
        out["passed"] = r.overall_pass;
        out["rows"] = rows;
        return out;
      },
      py::arg("case_id"), py::arg("domain"), py::arg("t_grid") = std::vector<double>{}, py::arg("method") = "auto",
      py::arg("tolerance_floor") = 1e-9, py::arg("tolerance_scale") = 1.0,
      "Checks one inequality case; an empty t_grid selects the default grid for the case.");

  m.def("case_ids", [] {
    std::vector<std::string> ids;
    for (CaseId id : all_cases()) ids.push_back(to_string(id));
    return ids;
  });
  m.def("improved_constants", [](int dim) {
    const auto c = improved_constants(dim);
    return std::make_pair(c.mono, c.conv);
  }, py::arg("m"));
  m.def("bg24_constants", [](int dim) {
    const auto c = bg24_constants(dim);
    return std::make_pair(c.mono, c.conv);
  }, py::arg("m"));
  m.def("integrated_sharper", [](int dim) { return sharpness_compare(dim).integrated_sharper; }, py::arg("m"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}
