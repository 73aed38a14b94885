#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regen/compensator.hpp"
#include "regen/error.hpp"
#include "regen/exponents.hpp"
#include "regen/harness.hpp"
#include "regen/limit_laws.hpp"
#include "regen/occupancy.hpp"
#include "regen/path.hpp"
#include "regen/phi_curve.hpp"
#include "regen/regime.hpp"
#include "regen/stats.hpp"

namespace py = pybind11;
using namespace regen;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

py::dict regime_dict(const RegimeReport& r) {
  py::dict d;
  d["regime"] = to_string(r.regime);
  d["gamma_hat"] = r.gamma_hat;
  d["trend"] = r.trend;
  d["probe"] = to_array(r.probe_points);
  d["ratio_trace"] = to_array(r.ratio_trace);
  return d;
}

py::dict sample_dict(const LimitSample& s) {
  py::dict d;
  d["grid"] = to_array(s.grid);
  d["y"] = to_array(s.y_values);
  d["terminal"] = s.terminal;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core routines of the regenerative composition toolkit";
  py::register_exception<Error>(m, "RegenError");

  py::class_<LevyModel>(m, "LevyModel")
      .def_property_readonly("name", &LevyModel::name)
      .def_property_readonly("sigma2", &LevyModel::sigma2)
      .def_property_readonly("finite_activity", &LevyModel::finite_activity)
      .def("tail", &LevyModel::tail, py::arg("x"))
      .def("__repr__", [](const LevyModel& lm) { return "<LevyModel " + lm.name() + ">"; });

  m.def("make_model", &make_model, py::arg("name"), py::arg("params") = std::map<std::string, double>{},
        "Normalized model by name: gamma, compound-poisson, fast or loglog.");
  m.def("phi0", &phi0, py::arg("model"), py::arg("m"));
  m.def("phi", &phi_poissonized, py::arg("model"), py::arg("n"), "Poissonized exponent by quadrature.");
  m.def("phi_series", &phi_series, py::arg("model"), py::arg("n"), "Poissonized exponent by its Poisson series.");
  m.def("ell", py::overload_cast<const LevyModel&, double>(&ell), py::arg("model"), py::arg("s"));
  m.def("big_psi", &big_psi, py::arg("model"), py::arg("n"));
  m.def("big_psi2", &big_psi2, py::arg("model"), py::arg("n"));

  m.def(
      "classify_regime",
      [](const LevyModel& model, std::optional<std::vector<double>> probe) {
        const auto grid = probe ? *probe : default_probe_grid(model);
        return regime_dict(classify_regime(model, grid));
      },
      py::arg("model"), py::arg("probe") = py::none());

  py::class_<PhiCurve>(m, "PhiCurve")
      .def(py::init<const LevyModel&, double>(), py::arg("model"), py::arg("v_max"))
      .def("phi", &PhiCurve::phi, py::arg("m"))
      .def("ell", &PhiCurve::ell, py::arg("s"))
      .def("psi", &PhiCurve::psi, py::arg("n"))
      .def_property_readonly("v_max", &PhiCurve::v_max);

  py::class_<SubordinatorPath>(m, "SubordinatorPath")
      .def_readonly("drift", &SubordinatorPath::drift)
      .def_readonly("eps", &SubordinatorPath::eps)
      .def_readonly("horizon_t", &SubordinatorPath::horizon_t)
      .def_readonly("horizon_s", &SubordinatorPath::horizon_s)
      .def_property_readonly("jump_times",
                             [](const SubordinatorPath& p) {
                               std::vector<double> v;
                               for (const auto& j : p.jumps) v.push_back(j.t);
                               return to_array(v);
                             })
      .def_property_readonly("jump_sizes",
                             [](const SubordinatorPath& p) {
                               std::vector<double> v;
                               for (const auto& j : p.jumps) v.push_back(j.x);
                               return to_array(v);
                             })
      .def("level_at", [](const SubordinatorPath& p, double t) { return level_at(p, t); }, py::arg("t"))
      .def("passage_time", [](const SubordinatorPath& p, double level) { return passage_time(p, level).tau; },
           py::arg("level"));

  m.def(
      "sample_path",
      [](const LevyModel& model, double target_level, double eps, std::uint64_t seed, double extra_time,
         std::uint32_t replicate) { return PathSampler(model, eps).sample(target_level, extra_time, seed, replicate); },
      py::arg("model"), py::arg("target_level"), py::arg("eps"), py::arg("seed"), py::arg("extra_time") = 0.0,
      py::arg("replicate") = 0);

  m.def(
      "count_occupied",
      [](const SubordinatorPath& path, py::array_t<double, py::array::c_style | py::array::forcecast> locations) {
        const auto r = count_occupied(path, to_vector(locations));
        py::dict d;
        d["k_total"] = r.k_total;
        d["composition"] = r.composition;
        d["outside_atoms"] = r.outside_atoms;
        d["uncovered_atoms"] = r.uncovered_atoms;
        return d;
      },
      py::arg("path"), py::arg("locations"), "Occupied gaps for sorted atom locations.");

  m.def(
      "compensator",
      [](const PhiCurve& curve, const SubordinatorPath& path, double n,
         py::array_t<double, py::array::c_style | py::array::forcecast> grid) {
        const auto c = compensator(curve, path, n, to_vector(grid));
        return py::make_tuple(to_array(c.a_values), to_array(c.a_star_values));
      },
      py::arg("curve"), py::arg("path"), py::arg("n"), py::arg("grid"),
      "Compensator and its linearization on a time grid.");

  m.def(
      "sample_y1",
      [](double gamma, double sigma, py::array_t<double, py::array::c_style | py::array::forcecast> grid,
         std::uint64_t seed, std::uint32_t replicate) {
        return sample_dict(sample_y1(gamma, sigma, to_vector(grid), seed, replicate));
      },
      py::arg("gamma"), py::arg("sigma"), py::arg("grid"), py::arg("seed"), py::arg("replicate") = 0);
  m.def(
      "sample_y2",
      [](double sigma, double u_max, py::array_t<double, py::array::c_style | py::array::forcecast> grid,
         std::uint64_t seed, std::uint32_t replicate) {
        return sample_dict(sample_y2(sigma, u_max, to_vector(grid), seed, replicate));
      },
      py::arg("sigma"), py::arg("u_max"), py::arg("grid"), py::arg("seed"), py::arg("replicate") = 0);
  m.def("y1_terminal_variance", &y1_terminal_variance, py::arg("gamma"), py::arg("sigma"));
  m.def("y2_terminal_variance", &y2_terminal_variance, py::arg("sigma"), py::arg("u_max"));

  py::class_<Summary>(m, "Summary")
      .def_readonly("count", &Summary::count)
      .def_readonly("mean", &Summary::mean)
      .def_readonly("var", &Summary::var)
      .def_readonly("se_mean", &Summary::se_mean)
      .def_readonly("se_var", &Summary::se_var)
      .def_readonly("skewness", &Summary::skewness);
  m.def(
      "summarize",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x) { return summarize(to_vector(x)); },
      py::arg("x"));

  m.def(
      "run_suite_json",
      [](const std::string& path, std::optional<std::string> suite, std::optional<std::uint64_t> seed,
         std::optional<unsigned> workers) {
        auto c = load_config(path);
        if (suite) c.suite = suite_from_string(*suite);
        if (seed) c.seed = *seed;
        if (workers) c.workers = *workers;
        ExperimentStats st;
        {
          py::gil_scoped_release release;
          st = run_suite(c);
        }
        return to_json(st).dump();
      },
      py::arg("config_path"), py::arg("suite") = py::none(), py::arg("seed") = py::none(),
      py::arg("workers") = py::none());
}
