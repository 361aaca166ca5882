#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fujitalab/cantor.hpp"
#include "fujitalab/covering.hpp"
#include "fujitalab/experiments.hpp"
#include "fujitalab/geometry.hpp"
#include "fujitalab/heat_kernel.hpp"
#include "fujitalab/maximal.hpp"
#include "fujitalab/measures.hpp"
#include "fujitalab/solver.hpp"

namespace py = pybind11;
using namespace fujitalab;

PYBIND11_MODULE(_fujitalab, m) {
  m.doc() = "numerical experiments for semilinear heat flow on model spaces";

  py::enum_<ManifoldKind>(m, "ManifoldKind")
      .value("Euclidean", ManifoldKind::Euclidean)
      .value("Sphere", ManifoldKind::Sphere)
      .value("Hyperbolic", ManifoldKind::Hyperbolic)
      .value("Circle", ManifoldKind::Circle)
      .value("Cylinder", ManifoldKind::Cylinder);

  py::class_<Point>(m, "Point")
      .def(py::init<std::vector<double>, int>(), py::arg("coords"), py::arg("chart") = 0)
      .def_readonly("x", &Point::x);

  py::class_<ThresholdRadii>(m, "ThresholdRadii")
      .def_readonly("rho_T", &ThresholdRadii::rho_T)
      .def_readonly("rho_inf", &ThresholdRadii::rho_inf);

  py::class_<ModelManifold>(m, "ModelManifold")
      .def_property_readonly("kind", &ModelManifold::kind)
      .def_property_readonly("dim", &ModelManifold::dim)
      .def_property_readonly("curvature_scale", &ModelManifold::curvature_scale)
      .def_property_readonly("injectivity_radius", &ModelManifold::injectivity_radius)
      .def("geodesic_distance", &ModelManifold::geodesic_distance)
      .def("volume_density", &ModelManifold::volume_density)
      .def("ball_volume", &ModelManifold::ball_volume)
      .def("laplacian_distance", &ModelManifold::laplacian_distance)
      .def("threshold_radii", &ModelManifold::threshold_radii)
      .def("rho_infinity", &ModelManifold::rho_infinity);

  m.def("make_manifold", &make_manifold, py::arg("kind"), py::arg("dim"),
        py::arg("curvature_scale"), py::arg("sphere_factor_dim") = 0);
  m.def("fujita_exponent", &fujita_exponent);
  m.def("unit_sphere_area", &unit_sphere_area);

  py::class_<HeatKernelEvaluator>(m, "HeatKernelEvaluator")
      .def(py::init([](const ModelManifold& M) { return HeatKernelEvaluator(M); }))
      .def("kernel_radial", &HeatKernelEvaluator::kernel_radial)
      .def("kernel_eval", &HeatKernelEvaluator::kernel_eval)
      .def("kernel_mass", &HeatKernelEvaluator::kernel_mass, py::arg("t"),
           py::arg("rel_tol") = 1e-9)
      .def("semigroup_defect", &HeatKernelEvaluator::semigroup_defect, py::arg("d"),
           py::arg("s"), py::arg("t"), py::arg("rel_tol") = 1e-9)
      .def("harnack_ratio", &HeatKernelEvaluator::harnack_ratio)
      .def("scaling_ratio", &HeatKernelEvaluator::scaling_ratio);

  py::class_<CantorLevelInfo>(m, "CantorLevelInfo")
      .def_readonly("log_R", &CantorLevelInfo::log_R)
      .def_readonly("R", &CantorLevelInfo::R)
      .def_readonly("ratio", &CantorLevelInfo::ratio)
      .def_readonly("identity_residual", &CantorLevelInfo::identity_residual);

  py::class_<CantorSet>(m, "CantorSet")
      .def_readonly("N", &CantorSet::N)
      .def_readonly("p", &CantorSet::p)
      .def_readonly("n_max", &CantorSet::n_max)
      .def_readonly("levels", &CantorSet::levels)
      .def_readonly("r_bar", &CantorSet::r_bar)
      .def_readonly("r_lower", &CantorSet::r_lower)
      .def_readonly("representable_levels", &CantorSet::representable_levels)
      .def("to_json", &CantorSet::to_json);

  m.def("cantor_levels", &cantor_levels);
  m.def("phi_log", &phi_log);

  py::class_<RadonMeasure>(m, "RadonMeasure")
      .def_static("zero", &RadonMeasure::zero)
      .def_static("dirac", &RadonMeasure::dirac)
      .def_static("uniform", &RadonMeasure::uniform)
      .def_static("lebesgue", &RadonMeasure::lebesgue);
  m.def("critical_profile", &critical_profile);
  m.def("singular_profile", &singular_profile);
  m.def("ball_mass", &ball_mass, py::arg("mu"), py::arg("M"), py::arg("z"), py::arg("rho"),
        py::arg("rel_tol") = 1e-9);
  m.def("sup_ball_mass",
        [](const RadonMeasure& mu, const ModelManifold& M, double rho) {
          auto r = sup_ball_mass(mu, M, rho);
          return py::make_tuple(r.value, r.argmax.x, r.resolution);
        });
  m.def("linheat_constant", &linheat_constant);

  py::class_<RatioCurve>(m, "RatioCurve")
      .def_readonly("n", &RatioCurve::n)
      .def_readonly("ratio", &RatioCurve::ratio)
      .def_readonly("log_ratio_p", &RatioCurve::log_ratio_p)
      .def_readonly("lower_sums", &RatioCurve::lower_sums)
      .def_readonly("fitted_c", &RatioCurve::fitted_c)
      .def_readonly("fitted_C", &RatioCurve::fitted_C)
      .def("to_csv", &RatioCurve::to_csv);
  m.def("ratio_curve", &ratio_curve, py::arg("S"), py::arg("M"), py::arg("n_max"),
        py::arg("s_grid") = 240, py::arg("lambda_du") = 0.25);
  m.def("lower_sum", &lower_sum);
  m.def("divergence_partial", &divergence_partial);

  py::class_<DisResult>(m, "DisResult")
      .def_readonly("count", &DisResult::count)
      .def_readonly("min_pairwise", &DisResult::min_pairwise);
  m.def("dis_greedy", &dis_greedy, py::arg("N"), py::arg("w"), py::arg("restarts") = 8,
        py::arg("candidates") = 4096, py::arg("seed") = 0);
  m.def("packing_count_bound", &packing_count_bound);

  py::class_<BlowupResult>(m, "BlowupResult")
      .def_readonly("blew_up", &BlowupResult::blew_up)
      .def_readonly("blow_time", &BlowupResult::blow_time)
      .def_readonly("final_sup", &BlowupResult::final_sup);

  py::class_<Grid>(m, "Grid")
      .def_static("line", &Grid::line)
      .def_static("circle", &Grid::circle)
      .def_static("radial", &Grid::radial)
      .def("covered_volume", &Grid::covered_volume)
      .def_property_readonly("nodes", [](const Grid& g) { return g.nodes; });

  py::class_<Field>(m, "Field")
      .def(py::init([](std::vector<double> v, double t) {
             Field f;
             f.values = std::move(v);
             f.time = t;
             return f;
           }),
           py::arg("values"), py::arg("time") = 0.0)
      .def_readonly("values", &Field::values)
      .def_readonly("time", &Field::time);

  py::class_<IterationConfig>(m, "IterationConfig").def(py::init<>());

  m.def("blowup_probe", &blowup_probe, py::arg("E"), py::arg("u0"), py::arg("grid"),
        py::arg("p"), py::arg("horizon"), py::arg("steps"),
        py::arg("cfg") = IterationConfig{});

  m.def("run_experiment_json",
        [](const std::string& config_json, std::uint64_t seed) {
          ExperimentOutput out = run_experiment(nlohmann::json::parse(config_json), seed);
          py::dict d;
          d["experiment"] = out.experiment;
          d["pass"] = out.pass;
          d["config_error"] = out.config_error;
          d["error"] = out.error;
          py::list checks;
          for (const auto& c : out.checks) {
            py::dict cd;
            cd["name"] = c.name;
            cd["pass"] = c.pass;
            cd["value"] = c.value;
            cd["threshold"] = c.threshold;
            checks.append(cd);
          }
          d["checks"] = checks;
          return d;
        },
        py::arg("config_json"), py::arg("seed") = 0);
  m.def("default_config_json", [](const std::string& id) { return default_config(id).dump(); });
}
