#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/harness.hpp"
#include "setstat/inverse_opt.hpp"
#include "setstat/inverse_opt_io.hpp"
#include "setstat/kernel_regression.hpp"
#include "setstat/random_sets.hpp"
#include "setstat/set_io.hpp"

namespace py = pybind11;
using namespace setstat;

namespace {

RngSeed make_seed(std::uint64_t seed, std::uint64_t stream) { return RngSeed{seed, stream}; }

ObservationDataset dataset_from_arrays(const Mat& u, const Mat& y) {
  if (u.rows() != y.rows()) throw InvalidArgument("u and y need the same number of rows");
  ObservationDataset d;
  for (Eigen::Index i = 0; i < u.rows(); ++i) d.samples.push_back({u.row(i).transpose(), y.row(i).transpose()});
  return d;
}

py::tuple dataset_to_arrays(const ObservationDataset& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Mat u(n, d.size() ? d.samples[0].u.size() : 0);
  Mat y(n, d.size() ? d.samples[0].y.size() : 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    u.row(i) = d.samples[static_cast<std::size_t>(i)].u.transpose();
    y.row(i) = d.samples[static_cast<std::size_t>(i)].y.transpose();
  }
  return py::make_tuple(u, y);
}

Kernel kernel_from(const std::string& name) {
  if (name == "epanechnikov") return Kernel::epanechnikov;
  if (name == "indicator") return Kernel::indicator;
  throw InvalidArgument("unknown kernel '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_setstat, m) {
  m.doc() = "Set-valued statistics: convex set arithmetic, random sets, set regression, inverse optimisation.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<NoLocalData>(m, "NoLocalData", base.ptr());
  py::register_exception<SolverCapHit>(m, "SolverCapHit", base.ptr());
  py::register_exception<LawNotComputable>(m, "LawNotComputable", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // ---- geometry
  py::class_<ConvexSet>(m, "ConvexSet")
      .def_static("polytope", &ConvexSet::polytope, py::arg("vertices"))
      .def_static("point", &ConvexSet::point)
      .def_static("interval", &ConvexSet::interval, py::arg("lo"), py::arg("hi"))
      .def_static("box", &ConvexSet::box, py::arg("lower"), py::arg("upper"))
      .def_static("ball", &ConvexSet::ball, py::arg("center"), py::arg("radius"))
      .def_static("zonotope", &ConvexSet::zonotope, py::arg("center"), py::arg("generators"),
                  py::arg("weights"))
      .def_property_readonly("dim", &ConvexSet::dim)
      .def_property_readonly("kind", [](const ConvexSet& c) { return std::string(c.type_name()); })
      .def("vertices", [](const ConvexSet& c) { return vertex_list(c, nullptr); })
      .def("support", [](const ConvexSet& c, const Vec& u) { return support(c, u); })
      .def("contains", [](const ConvexSet& c, const Vec& x, double tol) { return contains(c, x, tol); },
           py::arg("x"), py::arg("tol") = 1e-9)
      .def("to_json", [](const ConvexSet& c) { return to_json(c).dump(); })
      .def_static("from_json", [](const std::string& s) { return set_from_json(nlohmann::json::parse(s)); })
      .def("__repr__", [](const ConvexSet& c) {
        return "<ConvexSet " + std::string(c.type_name()) + " dim=" + std::to_string(c.dim()) + ">";
      });

  m.def("minkowski_sum", &minkowski_sum);
  m.def("minkowski_diff", &minkowski_diff);
  m.def("translate", &translate);
  m.def("scale", py::overload_cast<double, const ConvexSet&>(&scale));
  m.def("linear_map", py::overload_cast<const Mat&, const ConvexSet&>(&scale));
  m.def("convex_hull_union", &convex_hull_union);
  m.def("intersect", &intersect);
  m.def("hausdorff", &hausdorff);
  m.def("dist_point", &dist_point);
  m.def("nearest_point", &nearest_point);
  m.def("integrated_distance", [](const ConvexSet& a, const ConvexSet& b) { return integrated_distance(a, b).value; });
  m.def("weighted_minkowski_average",
        [](const std::vector<double>& w, const std::vector<ConvexSet>& sets) {
          return weighted_minkowski_average(w, sets);
        });

  // ---- random sets
  m.def(
      "rats_minkowski_mean",
      [](const ConvexSet& body, const Vec& lower, const Vec& upper, int n, std::uint64_t seed) {
        return minkowski_mean({body, NoiseDistribution::uniform_box(lower, upper)}, n, make_seed(seed, 0));
      },
      py::arg("body"), py::arg("noise_lower"), py::arg("noise_upper"), py::arg("n"), py::arg("seed") = 0,
      "Minkowski average of n draws of body + U(box) noise.");
  m.def(
      "rats_expectation",
      [](const ConvexSet& body, const Vec& lower, const Vec& upper) {
        return selection_expectation_rats({body, NoiseDistribution::uniform_box(lower, upper)});
      },
      py::arg("body"), py::arg("noise_lower"), py::arg("noise_upper"));
  m.def(
      "slln_curve",
      [](const ConvexSet& body, const Vec& lower, const Vec& upper, const std::vector<long>& n_values,
         int replicates, std::uint64_t seed) {
        const auto rows = slln_curve({body, NoiseDistribution::uniform_box(lower, upper)}, n_values, replicates,
                                     make_seed(seed, 0));
        std::vector<std::tuple<long, double, double>> out;
        for (const auto& r : rows) out.emplace_back(r.n, r.mean_error, r.median_error);
        return out;
      },
      py::arg("body"), py::arg("noise_lower"), py::arg("noise_upper"), py::arg("n_values"), py::arg("replicates"),
      py::arg("seed") = 0, "Rows (n, mean error, median error).");

  // ---- kernel regression
  py::class_<SetRegressionDataset>(m, "SetRegressionDataset")
      .def("__len__", [](const SetRegressionDataset& d) { return d.samples.size(); })
      .def("x", [](const SetRegressionDataset& d, std::size_t i) { return d.samples.at(i).x; })
      .def("set", [](const SetRegressionDataset& d, std::size_t i) { return d.samples.at(i).set; });
  m.def(
      "fig1_generate", [](int n, std::uint64_t seed) { return fig1_generate(n, make_seed(seed, 0)); },
      py::arg("n"), py::arg("seed") = 0);
  m.def("fig1_truth", &fig1_truth);
  m.def("default_bandwidth", &default_bandwidth);
  m.def(
      "kernel_estimate",
      [](const SetRegressionDataset& d, const Vec& u, double h, const std::string& kernel) {
        return estimate(d, kernel_from(kernel), u, h);
      },
      py::arg("data"), py::arg("u"), py::arg("h"), py::arg("kernel") = "epanechnikov");

  // ---- inverse optimisation
  py::class_<ParametricProgram>(m, "ParametricProgram")
      .def_property_readonly("name", &ParametricProgram::name)
      .def_property_readonly("x_dim", &ParametricProgram::x_dim)
      .def_property_readonly("theta_dim", &ParametricProgram::theta_dim)
      .def("value", [](const ParametricProgram& p, const Vec& u, const Vec& th) { return value_function(p, u, th); })
      .def("solution_set", [](const ParametricProgram& p, const Vec& u, double eps, const Vec& th) {
        return eps_argmin_set(p, u, eps, th);
      });
  py::class_<BoxLinearProgram, ParametricProgram>(m, "BoxLinearProgram")
      .def(py::init<int, double>(), py::arg("dim") = 1, py::arg("bound") = 2.0);
  py::class_<BoxQuadraticProgram, ParametricProgram>(m, "BoxQuadraticProgram")
      .def(py::init<double>(), py::arg("bound") = 1.0);

  py::class_<RdfValue>(m, "RdfValue")
      .def_readonly("value", &RdfValue::value)
      .def_readonly("grad_theta", &RdfValue::grad_theta)
      .def_readonly("grad_lambda", &RdfValue::grad_lambda)
      .def_readonly("x", &RdfValue::x);
  m.def("rdf_eval", &rdf_eval, py::arg("program"), py::arg("u"), py::arg("theta"), py::arg("lam"), py::arg("mu"));

  py::class_<EstimationResult>(m, "EstimationResult")
      .def_readonly("estimator", &EstimationResult::estimator)
      .def_readonly("eps_hat", &EstimationResult::eps_hat)
      .def_readonly("theta_hat", &EstimationResult::theta_hat)
      .def_readonly("objective", &EstimationResult::objective)
      .def_readonly("lam", &EstimationResult::lambda)
      .def_readonly("skipped", &EstimationResult::skipped)
      .def("to_json", [](const EstimationResult& r) { return to_json(r).dump(); });

  m.def(
      "fig2_generate", [](int n, std::uint64_t seed) { return dataset_to_arrays(fig2_generate(n, make_seed(seed, 0))); },
      py::arg("n"), py::arg("seed") = 0, "Arrays (u, y), one row per observation.");
  m.def(
      "box_quadratic_generate",
      [](int n, double r, std::uint64_t seed, double eps0) {
        return dataset_to_arrays(box_quadratic_generate(n, r, make_seed(seed, 0), eps0));
      },
      py::arg("n"), py::arg("r"), py::arg("seed") = 0, py::arg("eps0") = 1.0);

  auto prior_for = [](const ParametricProgram& p, double step, double w) {
    PriorRegion prior = PriorRegion::fig2_default(p.theta_dim(), step);
    prior.w = ConvexSet::interval(-w, w);
    return prior;
  };
  m.def(
      "estimate_inverse",
      [prior_for](const ParametricProgram& p, const Mat& u, const Mat& y, const std::string& method, double step,
                  double w, std::optional<double> lam) {
        const auto data = dataset_from_arrays(u, y);
        const auto prior = prior_for(p, step, w);
        py::gil_scoped_release release;
        if (method == "abp") return abp_estimate(p, data, prior, lam);
        if (method == "mle") return mle_estimate(p, data, prior, NoiseDistribution::uniform_interval(-w, w));
        if (method == "via") return via_estimate(p, data, prior);
        if (method == "kkt") return kkt_estimate(p, data, prior);
        throw InvalidArgument("unknown method '" + method + "'");
      },
      py::arg("program"), py::arg("u"), py::arg("y"), py::arg("method") = "abp", py::arg("grid_step") = 0.05,
      py::arg("noise_halfwidth") = 1.0, py::arg("lam") = py::none(),
      "Grid estimate of (eps, theta) on eps in [0.1, 10], theta in [-2, 2]^p, W = [-w, w].");

  // ---- harness
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto config = parse_config(nlohmann::json::parse(config_json));
        py::gil_scoped_release release;
        return run(config).summary().dump();
      },
      py::arg("config_json"), "Runs an experiment config; returns the summary as a JSON string.");
  m.attr("__version__") = tool_version();
}
