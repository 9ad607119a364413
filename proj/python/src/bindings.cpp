#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetprobit/distributions.hpp"
#include "hetprobit/errors.hpp"
#include "hetprobit/gibbs.hpp"
#include "hetprobit/kernels.hpp"
#include "hetprobit/model.hpp"
#include "hetprobit/normal.hpp"
#include "hetprobit/posterior.hpp"
#include "hetprobit/rng.hpp"
#include "hetprobit/simstudy.hpp"

namespace py = pybind11;
using namespace hetprobit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gibbs sampler for semiparametric binary choice via the heteroskedastic "
            "probit form with a Gaussian process variance prior";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0)
      .def_property_readonly("seed", &RngStream::seed)
      .def_property_readonly("stream_id", &RngStream::stream_id)
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal);

  m.def("std_normal_cdf", &std_normal_cdf, py::arg("z"));
  m.def("std_normal_logcdf", &std_normal_logcdf, py::arg("z"));
  m.def("std_normal_quantile", &std_normal_quantile, py::arg("p"));

  py::enum_<TruncationRegion>(m, "TruncationRegion")
      .value("negative", TruncationRegion::negative)
      .value("nonnegative", TruncationRegion::nonnegative);
  m.def("sample_truncated_normal", &sample_truncated_normal, py::arg("rng"), py::arg("mean"),
        py::arg("variance"), py::arg("region"));
  m.def("sample_logistic", &sample_logistic, py::arg("rng"), py::arg("median"),
        py::arg("variance"));

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init([](double alpha, double length_scale) {
             KernelSpec spec{alpha, length_scale};
             spec.validate();
             return spec;
           }),
           py::arg("alpha"), py::arg("length_scale") = 1.0)
      .def_readwrite("alpha", &KernelSpec::alpha)
      .def_readwrite("length_scale", &KernelSpec::length_scale);
  m.def("matern", &matern, py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def("matern_radial", &matern_radial, py::arg("spec"), py::arg("r"));
  m.def(
      "gram_matrix",
      [](const KernelSpec& spec, const Eigen::MatrixXd& points) -> Eigen::MatrixXd {
        return gram(spec, points).values();
      },
      py::arg("spec"), py::arg("points"),
      "Jittered kernel matrix over the rows of `points`.");

  py::class_<MixtureTable>(m, "MixtureTable")
      .def_static("log_chisq1", &MixtureTable::log_chisq1)
      .def_property_readonly("weights",
                             [](const MixtureTable& t) { return std::vector<double>(t.weights.begin(), t.weights.end()); })
      .def_property_readonly("means",
                             [](const MixtureTable& t) { return std::vector<double>(t.means.begin(), t.means.end()); })
      .def_property_readonly("variances",
                             [](const MixtureTable& t) { return std::vector<double>(t.variances.begin(), t.variances.end()); })
      .def("validate", &MixtureTable::validate);
  m.def(
      "mixture_cdf_sup_distance",
      [](const MixtureTable& table, std::uint64_t seed, int n_draws) {
        RngStream rng(seed, 0);
        return mixture_cdf_sup_distance(table, rng, n_draws);
      },
      py::arg("table"), py::arg("seed") = 0, py::arg("n_draws") = 1000000);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXi, std::vector<std::string>,
                    const std::string&>(),
           py::arg("covariates"), py::arg("outcomes"), py::arg("names"),
           py::arg("normalized") = "")
      .def_static("from_csv", &Dataset::from_csv, py::arg("path"), py::arg("normalized") = "")
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("dim", &Dataset::dim)
      .def_property_readonly("covariates", &Dataset::covariates)
      .def_property_readonly("outcomes", &Dataset::outcomes)
      .def_property_readonly("names", &Dataset::names)
      .def_property_readonly("normalized_column", &Dataset::normalized_column)
      .def("to_internal", &Dataset::to_internal, py::arg("point_file_order"));

  py::class_<Coefficients>(m, "Coefficients")
      .def(py::init([](Eigen::VectorXd theta) { return Coefficients{std::move(theta)}; }),
           py::arg("theta"))
      .def_readwrite("theta", &Coefficients::theta)
      .def("full", &Coefficients::full)
      .def("index", &Coefficients::index, py::arg("x"));
  m.def("choice_probability", &choice_probability, py::arg("x"), py::arg("coefficients"),
        py::arg("g_at_x"));
  m.def("log_likelihood", &log_likelihood, py::arg("data"), py::arg("coefficients"),
        py::arg("g_at_design"));

  py::class_<GibbsConfig>(m, "GibbsConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &GibbsConfig::iterations)
      .def_readwrite("burn_in", &GibbsConfig::burn_in)
      .def_readwrite("thin", &GibbsConfig::thin)
      .def_readwrite("seed", &GibbsConfig::seed)
      .def_readwrite("stream_id", &GibbsConfig::stream_id)
      .def_readwrite("prediction_points", &GibbsConfig::prediction_points)
      .def_readwrite("grouping", &GibbsConfig::grouping);

  py::class_<PosteriorDraws>(m, "PosteriorDraws")
      .def_readonly("thetas", &PosteriorDraws::thetas)
      .def_readonly("g_draws", &PosteriorDraws::g_draws)
      .def_readonly("g_star_draws", &PosteriorDraws::g_star_draws)
      .def_readonly("prediction_points", &PosteriorDraws::prediction_points)
      .def_readonly("theta_names", &PosteriorDraws::theta_names)
      .def_readonly("retained", &PosteriorDraws::retained);

  m.def(
      "run_chain",
      [](const Dataset& data, const KernelSpec& spec, const GibbsConfig& config) {
        py::gil_scoped_release release;
        return run_chain(data, spec, config, MixtureTable::log_chisq1());
      },
      py::arg("data"), py::arg("kernel"), py::arg("config"));

  py::class_<CredibleInterval>(m, "CredibleInterval")
      .def_readonly("lower", &CredibleInterval::lower)
      .def_readonly("upper", &CredibleInterval::upper)
      .def_readonly("level", &CredibleInterval::level);

  py::class_<Summary>(m, "Summary")
      .def_readonly("theta_medians", &Summary::theta_medians)
      .def_readonly("theta_intervals", &Summary::theta_intervals)
      .def_readonly("theta_names", &Summary::theta_names)
      .def_readonly("predictive_probs", &Summary::predictive_probs)
      .def_readonly("decisions", &Summary::decisions)
      .def_readonly("ess", &Summary::ess);

  m.def("build_summary", &build_summary, py::arg("draws"), py::arg("level") = 0.95);
  m.def("empirical_quantile", &empirical_quantile, py::arg("values"), py::arg("p"));
  m.def("posterior_predictive",
        py::overload_cast<const PosteriorDraws&, int>(&posterior_predictive), py::arg("draws"),
        py::arg("point_index"));
  m.def("predictive_prob_draws", &predictive_prob_draws, py::arg("draws"),
        py::arg("point_index"));
  m.def("bayes_decision", &bayes_decision, py::arg("probability"));
  m.def("choice_prob_draws", &choice_prob_draws, py::arg("draws"), py::arg("data"), py::arg("i"));
  m.def("effective_sample_size", &effective_sample_size, py::arg("series"));

  m.def(
      "generate_dgp",
      [](int n, double theta_true, std::uint64_t seed, std::uint64_t stream_id) {
        DgpSpec spec;
        spec.n = n;
        spec.theta_true = theta_true;
        spec.seed = seed;
        RngStream rng(seed, stream_id);
        return generate_dgp(spec, rng);
      },
      py::arg("n"), py::arg("theta_true") = 1.0, py::arg("seed") = 0, py::arg("stream_id") = 0);

  py::class_<StudyRow>(m, "StudyRow")
      .def_readonly("alpha", &StudyRow::alpha)
      .def_readonly("mse", &StudyRow::mse)
      .def_readonly("mse_se", &StudyRow::mse_se)
      .def_readonly("coverage", &StudyRow::coverage)
      .def_readonly("coverage_se", &StudyRow::coverage_se)
      .def_readonly("avg_length", &StudyRow::avg_length)
      .def_readonly("avg_length_se", &StudyRow::avg_length_se)
      .def_readonly("replications", &StudyRow::replications)
      .def_readonly("failures", &StudyRow::failures);

  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("n", &StudyConfig::n)
      .def_readwrite("alphas", &StudyConfig::alphas)
      .def_readwrite("replications", &StudyConfig::replications)
      .def_readwrite("length_scale", &StudyConfig::length_scale)
      .def_readwrite("theta_true", &StudyConfig::theta_true)
      .def_readwrite("level", &StudyConfig::level)
      .def_readwrite("iterations", &StudyConfig::iterations)
      .def_readwrite("burn_in", &StudyConfig::burn_in)
      .def_readwrite("thin", &StudyConfig::thin)
      .def_readwrite("seed", &StudyConfig::seed)
      .def_readwrite("threads", &StudyConfig::threads)
      .def_readwrite("progress", &StudyConfig::progress);

  m.def(
      "run_study",
      [](const StudyConfig& config) {
        py::gil_scoped_release release;
        return run_study(config).rows;
      },
      py::arg("config"));
}
