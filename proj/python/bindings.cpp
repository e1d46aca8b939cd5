#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lossest/canonical.hpp"
#include "lossest/criteria.hpp"
#include "lossest/distributions.hpp"
#include "lossest/errors.hpp"
#include "lossest/estimators.hpp"
#include "lossest/selection.hpp"
#include "lossest/suite.hpp"
#include "lossest/verify.hpp"

namespace py = pybind11;
using namespace lossest;

namespace {

RegressionData make_data(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                         std::vector<std::string> names) {
  RegressionData d;
  d.X = x;
  d.Y = y.cols() == 0 ? Eigen::MatrixXd(y) : y;
  d.names = std::move(names);
  return d;
}

py::dict report_to_dict(const CriterionReport& r) {
  py::dict out;
  out["label"] = r.label;
  out["rss"] = r.rss;
  out["df"] = r.df;
  out["sigma2_hat"] = r.sigma2_hat;
  out["cp"] = r.cp;
  out["aic"] = r.aic;
  out["delta0"] = r.delta0;
  out["delta0_inv"] = r.delta0_inv ? py::cast(*r.delta0_inv) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Unbiased loss estimation criteria for linear model selection";

  py::register_exception<RankDeficient>(m, "RankDeficientError");
  py::register_exception<DimensionError>(m, "DimensionErrorCpp");
  py::register_exception<InvalidParameter>(m, "InvalidParameterError");
  py::register_exception<UnsupportedStarLaw>(m, "UnsupportedStarLawError");

  py::class_<RegressionData>(m, "RegressionData")
      .def(py::init(&make_data), py::arg("X"), py::arg("Y"),
           py::arg("names") = std::vector<std::string>{})
      .def_readonly("X", &RegressionData::X)
      .def_readonly("Y", &RegressionData::Y)
      .def_readonly("names", &RegressionData::names)
      .def_property_readonly("n", &RegressionData::n)
      .def_property_readonly("p", &RegressionData::p)
      .def_property_readonly("m", &RegressionData::m);

  py::class_<CanonicalForm>(m, "CanonicalForm")
      .def_readonly("Q1", &CanonicalForm::Q1)
      .def_readonly("Q2", &CanonicalForm::Q2)
      .def_readonly("R", &CanonicalForm::R)
      .def_readonly("Z", &CanonicalForm::Z)
      .def_readonly("U", &CanonicalForm::U)
      .def_readonly("S", &CanonicalForm::S);

  m.def("factorize", &factorize, py::arg("data"), py::arg("rank_tol") = 1e-10);
  m.def("variance_estimate", &variance_estimate);
  m.def("ls_fit", &ls_fit);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("fitted", &FitResult::fitted)
      .def_readonly("divergence", &FitResult::divergence)
      .def_property_readonly("df_method", [](const FitResult& fr) {
        return fr.df_method == DfMethod::analytic ? "analytic"
                                                  : "finite_difference";
      });

  py::class_<EstimatorSpec>(m, "EstimatorSpec")
      .def_static("least_squares_subset", &EstimatorSpec::least_squares_subset,
                  py::arg("subset"), py::arg("label") = std::string{})
      .def_static("ridge", &EstimatorSpec::ridge, py::arg("lambda_"),
                  py::arg("label") = std::string{})
      .def_static("shrink_to_zero", &EstimatorSpec::shrink_to_zero,
                  py::arg("a"), py::arg("label") = std::string{})
      .def_property_readonly("label", &EstimatorSpec::label);

  m.def("fit", &fit, py::arg("spec"), py::arg("cf"), py::arg("data"));
  m.def(
      "finite_difference_divergence",
      [](const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& map,
         const Eigen::MatrixXd& y, double h) {
        return finite_difference_divergence(map, y, h);
      },
      py::arg("fitted_map"), py::arg("Y"), py::arg("h") = 0.0);

  m.def("mallows_cp", &mallows_cp, py::arg("rss"), py::arg("sigma2_hat"),
        py::arg("df"), py::arg("n"));
  m.def("aic_gaussian", &aic_gaussian, py::arg("rss"), py::arg("sigma2_hat"),
        py::arg("df"));
  m.def("delta0", &delta0, py::arg("rss"), py::arg("sigma2_hat"),
        py::arg("df"), py::arg("n"));
  m.def("delta0_inv", &delta0_inv, py::arg("rss"), py::arg("s_norm"),
        py::arg("df"), py::arg("n"), py::arg("p"));
  m.def("delta0_inv_elliptical", &delta0_inv_elliptical, py::arg("residual"),
        py::arg("S"), py::arg("df"), py::arg("n"), py::arg("p"), py::arg("m"));
  m.def(
      "report",
      [](const EstimatorSpec& spec, const RegressionData& data,
         const std::string& divisor) {
        ReportOptions opt;
        if (divisor == "n-p-2")
          opt.divisor = VarianceDivisor::residual_df_minus_2;
        else if (divisor != "n-p")
          throw InvalidParameter("divisor must be 'n-p' or 'n-p-2'");
        return report_to_dict(report(spec, data, opt));
      },
      py::arg("spec"), py::arg("data"), py::arg("divisor") = "n-p");

  py::class_<NoiseLaw>(m, "NoiseLaw")
      .def_static("gaussian", &NoiseLaw::gaussian)
      .def_static("student_t", &NoiseLaw::student_t, py::arg("nu"))
      .def_static("variance_mixture", &NoiseLaw::variance_mixture,
                  py::arg("weights"), py::arg("variances"))
      .def_static("uniform_ball", &NoiseLaw::uniform_ball, py::arg("radius"),
                  py::arg("dimension"))
      .def("with_scale", &NoiseLaw::with_scale, py::arg("sigma"))
      .def("tau2", &NoiseLaw::tau2)
      .def("name", &NoiseLaw::name);

  py::class_<StarLaw>(m, "StarLaw")
      .def(py::init<NoiseLaw>(), py::arg("base"))
      .def_property_readonly("normalizer", &StarLaw::normalizer);

  m.def("sample", &sample, py::arg("law"), py::arg("n"), py::arg("m"),
        py::arg("seed"), py::arg("index") = 0);
  m.def("sample_star", &sample_star, py::arg("star"), py::arg("n"),
        py::arg("m"), py::arg("seed"), py::arg("index") = 0);
  m.def("tau2", [](const NoiseLaw& law) { return law.tau2(); });

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("identity_name", &IdentityReport::identity_name)
      .def_readonly("lhs_mean", &IdentityReport::lhs_mean)
      .def_readonly("rhs_mean", &IdentityReport::rhs_mean)
      .def_readonly("lhs_se", &IdentityReport::lhs_se)
      .def_readonly("rhs_se", &IdentityReport::rhs_se)
      .def_readonly("diff_se", &IdentityReport::diff_se)
      .def_readonly("z_score", &IdentityReport::z_score)
      .def_readonly("replications", &IdentityReport::replications)
      .def("passes", &IdentityReport::pass, py::arg("z_threshold") = 4.0);

  m.def("list_checks", [] {
    std::vector<std::string> names;
    for (const auto& check : default_suite()) names.push_back(check.name);
    return names;
  });
  m.def(
      "run_check",
      [](const std::string& name, std::uint64_t seed, long replications) {
        const SuiteCheck* check = find_check(name);
        if (check == nullptr)
          throw InvalidParameter("unknown check '" + name + "'");
        return check->run(seed, replications);
      },
      py::arg("name"), py::arg("seed") = 0, py::arg("replications") = 100000);

  m.def(
      "select",
      [](const RegressionData& data, const std::string& strategy,
         const std::string& criterion) {
        SelectionOptions opt;
        if (strategy == "exhaustive")
          opt.strategy = Strategy::exhaustive;
        else if (strategy == "forward")
          opt.strategy = Strategy::forward;
        else if (strategy == "backward")
          opt.strategy = Strategy::backward;
        else
          throw InvalidParameter("unknown strategy '" + strategy + "'");
        if (criterion == "cp")
          opt.criterion = SelectionCriterion::cp;
        else if (criterion == "aic")
          opt.criterion = SelectionCriterion::aic;
        else if (criterion == "delta0")
          opt.criterion = SelectionCriterion::delta0;
        else if (criterion == "delta0_inv")
          opt.criterion = SelectionCriterion::delta0_inv;
        else
          throw InvalidParameter("unknown criterion '" + criterion + "'");
        const SelectionResult res = run_selection(data, opt);
        py::list rows;
        for (const auto& row : res.rows) {
          py::dict d;
          d["subset"] = row.subset;
          d["rank_deficient"] = row.rank_deficient;
          if (!row.rank_deficient) d["report"] = report_to_dict(row.report);
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["selected"] = res.selected;
        return out;
      },
      py::arg("data"), py::arg("strategy") = "exhaustive",
      py::arg("criterion") = "cp");
}
