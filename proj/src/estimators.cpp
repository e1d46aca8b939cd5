#include "lossest/estimators.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "lossest/errors.hpp"

namespace lossest {

namespace {

std::string default_subset_label(const std::vector<int>& subset) {
  std::ostringstream os;
  os << "ls{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) os << ",";
    os << subset[i];
  }
  os << "}";
  return os.str();
}

void validate_subset(const std::vector<int>& subset, int p) {
  std::set<int> seen;
  for (int idx : subset) {
    if (idx < 0 || idx >= p)
      throw InvalidParameter("subset index " + std::to_string(idx) +
                             " outside the design (p = " + std::to_string(p) +
                             ")");
    if (!seen.insert(idx).second)
      throw InvalidParameter("subset indices must be distinct");
  }
}

FitResult fit_subset(const std::vector<int>& subset, const RegressionData& data) {
  const int n = data.n();
  const int m = data.m();
  const int k = static_cast<int>(subset.size());
  validate_subset(subset, data.p());

  FitResult out;
  out.df_method = DfMethod::analytic;
  if (k == 0) {
    out.fitted = Eigen::MatrixXd::Zero(n, m);
    out.divergence = 0.0;
    return out;
  }

  RegressionData sub;
  sub.X.resize(n, k);
  for (int j = 0; j < k; ++j) sub.X.col(j) = data.X.col(subset[j]);
  sub.Y = data.Y;
  CanonicalForm cf;
  try {
    cf = factorize(sub);
  } catch (const RankDeficient& e) {
    throw RankDeficient(subset[e.column],
                        "subset is rank deficient at design column " +
                            std::to_string(subset[e.column]));
  }
  out.fitted = sub.X * ls_fit(cf);
  out.divergence = static_cast<double>(k) * static_cast<double>(m);
  return out;
}

FitResult fit_ridge(double lambda, const RegressionData& data) {
  if (lambda < 0.0) throw InvalidParameter("ridge penalty must be >= 0");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      data.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd d = svd.singularValues();

  Eigen::VectorXd coef_scale(d.size());
  double div = 0.0;
  for (int i = 0; i < d.size(); ++i) {
    const double d2 = d(i) * d(i);
    coef_scale(i) = d(i) / (d2 + lambda);
    div += d2 / (d2 + lambda);
  }
  const Eigen::MatrixXd beta =
      svd.matrixV() * coef_scale.asDiagonal() * (svd.matrixU().transpose() * data.Y);

  FitResult out;
  out.fitted = data.X * beta;
  out.divergence = div * static_cast<double>(data.m());
  out.df_method = DfMethod::analytic;
  return out;
}

FitResult fit_shrink(double a, const CanonicalForm& cf) {
  if (a < 0.0) throw InvalidParameter("shrinkage constant must be >= 0");
  const double zn = cf.Z.squaredNorm();
  if (zn == 0.0)
    throw DegenerateInput("shrink_to_zero undefined at ||Z|| = 0");
  const double dim = static_cast<double>(cf.p() * cf.m());
  FitResult out;
  out.fitted = cf.Q1 * ((1.0 - a / zn) * cf.Z);
  out.divergence = dim - a * (dim - 2.0) / zn;
  out.df_method = DfMethod::analytic;
  return out;
}

}  // namespace

EstimatorSpec EstimatorSpec::least_squares_subset(std::vector<int> subset,
                                                  std::string label) {
  std::sort(subset.begin(), subset.end());
  EstimatorSpec spec;
  spec.kind_ = Kind::least_squares_subset;
  spec.label_ = label.empty() ? default_subset_label(subset) : std::move(label);
  spec.subset_ = std::move(subset);
  return spec;
}

EstimatorSpec EstimatorSpec::ridge(double lambda, std::string label) {
  EstimatorSpec spec;
  spec.kind_ = Kind::ridge;
  spec.lambda_ = lambda;
  if (label.empty()) {
    std::ostringstream os;
    os << "ridge(" << lambda << ")";
    spec.label_ = os.str();
  } else {
    spec.label_ = std::move(label);
  }
  return spec;
}

EstimatorSpec EstimatorSpec::shrink_to_zero(double a, std::string label) {
  EstimatorSpec spec;
  spec.kind_ = Kind::shrink_to_zero;
  spec.shrink_a_ = a;
  if (label.empty()) {
    std::ostringstream os;
    os << "shrink(" << a << ")";
    spec.label_ = os.str();
  } else {
    spec.label_ = std::move(label);
  }
  return spec;
}

EstimatorSpec EstimatorSpec::custom(FittedMap fitted, DivergenceMap divergence,
                                    std::string label,
                                    bool allow_finite_difference) {
  if (!fitted) throw InvalidParameter("custom estimator needs a fitted map");
  EstimatorSpec spec;
  spec.kind_ = Kind::custom;
  spec.label_ = std::move(label);
  spec.custom_fitted_ = std::move(fitted);
  spec.custom_divergence_ = std::move(divergence);
  spec.allow_fd_ = allow_finite_difference;
  return spec;
}

FitResult fit(const EstimatorSpec& spec, const CanonicalForm& cf,
              const RegressionData& data) {
  switch (spec.kind()) {
    case EstimatorSpec::Kind::least_squares_subset:
      return fit_subset(spec.subset(), data);
    case EstimatorSpec::Kind::ridge:
      return fit_ridge(spec.lambda(), data);
    case EstimatorSpec::Kind::shrink_to_zero:
      return fit_shrink(spec.shrink_a(), cf);
    case EstimatorSpec::Kind::custom: {
      FitResult out;
      out.fitted = spec.custom_fitted()(data.Y);
      if (spec.custom_divergence()) {
        out.divergence = spec.custom_divergence()(data.Y);
        out.df_method = DfMethod::analytic;
      } else if (spec.allow_finite_difference()) {
        out.divergence = finite_difference_divergence(spec.custom_fitted(), data.Y);
        out.df_method = DfMethod::finite_difference;
      } else {
        throw DivergenceUnavailable(
            "custom estimator has no divergence map and finite differences "
            "are disabled");
      }
      return out;
    }
  }
  throw InvalidParameter("unknown estimator kind");
}

double finite_difference_divergence(const FittedMap& fitted_map,
                                    const Eigen::MatrixXd& Y, double h) {
  if (!fitted_map) throw InvalidParameter("fitted map is empty");
  if (h == 0.0) {
    const double scale = 1.0 + Y.cwiseAbs().maxCoeff();
    h = std::cbrt(std::numeric_limits<double>::epsilon()) * scale;
  }
  if (!(h > 0.0)) throw InvalidParameter("step must be positive");

  // Probes are accumulated in row-major coordinate order so the sum is the
  // same no matter how the probes were scheduled.
  double acc = 0.0;
  Eigen::MatrixXd probe = Y;
  for (int i = 0; i < Y.rows(); ++i) {
    for (int j = 0; j < Y.cols(); ++j) {
      probe(i, j) = Y(i, j) + h;
      const double up = fitted_map(probe)(i, j);
      probe(i, j) = Y(i, j) - h;
      const double down = fitted_map(probe)(i, j);
      probe(i, j) = Y(i, j);
      if (!std::isfinite(up) || !std::isfinite(down))
        throw NonFiniteOutput("fitted map returned a non-finite value");
      acc += (up - down) / (2.0 * h);
    }
  }
  return acc;
}

FittedMap fitted_map(const EstimatorSpec& spec, const RegressionData& data,
                     double rank_tol) {
  RegressionData base = data;
  CanonicalForm cf = factorize(base, rank_tol);
  return [spec, base, cf](const Eigen::MatrixXd& y) mutable -> Eigen::MatrixXd {
    base.Y = y;
    cf.Z = cf.Q1.transpose() * y;
    cf.U = cf.Q2.transpose() * y;
    cf.S = cf.U.transpose() * cf.U;
    return fit(spec, cf, base).fitted;
  };
}

}  // namespace lossest
