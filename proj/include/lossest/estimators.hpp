#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lossest/canonical.hpp"

namespace lossest {

/// Map from a response Y (n x m) to fitted values (n x m).
using FittedMap = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;
using DivergenceMap = std::function<double(const Eigen::MatrixXd&)>;

enum class DfMethod { analytic, finite_difference };

struct FitResult {
  Eigen::MatrixXd fitted;  // n x m
  double divergence = 0.0;
  DfMethod df_method = DfMethod::analytic;
};

/// Recipe for an estimator whose fitted values depend on Y only through
/// Q1' Y. Built-in kinds carry analytic divergences.
class EstimatorSpec {
 public:
  enum class Kind { least_squares_subset, ridge, shrink_to_zero, custom };

  /// Least squares on the columns listed in `subset` (0-based, may be empty).
  static EstimatorSpec least_squares_subset(std::vector<int> subset,
                                            std::string label = {});
  /// Ridge with penalty lambda >= 0 on the full design.
  static EstimatorSpec ridge(double lambda, std::string label = {});
  /// theta_hat = (1 - a/||Z||^2) Z on the canonical coordinates, a >= 0.
  static EstimatorSpec shrink_to_zero(double a, std::string label = {});
  /// User-supplied fitted map; divergence falls back to central finite
  /// differences unless `allow_finite_difference` is off.
  static EstimatorSpec custom(FittedMap fitted, DivergenceMap divergence = nullptr,
                              std::string label = "custom",
                              bool allow_finite_difference = true);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const std::vector<int>& subset() const { return subset_; }
  double lambda() const { return lambda_; }
  double shrink_a() const { return shrink_a_; }
  const FittedMap& custom_fitted() const { return custom_fitted_; }
  const DivergenceMap& custom_divergence() const { return custom_divergence_; }
  bool allow_finite_difference() const { return allow_fd_; }

 private:
  EstimatorSpec() = default;
  Kind kind_ = Kind::ridge;
  std::string label_;
  std::vector<int> subset_;
  double lambda_ = 0.0;
  double shrink_a_ = 0.0;
  FittedMap custom_fitted_;
  DivergenceMap custom_divergence_;
  bool allow_fd_ = true;
};

/// Fitted values and divergence for `spec` on the given data. `cf` must be
/// the canonical form of data.X.
FitResult fit(const EstimatorSpec& spec, const CanonicalForm& cf,
              const RegressionData& data);

/// Central-difference estimate of div_Y fitted_map(Y), probing each of the
/// n*m coordinates. h = 0 selects cbrt(eps) * (1 + max|Y|). Probe outputs
/// must be finite.
double finite_difference_divergence(const FittedMap& fitted_map,
                                    const Eigen::MatrixXd& Y, double h = 0.0);

/// The estimator as a map on responses, with the design factorized once.
FittedMap fitted_map(const EstimatorSpec& spec, const RegressionData& data,
                     double rank_tol = 1e-10);

}  // namespace lossest
