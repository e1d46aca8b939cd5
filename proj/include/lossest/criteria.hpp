#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "lossest/canonical.hpp"
#include "lossest/estimators.hpp"

namespace lossest {

/// Divisor for the full-model variance estimate. residual_df is n-p;
/// residual_df_minus_2 (n-p-2) is exposed as an option but never the default.
enum class VarianceDivisor { residual_df, residual_df_minus_2 };

struct ReportOptions {
  VarianceDivisor divisor = VarianceDivisor::residual_df;
  double rank_tol = 1e-10;
};

struct CriterionReport {
  std::string label;
  double rss = 0.0;
  double df = 0.0;
  double sigma2_hat = 0.0;
  double cp = 0.0;
  double aic = 0.0;
  double delta0 = 0.0;
  std::optional<double> delta0_inv;  // absent when n - p - 2 <= 0 (m = 1)
};

/// rss / sigma2_hat + 2 df - n.
double mallows_cp(double rss, double sigma2_hat, double df, int n);

/// rss / sigma2_hat + 2 df. Gaussian-form AIC; equals Cp + n.
double aic_gaussian(double rss, double sigma2_hat, double df);

/// rss + (2 df - n) sigma2_hat, the unbiased estimator of the quadratic
/// prediction loss.
double delta0(double rss, double sigma2_hat, double df, int n);

/// (n-p-2) rss / s_norm + 2 df - n, where s_norm is the full-model residual
/// squared norm. Requires n >= 5 and n - p - 2 > 0.
double delta0_inv(double rss, double s_norm, double df, int n, int p);

/// (n-p-m-1) tr(residual S^{-1} residual') + 2 df - n m. For m = 1 this is
/// exactly delta0_inv (same arithmetic, bit for bit).
double delta0_inv_elliptical(const Eigen::MatrixXd& residual,
                             const Eigen::MatrixXd& S, double df, int n, int p,
                             int m);

/// Full pipeline: factorize, fit, and assemble every criterion.
CriterionReport report(const EstimatorSpec& spec, const RegressionData& data,
                       const ReportOptions& options = {});

/// Same, reusing a canonical form already computed for data.X.
CriterionReport report_with_canonical(const EstimatorSpec& spec,
                                      const RegressionData& data,
                                      const CanonicalForm& cf,
                                      const ReportOptions& options = {});

}  // namespace lossest
