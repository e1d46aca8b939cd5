#include "lossest/criteria.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "lossest/errors.hpp"

namespace lossest {

double mallows_cp(double rss, double sigma2_hat, double df, int n) {
  if (sigma2_hat == 0.0) throw ZeroVariance("sigma2_hat is zero");
  return rss / sigma2_hat + 2.0 * df - static_cast<double>(n);
}

double aic_gaussian(double rss, double sigma2_hat, double df) {
  if (sigma2_hat == 0.0) throw ZeroVariance("sigma2_hat is zero");
  return rss / sigma2_hat + 2.0 * df;
}

double delta0(double rss, double sigma2_hat, double df, int n) {
  return rss + (2.0 * df - static_cast<double>(n)) * sigma2_hat;
}

double delta0_inv(double rss, double s_norm, double df, int n, int p) {
  if (n < 5) throw DimensionError("delta0_inv requires n >= 5");
  if (n - p - 2 <= 0) throw DimensionError("delta0_inv requires n - p - 2 > 0");
  if (s_norm == 0.0) throw ZeroResidual("full-model residual is zero");
  return static_cast<double>(n - p - 2) * rss / s_norm + 2.0 * df -
         static_cast<double>(n);
}

double delta0_inv_elliptical(const Eigen::MatrixXd& residual,
                             const Eigen::MatrixXd& S, double df, int n, int p,
                             int m) {
  if (S.rows() != m || S.cols() != m)
    throw DimensionError("S must be m x m");
  if (residual.rows() != n || residual.cols() != m)
    throw DimensionError("residual must be n x m");
  if (m == 1) {
    // The m = 1 case is the spherical criterion, computed by the exact same
    // arithmetic so the reduction is bit-for-bit.
    return delta0_inv(residual.squaredNorm(), S(0, 0), df, n, p);
  }
  if (n - p - m - 1 <= 0)
    throw DimensionError("elliptical criterion requires n > p + m + 1");

  const double s_scale = S.cwiseAbs().maxCoeff();
  if (s_scale == 0.0) throw SingularS("S is zero");
  if (!S.isApprox(S.transpose(), 1e-12)) throw SingularS("S is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw SingularS("S is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  for (int i = 0; i < m; ++i) {
    if (l(i, i) * l(i, i) <= 1e-12 * s_scale)
      throw SingularS("S is singular within tolerance");
  }

  // tr(residual S^{-1} residual') via the Cholesky solve.
  const Eigen::MatrixXd w = llt.solve(residual.transpose());  // m x n
  const double quad = (residual.transpose().cwiseProduct(w)).sum();
  return static_cast<double>(n - p - m - 1) * quad + 2.0 * df -
         static_cast<double>(n) * static_cast<double>(m);
}

CriterionReport report_with_canonical(const EstimatorSpec& spec,
                                      const RegressionData& data,
                                      const CanonicalForm& cf,
                                      const ReportOptions& options) {
  const int n = data.n();
  const int p = data.p();
  const int m = data.m();

  const FitResult fr = fit(spec, cf, data);
  CriterionReport rep;
  rep.label = spec.label();
  rep.rss = (data.Y - fr.fitted).squaredNorm();
  rep.df = fr.divergence;

  if (m == 1) {
    const int divisor = options.divisor == VarianceDivisor::residual_df
                            ? n - p
                            : n - p - 2;
    if (divisor <= 0)
      throw DimensionError("variance divisor is not positive");
    const double s_norm = cf.U.squaredNorm();
    rep.sigma2_hat = s_norm / static_cast<double>(divisor);
    rep.cp = mallows_cp(rep.rss, rep.sigma2_hat, rep.df, n);
    rep.aic = aic_gaussian(rep.rss, rep.sigma2_hat, rep.df);
    rep.delta0 = delta0(rep.rss, rep.sigma2_hat, rep.df, n);
    if (n >= 5 && n - p - 2 > 0 && s_norm > 0.0)
      rep.delta0_inv = delta0_inv(rep.rss, s_norm, rep.df, n, p);
  } else {
    // Cp/AIC/delta0 are vector-model criteria; for matrix responses only
    // the invariant-loss criterion is defined.
    if (n > p + m + 1)
      rep.delta0_inv =
          delta0_inv_elliptical(data.Y - fr.fitted, cf.S, rep.df, n, p, m);
  }
  return rep;
}

CriterionReport report(const EstimatorSpec& spec, const RegressionData& data,
                       const ReportOptions& options) {
  const CanonicalForm cf = factorize(data, options.rank_tol);
  return report_with_canonical(spec, data, cf, options);
}

}  // namespace lossest
