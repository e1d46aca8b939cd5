#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>

#include "lossest/canonical.hpp"
#include "lossest/criteria.hpp"
#include "lossest/distributions.hpp"
#include "lossest/estimators.hpp"

namespace lossest {

/// One Monte Carlo experiment: a fixed design, true coefficients known to
/// the harness, an error law, and an estimator under test. The design is
/// held fixed across replications; replication r uses the draw keyed by
/// (seed, r), so runs are reproducible independent of evaluation order.
struct McConfig {
  long replications = 100000;
  std::uint64_t seed = 0;
  NoiseLaw law = NoiseLaw::gaussian();
  Eigen::MatrixXd X;     // n x p
  Eigen::MatrixXd beta;  // p x m
  double sigma = 1.0;    // noise level for the vector model (m = 1)
  EstimatorSpec estimator = EstimatorSpec::ridge(0.0);
};

/// Outcome of one identity check. For paired checks both sides share the
/// same draws and diff_se comes from the per-replication differences; for
/// two-sample checks (expectations under different laws) the sides use
/// disjoint streams and diff_se pools the two standard errors. If every
/// per-replication difference is exactly zero the z-score is defined as 0.
struct IdentityReport {
  std::string identity_name;
  double lhs_mean = 0.0;
  double rhs_mean = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double diff_se = 0.0;
  double z_score = 0.0;
  long replications = 0;
  bool paired = true;

  bool pass(double z_threshold = 4.0) const;
};

/// Weakly differentiable map g: R^n -> R^n with its divergence.
struct VectorField {
  std::string name;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  std::function<double(const Eigen::VectorXd&)> divergence;

  static VectorField identity(int n);
  static VectorField constant(Eigen::VectorXd c);
  static VectorField linear(Eigen::MatrixXd a);
  /// Soft thresholding at level lambda; divergence counts surviving
  /// coordinates.
  static VectorField soft_threshold(double lambda);
  /// z -> (1 - a/||z||^2) z, divergence dim - a(dim-2)/||z||^2.
  static VectorField shrink_to_zero(double a);
};

/// g: p x m -> p x m acting on the canonical regression block.
struct MatrixField {
  std::string name;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> apply;
  std::function<double(const Eigen::MatrixXd&)> divergence;

  static MatrixField identity(int p, int m);
  static MatrixField constant(Eigen::MatrixXd c);
  /// Z -> M Z columnwise; divergence m * tr(M).
  static MatrixField linear(Eigen::MatrixXd m_left);
};

/// Scalar h(Y, S) with its S-derivative, for the chi-square identity.
struct ScalarInS {
  std::string name;
  std::function<double(const Eigen::VectorXd&, double)> value;
  std::function<double(const Eigen::VectorXd&, double)> d_ds;

  static ScalarInS s();
  static ScalarInS s_squared();
  static ScalarInS constant(double c);
};

/// m x m matrix T(Z, S) with the half-weighted derivative operator
/// D*T = sum_i dT_ii/dS_ii + (1/2) sum_{i != j} dT_ij/dS_ij.
struct MatrixInS {
  std::string name;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>
      value;
  std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)> dstar;

  static MatrixInS s(int m);
  /// T = tr(S) I_m.
  static MatrixInS trace_s_identity(int m);
  /// T = ((I - M) Z)' (I - M) Z + S, the residual Gram matrix of the linear
  /// smoother M acting on the canonical block.
  static MatrixInS residual_gram(Eigen::MatrixXd m_proj);
};

/// E[(Y-mu)' g(Y)] = sigma^2 E[div g(Y)] under Y ~ N(mu, sigma^2 I).
IdentityReport check_stein(const VectorField& g, const Eigen::VectorXd& mu,
                           double sigma, const McConfig& cfg);

/// E[h(Y,S)/sigma^2] = E[(n-p-2) h/S + 2 dh/dS] with S ~ sigma^2 chi2_{n-p}
/// independent of Y.
IdentityReport check_stein_haff_chi2(const ScalarInS& h, const McConfig& cfg);

/// E[(Z-theta)' g(Z)] = E[||U||^2 div g(Z) / (n-p)] under any spherical law
/// (m = 1).
IdentityReport check_stein_spherical(const VectorField& g, const McConfig& cfg);

/// E[tr((Z-theta) Sigma^{-1} g(Z)')] = E[||U||^2_{Sigma^{-1}} div g(Z) /
/// ((n-p) m)] under an elliptical law with scale Sigma.
IdentityReport check_stein_elliptical(const MatrixField& g, const McConfig& cfg);

/// E[tr(T Sigma^{-1})] = C E*[2 D*T + (n-p-m-1) tr(S^{-1} T)], the left side
/// sampled under the base law and the right side under the star law
/// (two-sample z).
IdentityReport check_stein_haff_elliptical(const MatrixInS& t, const McConfig& cfg);

enum class UnbiasedTarget { delta0, delta0_inv, delta0_inv_elliptical };

/// Mean criterion value against mean true loss. delta0: quadratic loss,
/// paired. delta0_inv: variance-scaled loss, paired. delta0_inv_elliptical:
/// invariant loss scaled by tau^2; the criterion side is sampled under the
/// star law (two-sample z).
IdentityReport check_unbiased(UnbiasedTarget target, const McConfig& cfg);

}  // namespace lossest
