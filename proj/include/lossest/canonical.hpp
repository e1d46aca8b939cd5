#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace lossest {

/// A fixed design X (n x p) with response Y (n x m). m = 1 is the ordinary
/// vector regression model; m > 1 is the matrix-response model used with
/// elliptical errors.
struct RegressionData {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  std::vector<std::string> names;  // p column labels; may be empty

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  int m() const { return static_cast<int>(Y.cols()); }
};

/// Orthogonal reduction of the regression model. Q = [Q1 Q2] is orthogonal,
/// the columns of Q1 span col(X), X = Q1 * R with R upper triangular and
/// positive diagonal, and the response splits into
///   Z = Q1' Y   (p x m, the regression block)
///   U = Q2' Y   ((n-p) x m, the residual block), with S = U' U.
/// For the least squares fit, ||Y - X bhat||^2 equals ||U||^2.
struct CanonicalForm {
  Eigen::MatrixXd Q1;  // n x p
  Eigen::MatrixXd Q2;  // n x (n-p)
  Eigen::MatrixXd R;   // p x p upper triangular, positive diagonal
  Eigen::MatrixXd Z;   // p x m
  Eigen::MatrixXd U;   // (n-p) x m
  Eigen::MatrixXd S;   // m x m, U' U

  int n() const { return static_cast<int>(Q1.rows()); }
  int p() const { return static_cast<int>(Q1.cols()); }
  int m() const { return static_cast<int>(Z.cols()); }
};

/// Householder QR of the design with the sign convention fixed so every
/// diagonal entry of R is positive; the factorization is deterministic for
/// a given input. Throws DimensionError when n <= p and RankDeficient when
/// |R(i,i)| <= rank_tol * max_j |R(j,j)|.
CanonicalForm factorize(const RegressionData& data, double rank_tol = 1e-10);

/// ||U||^2 / (n - p), the full-model residual variance estimate (m = 1).
double variance_estimate(const CanonicalForm& cf);

/// Least squares coefficients (p x m), solved by back substitution on R.
Eigen::MatrixXd ls_fit(const CanonicalForm& cf);

}  // namespace lossest
