#include "lossest/canonical.hpp"

#include <Eigen/QR>
#include <cmath>

#include "lossest/errors.hpp"

namespace lossest {

CanonicalForm factorize(const RegressionData& data, double rank_tol) {
  const int n = data.n();
  const int p = data.p();
  if (p < 1) throw DimensionError("design must have at least one column");
  if (n <= p)
    throw DimensionError("need more observations than columns (n = " +
                         std::to_string(n) + ", p = " + std::to_string(p) + ")");
  if (data.Y.rows() != n)
    throw DimensionError("response rows do not match the design");
  if (!(rank_tol > 0.0)) throw InvalidParameter("rank_tol must be positive");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(data.X);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd r =
      qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();

  // Fix signs so diag(R) > 0; makes the factor unique and runs reproducible.
  for (int i = 0; i < p; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }

  double max_diag = 0.0;
  for (int i = 0; i < p; ++i) max_diag = std::max(max_diag, std::abs(r(i, i)));
  for (int i = 0; i < p; ++i) {
    if (std::abs(r(i, i)) <= rank_tol * max_diag)
      throw RankDeficient(i, "design is rank deficient at column " +
                                 std::to_string(i));
  }

  CanonicalForm cf;
  cf.Q1 = q.leftCols(p);
  cf.Q2 = q.rightCols(n - p);
  cf.R = r;
  cf.Z = cf.Q1.transpose() * data.Y;
  cf.U = cf.Q2.transpose() * data.Y;
  cf.S = cf.U.transpose() * cf.U;
  return cf;
}

double variance_estimate(const CanonicalForm& cf) {
  if (cf.m() != 1)
    throw DimensionError("variance_estimate is defined for the vector model");
  return cf.U.squaredNorm() / static_cast<double>(cf.n() - cf.p());
}

Eigen::MatrixXd ls_fit(const CanonicalForm& cf) {
  return cf.R.triangularView<Eigen::Upper>().solve(cf.Z);
}

}  // namespace lossest
