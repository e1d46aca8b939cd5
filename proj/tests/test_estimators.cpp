#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "lossest/distributions.hpp"
#include "lossest/errors.hpp"
#include "lossest/estimators.hpp"
#include "lossest/numeric.hpp"
#include "test_support.hpp"

using namespace lossest;
using test_support::close_rel;
using test_support::random_data;
using test_support::random_matrix;

namespace {

// Design with prescribed singular values, via orthonormal factors from QR.
Eigen::MatrixXd design_with_singular_values(int n, const Eigen::VectorXd& d,
                                            std::uint64_t seed) {
  const int p = static_cast<int>(d.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qu(random_matrix(n, p, seed));
  Eigen::HouseholderQR<Eigen::MatrixXd> qv(random_matrix(p, p, seed + 1));
  const Eigen::MatrixXd u =
      qu.householderQ() * Eigen::MatrixXd::Identity(n, p);
  const Eigen::MatrixXd v =
      qv.householderQ() * Eigen::MatrixXd::Identity(p, p);
  return u * d.asDiagonal() * v.transpose();
}

}  // namespace

TEST_CASE("subset least squares has divergence k") {
  RegressionData data = random_data(20, 5, 3);
  const CanonicalForm cf = factorize(data);

  const FitResult fr = fit(EstimatorSpec::least_squares_subset({0, 1, 2}), cf, data);
  CHECK(fr.divergence == 3.0);
  CHECK(fr.df_method == DfMethod::analytic);

  const FitResult empty = fit(EstimatorSpec::least_squares_subset({}), cf, data);
  CHECK(empty.divergence == 0.0);
  CHECK(empty.fitted.cwiseAbs().maxCoeff() == 0.0);

  RegressionData wide = random_data(20, 5, 3, 2);
  const CanonicalForm cfw = factorize(wide);
  const FitResult frw =
      fit(EstimatorSpec::least_squares_subset({1, 3}), cfw, wide);
  CHECK(frw.divergence == 4.0);  // k * m

  CHECK_THROWS_AS(fit(EstimatorSpec::least_squares_subset({0, 0}), cf, data),
                  InvalidParameter);
  CHECK_THROWS_AS(fit(EstimatorSpec::least_squares_subset({9}), cf, data),
                  InvalidParameter);
}

TEST_CASE("ridge at lambda 0 is the full least squares fit") {
  RegressionData data = random_data(20, 5, 4);
  const CanonicalForm cf = factorize(data);
  const FitResult fr = fit(EstimatorSpec::ridge(0.0), cf, data);
  CHECK(fr.divergence == doctest::Approx(5.0).epsilon(1e-12));
  CHECK((fr.fitted - data.X * ls_fit(cf)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ridge divergence matches the hat matrix trace") {
  Eigen::VectorXd d(5);
  d << 5.0, 4.0, 3.0, 2.0, 1.0;
  const double lambda = 10.0;
  RegressionData data;
  data.X = design_with_singular_values(20, d, 17);
  data.Y = random_matrix(20, 1, 18);
  const CanonicalForm cf = factorize(data);

  const FitResult fr = fit(EstimatorSpec::ridge(lambda), cf, data);
  // sum d_i^2/(d_i^2 + 10) for d = {5,4,3,2,1}
  CHECK(fr.divergence == doctest::Approx(2.1799779168200223).epsilon(1e-9));

  // Oracle: explicit hat matrix X (X'X + lambda I)^{-1} X'.
  const Eigen::MatrixXd hat =
      data.X *
      (data.X.transpose() * data.X + lambda * Eigen::MatrixXd::Identity(5, 5))
          .ldlt()
          .solve(data.X.transpose());
  CHECK(fr.divergence == doctest::Approx(hat.trace()).epsilon(1e-9));
  CHECK((fr.fitted - hat * data.Y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("shrink-to-zero analytic divergence and its finite-difference check") {
  RegressionData data = random_data(12, 4, 9);
  CanonicalForm cf = factorize(data);

  // Shape the response so ||Z||^2 = 8 exactly in exact arithmetic.
  Eigen::VectorXd z0 = random_matrix(4, 1, 10);
  z0 *= std::sqrt(8.0) / z0.norm();
  data.Y = cf.Q1 * z0;
  cf = factorize(data);

  const EstimatorSpec spec = EstimatorSpec::shrink_to_zero(2.0);
  const FitResult fr = fit(spec, cf, data);
  // p - a(p-2)/||Z||^2 = 4 - 4/8
  CHECK(fr.divergence == doctest::Approx(3.5).epsilon(1e-9));

  const double fd = finite_difference_divergence(fitted_map(spec, data), data.Y);
  CHECK(std::abs(fd - fr.divergence) < 1e-4);

  SUBCASE("degenerate Z throws instead of returning non-finite values") {
    RegressionData degen = data;
    degen.Y = cf.Q2 * random_matrix(8, 1, 11);  // orthogonal to col(X)
    const CanonicalForm cfd = factorize(degen);
    CHECK(cfd.Z.cwiseAbs().maxCoeff() < 1e-12);
    RegressionData exact_zero = degen;
    CanonicalForm cfz = cfd;
    cfz.Z.setZero();
    CHECK_THROWS_AS(fit(spec, cfz, exact_zero), DegenerateInput);
  }
}

TEST_CASE("finite differences on linear maps") {
  const Eigen::MatrixXd y = random_matrix(5, 1, 12);

  SUBCASE("identity has divergence n") {
    const double fd = finite_difference_divergence(
        [](const Eigen::MatrixXd& v) { return v; }, y);
    CHECK(std::abs(fd - 5.0) < 1e-6);
  }

  SUBCASE("fixed matrix map has divergence tr(A)") {
    const Eigen::MatrixXd a = random_matrix(5, 5, 13);
    const double fd = finite_difference_divergence(
        [&a](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return a * v; }, y);
    CHECK(std::abs(fd - a.trace()) < 1e-6);
  }

  SUBCASE("non-finite probe output throws") {
    CHECK_THROWS_AS(finite_difference_divergence(
                        [](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
                          return v / 0.0;
                        },
                        y),
                    NonFiniteOutput);
  }
}

TEST_CASE("fitted values depend on Y only through the regression block") {
  RegressionData data = random_data(20, 5, 14);
  const CanonicalForm cf = factorize(data);

  const EstimatorSpec specs[] = {
      EstimatorSpec::least_squares_subset({0, 2, 4}),
      EstimatorSpec::ridge(1.5),
      EstimatorSpec::shrink_to_zero(1.0),
  };
  const Eigen::VectorXd w = random_matrix(15, 1, 15);
  for (const EstimatorSpec& spec : specs) {
    const FittedMap map = fitted_map(spec, data);
    const Eigen::MatrixXd base = map(data.Y);
    const Eigen::MatrixXd shifted = map(data.Y + cf.Q2 * w);
    CHECK((base - shifted).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("divergence agrees between response and canonical coordinates") {
  // Finite differences on both sides of the coordinate change.
  for (std::uint64_t seed : {21u, 22u}) {
    RegressionData data = random_data(16, 4, seed);
    const CanonicalForm cf = factorize(data);
    const EstimatorSpec specs[] = {
        EstimatorSpec::least_squares_subset({0, 1}),
        EstimatorSpec::ridge(2.0),
        EstimatorSpec::shrink_to_zero(1.0),
    };
    for (const EstimatorSpec& spec : specs) {
      const FittedMap map = fitted_map(spec, data);
      const double div_y = finite_difference_divergence(map, data.Y);

      // theta_hat(Z) = Q1' fitted(Q1 Z + Q2 U0), with U0 held fixed.
      const Eigen::MatrixXd u0 = cf.Q2.transpose() * data.Y;
      const FittedMap theta_map =
          [&cf, &map, &u0](const Eigen::MatrixXd& z) -> Eigen::MatrixXd {
        return cf.Q1.transpose() * map(cf.Q1 * z + cf.Q2 * u0);
      };
      const double div_z = finite_difference_divergence(theta_map, cf.Z);
      CHECK(std::abs(div_y - div_z) < 1e-6);
    }
  }
}

TEST_CASE("linear smoother divergence is the constant trace under any draw") {
  RegressionData data = random_data(20, 5, 30);
  const CanonicalForm cf = factorize(data);
  const NoiseLaw law = NoiseLaw::student_t(5.0);
  const EstimatorSpec spec = EstimatorSpec::ridge(1.0);

  const double df = fit(spec, cf, data).divergence;
  RegressionData probe = data;
  for (long r = 0; r < 32; ++r) {
    probe.Y = sample(law, 20, 1, 777, r);
    const CanonicalForm cfp = factorize(probe);
    CHECK(fit(spec, cfp, probe).divergence == doctest::Approx(df).epsilon(1e-12));
  }
}

TEST_CASE("custom estimators") {
  RegressionData data = random_data(10, 3, 40);
  const CanonicalForm cf = factorize(data);
  const Eigen::MatrixXd a = 0.5 * random_matrix(10, 10, 41);
  const FittedMap amap = [&a](const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
    return a * y;
  };

  SUBCASE("explicit divergence map is used") {
    const double tr = a.trace();
    const FitResult fr = fit(
        EstimatorSpec::custom(amap, [tr](const Eigen::MatrixXd&) { return tr; }),
        cf, data);
    CHECK(fr.divergence == tr);
    CHECK(fr.df_method == DfMethod::analytic);
  }

  SUBCASE("falls back to finite differences") {
    const FitResult fr = fit(EstimatorSpec::custom(amap), cf, data);
    CHECK(fr.df_method == DfMethod::finite_difference);
    CHECK(std::abs(fr.divergence - a.trace()) < 1e-6);
  }

  SUBCASE("finite differences can be disabled") {
    CHECK_THROWS_AS(
        fit(EstimatorSpec::custom(amap, nullptr, "custom", false), cf, data),
        DivergenceUnavailable);
  }
}

TEST_CASE("finite differences agree with the analytic divergences") {
  RegressionData data = random_data(18, 5, 50);
  const EstimatorSpec specs[] = {
      EstimatorSpec::least_squares_subset({1, 2, 4}),
      EstimatorSpec::ridge(3.0),
      EstimatorSpec::shrink_to_zero(2.0),
  };
  const CanonicalForm cf = factorize(data);
  for (const EstimatorSpec& spec : specs) {
    const double analytic = fit(spec, cf, data).divergence;
    const double fd = finite_difference_divergence(fitted_map(spec, data), data.Y);
    CHECK(std::abs(fd - analytic) <
          std::max(1e-4, 1e-4 * std::abs(analytic)));
  }
}
