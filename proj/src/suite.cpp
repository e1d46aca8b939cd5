#include "lossest/suite.hpp"

#include "lossest/rng.hpp"

namespace lossest {

Eigen::MatrixXd seeded_design(int n, int p, std::uint64_t seed) {
  Rng rng(seed, 0);
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
  return x;
}

namespace {

// Shared fixtures. Designs are fixed once; every check stays reproducible
// for a given (seed, replications).

McConfig vector_config(std::uint64_t seed, long reps, NoiseLaw law,
                       EstimatorSpec est, double sigma) {
  McConfig cfg;
  cfg.seed = seed;
  cfg.replications = reps;
  cfg.law = std::move(law);
  cfg.X = seeded_design(20, 5, 101);
  cfg.beta = Eigen::MatrixXd(5, 1);
  cfg.beta << 3.0, 1.5, 2.0, 0.0, 0.0;
  cfg.sigma = sigma;
  cfg.estimator = std::move(est);
  return cfg;
}

Eigen::MatrixXd elliptical_scale() {
  Eigen::MatrixXd s(2, 2);
  s << 2.0, 0.6, 0.6, 1.0;
  return s;
}

McConfig matrix_config(std::uint64_t seed, long reps, NoiseLaw base,
                       EstimatorSpec est) {
  McConfig cfg;
  cfg.seed = seed;
  cfg.replications = reps;
  cfg.law = base.with_scale(elliptical_scale());
  cfg.X = seeded_design(20, 3, 202);
  cfg.beta = Eigen::MatrixXd(3, 2);
  cfg.beta << 1.0, 0.5, -1.0, 2.0, 0.0, 0.0;
  cfg.estimator = std::move(est);
  return cfg;
}

// Projection of the canonical block onto the span of a design subset:
// M = Q1' P_I Q1, a rank-|I| projection with divergence m |I|.
Eigen::MatrixXd canonical_projection(const Eigen::MatrixXd& x,
                                     const std::vector<int>& subset) {
  RegressionData d{x, Eigen::MatrixXd::Zero(x.rows(), 1), {}};
  const CanonicalForm cf = factorize(d);
  Eigen::MatrixXd xi(x.rows(), subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j) xi.col(j) = x.col(subset[j]);
  RegressionData di{xi, Eigen::MatrixXd::Zero(x.rows(), 1), {}};
  const CanonicalForm cfi = factorize(di);
  const Eigen::MatrixXd b = cf.Q1.transpose() * cfi.Q1;  // p x |I|
  return b * b.transpose();
}

std::vector<SuiteCheck> build_suite() {
  std::vector<SuiteCheck> suite;
  auto add = [&suite](std::string name, auto fn) {
    suite.push_back({std::move(name), std::move(fn)});
  };

  // --- Gaussian Stein identity, decision-space form.
  add("stein_gaussian_identity", [](std::uint64_t seed, long reps) {
    McConfig cfg;
    cfg.seed = seed;
    cfg.replications = reps;
    Eigen::VectorXd mu(6);
    mu << 1.0, -2.0, 0.5, 0.0, 3.0, -1.0;
    return check_stein(VectorField::identity(6), mu, 1.0, cfg);
  });
  add("stein_gaussian_linear", [](std::uint64_t seed, long reps) {
    McConfig cfg;
    cfg.seed = seed;
    cfg.replications = reps;
    Eigen::VectorXd mu(6);
    mu << 1.0, -2.0, 0.5, 0.0, 3.0, -1.0;
    Eigen::MatrixXd a = 0.3 * seeded_design(6, 6, 404);
    return check_stein(VectorField::linear(a), mu, 1.5, cfg);
  });
  add("stein_gaussian_soft_threshold", [](std::uint64_t seed, long reps) {
    McConfig cfg;
    cfg.seed = seed;
    cfg.replications = reps;
    Eigen::VectorXd mu(6);
    mu << 1.0, -2.0, 0.5, 0.0, 3.0, -1.0;
    return check_stein(VectorField::soft_threshold(0.8), mu, 1.0, cfg);
  });

  // --- Chi-square Stein-Haff identity.
  auto add_chi2 = [&add](std::string name, ScalarInS h) {
    add(std::move(name), [h](std::uint64_t seed, long reps) {
      McConfig cfg = vector_config(seed, reps, NoiseLaw::gaussian(),
                                   EstimatorSpec::ridge(0.0), 1.0);
      return check_stein_haff_chi2(h, cfg);
    });
  };
  add_chi2("stein_haff_chi2_s", ScalarInS::s());
  add_chi2("stein_haff_chi2_s_squared", ScalarInS::s_squared());
  add_chi2("stein_haff_chi2_constant", ScalarInS::constant(1.0));

  // --- Spherical Stein-type identity, three laws x two maps.
  struct LawEntry {
    const char* tag;
    NoiseLaw (*make)();
  };
  const LawEntry laws[] = {
      {"gaussian", [] { return NoiseLaw::gaussian(); }},
      {"student", [] { return NoiseLaw::student_t(5.0); }},
      {"mixture", [] { return NoiseLaw::variance_mixture({0.5, 0.5}, {1.0, 9.0}); }},
  };
  for (const auto& entry : laws) {
    add(std::string("stein_spherical_") + entry.tag + "_identity",
        [make = entry.make](std::uint64_t seed, long reps) {
          McConfig cfg = vector_config(seed, reps, make(),
                                       EstimatorSpec::ridge(0.0), 1.0);
          return check_stein_spherical(VectorField::identity(5), cfg);
        });
    add(std::string("stein_spherical_") + entry.tag + "_shrink",
        [make = entry.make](std::uint64_t seed, long reps) {
          McConfig cfg = vector_config(seed, reps, make(),
                                       EstimatorSpec::ridge(0.0), 1.0);
          return check_stein_spherical(VectorField::shrink_to_zero(1.0), cfg);
        });
  }

  // --- Elliptical Stein-type identity.
  add("stein_elliptical_gaussian_identity", [](std::uint64_t seed, long reps) {
    McConfig cfg = matrix_config(seed, reps, NoiseLaw::gaussian(),
                                 EstimatorSpec::ridge(0.0));
    return check_stein_elliptical(MatrixField::identity(3, 2), cfg);
  });
  add("stein_elliptical_student_projection", [](std::uint64_t seed, long reps) {
    McConfig cfg = matrix_config(seed, reps, NoiseLaw::student_t(6.0),
                                 EstimatorSpec::ridge(0.0));
    const Eigen::MatrixXd proj = canonical_projection(cfg.X, {0, 1});
    return check_stein_elliptical(MatrixField::linear(proj), cfg);
  });

  // --- Elliptical Stein-Haff-type identity (star-law right side).
  add("stein_haff_elliptical_gaussian_s", [](std::uint64_t seed, long reps) {
    McConfig cfg = matrix_config(seed, reps, NoiseLaw::gaussian(),
                                 EstimatorSpec::ridge(0.0));
    return check_stein_haff_elliptical(MatrixInS::s(2), cfg);
  });
  add("stein_haff_elliptical_student_s", [](std::uint64_t seed, long reps) {
    McConfig cfg = matrix_config(seed, reps, NoiseLaw::student_t(6.0),
                                 EstimatorSpec::ridge(0.0));
    return check_stein_haff_elliptical(MatrixInS::s(2), cfg);
  });
  add("stein_haff_elliptical_gaussian_trace", [](std::uint64_t seed, long reps) {
    McConfig cfg = matrix_config(seed, reps, NoiseLaw::gaussian(),
                                 EstimatorSpec::ridge(0.0));
    return check_stein_haff_elliptical(MatrixInS::trace_s_identity(2), cfg);
  });
  add("stein_haff_elliptical_gaussian_residual_gram",
      [](std::uint64_t seed, long reps) {
        McConfig cfg = matrix_config(seed, reps, NoiseLaw::gaussian(),
                                     EstimatorSpec::ridge(0.0));
        const Eigen::MatrixXd proj = canonical_projection(cfg.X, {0, 1});
        return check_stein_haff_elliptical(MatrixInS::residual_gram(proj), cfg);
      });

  // --- Unbiasedness of the criteria.
  add("unbiased_delta0_gaussian_ls", [](std::uint64_t seed, long reps) {
    McConfig cfg = vector_config(seed, reps, NoiseLaw::gaussian(),
                                 EstimatorSpec::least_squares_subset({0, 1, 2}),
                                 2.0);
    return check_unbiased(UnbiasedTarget::delta0, cfg);
  });
  add("unbiased_delta0_student_ridge", [](std::uint64_t seed, long reps) {
    McConfig cfg = vector_config(seed, reps, NoiseLaw::student_t(5.0),
                                 EstimatorSpec::ridge(1.0), 2.0);
    return check_unbiased(UnbiasedTarget::delta0, cfg);
  });
  add("unbiased_delta0_mixture_shrink", [](std::uint64_t seed, long reps) {
    McConfig cfg = vector_config(
        seed, reps, NoiseLaw::variance_mixture({0.5, 0.5}, {1.0, 9.0}),
        EstimatorSpec::shrink_to_zero(1.0), 2.0);
    return check_unbiased(UnbiasedTarget::delta0, cfg);
  });
  add("unbiased_delta0inv_gaussian_ls", [](std::uint64_t seed, long reps) {
    McConfig cfg = vector_config(seed, reps, NoiseLaw::gaussian(),
                                 EstimatorSpec::least_squares_subset({0, 1, 2}),
                                 2.0);
    return check_unbiased(UnbiasedTarget::delta0_inv, cfg);
  });
  add("unbiased_delta0inv_elliptical_star_t6", [](std::uint64_t seed, long reps) {
    McConfig cfg = matrix_config(seed, reps, NoiseLaw::student_t(6.0),
                                 EstimatorSpec::least_squares_subset({0, 1}));
    return check_unbiased(UnbiasedTarget::delta0_inv_elliptical, cfg);
  });

  return suite;
}

}  // namespace

const std::vector<SuiteCheck>& default_suite() {
  static const std::vector<SuiteCheck> suite = build_suite();
  return suite;
}

const SuiteCheck* find_check(const std::string& name) {
  for (const auto& check : default_suite())
    if (check.name == name) return &check;
  return nullptr;
}

}  // namespace lossest
