#include "lossest/verify.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <vector>

#include "lossest/errors.hpp"
#include "lossest/numeric.hpp"
#include "lossest/rng.hpp"

namespace lossest {

namespace {

IdentityReport make_report(std::string name, const std::vector<double>& lhs,
                           const std::vector<double>& rhs, bool paired) {
  IdentityReport rep;
  rep.identity_name = std::move(name);
  rep.replications = static_cast<long>(lhs.size());
  rep.paired = paired;
  const SampleStats ls = sample_stats(lhs);
  const SampleStats rs = sample_stats(rhs);
  rep.lhs_mean = ls.mean;
  rep.rhs_mean = rs.mean;
  rep.lhs_se = ls.se;
  rep.rhs_se = rs.se;

  double diff_mean = 0.0;
  if (paired) {
    std::vector<double> diff(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) diff[i] = lhs[i] - rhs[i];
    const SampleStats ds = sample_stats(diff);
    diff_mean = ds.mean;
    rep.diff_se = ds.se;
  } else {
    diff_mean = ls.mean - rs.mean;
    rep.diff_se = std::sqrt(ls.se * ls.se + rs.se * rs.se);
  }
  if (rep.diff_se > 0.0) {
    rep.z_score = diff_mean / rep.diff_se;
  } else {
    // Both sides agree replication by replication (analytic subcases).
    rep.z_score = diff_mean == 0.0 ? 0.0
                                   : std::copysign(HUGE_VAL, diff_mean);
  }
  return rep;
}

void require_positive_replications(const McConfig& cfg) {
  if (cfg.replications < 1)
    throw InvalidParameter("replications must be >= 1");
}

// Canonical pieces of a fixed design, shared by every replication.
struct FixedDesign {
  CanonicalForm cf;
  Eigen::MatrixXd theta;  // Q1' X beta
  Eigen::MatrixXd mean;   // X beta
  int n = 0, p = 0, m = 0;
};

FixedDesign prepare_design(const McConfig& cfg) {
  if (cfg.X.size() == 0) throw InvalidParameter("config has no design matrix");
  if (cfg.beta.rows() != cfg.X.cols())
    throw DimensionError("beta rows must match design columns");
  FixedDesign fd;
  fd.n = static_cast<int>(cfg.X.rows());
  fd.p = static_cast<int>(cfg.X.cols());
  fd.m = static_cast<int>(cfg.beta.cols());
  RegressionData data{cfg.X, Eigen::MatrixXd::Zero(fd.n, fd.m), {}};
  fd.cf = factorize(data);
  fd.mean = cfg.X * cfg.beta;
  fd.theta = fd.cf.Q1.transpose() * fd.mean;
  return fd;
}

Eigen::MatrixXd scale_or_identity(const NoiseLaw& law, int m) {
  if (law.is_spherical()) return Eigen::MatrixXd::Identity(m, m);
  return law.scale();
}

}  // namespace

bool IdentityReport::pass(double z_threshold) const {
  return std::isfinite(z_score) && std::abs(z_score) < z_threshold;
}

VectorField VectorField::identity(int n) {
  return {"identity",
          [](const Eigen::VectorXd& y) { return y; },
          [n](const Eigen::VectorXd&) { return static_cast<double>(n); }};
}

VectorField VectorField::constant(Eigen::VectorXd c) {
  return {"constant",
          [c](const Eigen::VectorXd&) { return c; },
          [](const Eigen::VectorXd&) { return 0.0; }};
}

VectorField VectorField::linear(Eigen::MatrixXd a) {
  const double tr = a.trace();
  return {"linear",
          [a](const Eigen::VectorXd& y) -> Eigen::VectorXd { return a * y; },
          [tr](const Eigen::VectorXd&) { return tr; }};
}

VectorField VectorField::soft_threshold(double lambda) {
  if (!(lambda >= 0.0)) throw InvalidParameter("threshold must be >= 0");
  return {"soft_threshold",
          [lambda](const Eigen::VectorXd& y) -> Eigen::VectorXd {
            Eigen::VectorXd out(y.size());
            for (int i = 0; i < y.size(); ++i) {
              const double mag = std::abs(y(i)) - lambda;
              out(i) = mag > 0.0 ? (y(i) > 0.0 ? mag : -mag) : 0.0;
            }
            return out;
          },
          [lambda](const Eigen::VectorXd& y) {
            double count = 0.0;
            for (int i = 0; i < y.size(); ++i)
              if (std::abs(y(i)) > lambda) count += 1.0;
            return count;
          }};
}

VectorField VectorField::shrink_to_zero(double a) {
  if (!(a >= 0.0)) throw InvalidParameter("shrinkage constant must be >= 0");
  return {"shrink_to_zero",
          [a](const Eigen::VectorXd& z) -> Eigen::VectorXd {
            const double zn = z.squaredNorm();
            if (zn == 0.0) throw DegenerateInput("shrink map undefined at 0");
            return (1.0 - a / zn) * z;
          },
          [a](const Eigen::VectorXd& z) {
            const double zn = z.squaredNorm();
            if (zn == 0.0) throw DegenerateInput("shrink map undefined at 0");
            const double d = static_cast<double>(z.size());
            return d - a * (d - 2.0) / zn;
          }};
}

MatrixField MatrixField::identity(int p, int m) {
  const double div = static_cast<double>(p) * static_cast<double>(m);
  return {"identity",
          [](const Eigen::MatrixXd& z) { return z; },
          [div](const Eigen::MatrixXd&) { return div; }};
}

MatrixField MatrixField::constant(Eigen::MatrixXd c) {
  return {"constant",
          [c](const Eigen::MatrixXd&) { return c; },
          [](const Eigen::MatrixXd&) { return 0.0; }};
}

MatrixField MatrixField::linear(Eigen::MatrixXd m_left) {
  const double tr = m_left.trace();
  return {"linear",
          [m_left](const Eigen::MatrixXd& z) -> Eigen::MatrixXd {
            return m_left * z;
          },
          [tr](const Eigen::MatrixXd& z) {
            return tr * static_cast<double>(z.cols());
          }};
}

ScalarInS ScalarInS::s() {
  return {"h=S",
          [](const Eigen::VectorXd&, double s) { return s; },
          [](const Eigen::VectorXd&, double) { return 1.0; }};
}

ScalarInS ScalarInS::s_squared() {
  return {"h=S^2",
          [](const Eigen::VectorXd&, double s) { return s * s; },
          [](const Eigen::VectorXd&, double s) { return 2.0 * s; }};
}

ScalarInS ScalarInS::constant(double c) {
  return {"h=const",
          [c](const Eigen::VectorXd&, double) { return c; },
          [](const Eigen::VectorXd&, double) { return 0.0; }};
}

MatrixInS MatrixInS::s(int m) {
  const double dstar = 0.5 * static_cast<double>(m) * (m + 1);
  return {"T=S",
          [](const Eigen::MatrixXd&, const Eigen::MatrixXd& s) { return s; },
          [dstar](const Eigen::MatrixXd&, const Eigen::MatrixXd&) {
            return dstar;
          }};
}

MatrixInS MatrixInS::trace_s_identity(int m) {
  return {"T=tr(S)I",
          [m](const Eigen::MatrixXd&, const Eigen::MatrixXd& s)
              -> Eigen::MatrixXd {
            return s.trace() * Eigen::MatrixXd::Identity(m, m);
          },
          [m](const Eigen::MatrixXd&, const Eigen::MatrixXd&) {
            return static_cast<double>(m);
          }};
}

MatrixInS MatrixInS::residual_gram(Eigen::MatrixXd m_proj) {
  const Eigen::MatrixXd res =
      Eigen::MatrixXd::Identity(m_proj.rows(), m_proj.cols()) - m_proj;
  return {"T=residual_gram",
          [res](const Eigen::MatrixXd& z, const Eigen::MatrixXd& s)
              -> Eigen::MatrixXd {
            const Eigen::MatrixXd rz = res * z;
            return rz.transpose() * rz + s;
          },
          [](const Eigen::MatrixXd&, const Eigen::MatrixXd& s) {
            const double m = static_cast<double>(s.rows());
            return 0.5 * m * (m + 1.0);
          }};
}

IdentityReport check_stein(const VectorField& g, const Eigen::VectorXd& mu,
                           double sigma, const McConfig& cfg) {
  require_positive_replications(cfg);
  const int n = static_cast<int>(mu.size());
  const NoiseLaw gauss = NoiseLaw::gaussian();
  std::vector<double> lhs(cfg.replications), rhs(cfg.replications);
  for (long r = 0; r < cfg.replications; ++r) {
    const Eigen::VectorXd eps = sample(gauss, n, 1, cfg.seed, r);
    const Eigen::VectorXd y = mu + sigma * eps;
    lhs[r] = (y - mu).dot(g.apply(y));
    rhs[r] = sigma * sigma * g.divergence(y);
  }
  return make_report("stein[" + g.name + "]", lhs, rhs, true);
}

IdentityReport check_stein_haff_chi2(const ScalarInS& h, const McConfig& cfg) {
  require_positive_replications(cfg);
  const FixedDesign fd = prepare_design(cfg);
  if (fd.m != 1) throw DimensionError("chi-square identity is vector-model");
  const double sig2 = cfg.sigma * cfg.sigma;
  const int k = fd.n - fd.p;
  std::vector<double> lhs(cfg.replications), rhs(cfg.replications);
  for (long r = 0; r < cfg.replications; ++r) {
    Rng rng(cfg.seed, r);
    Eigen::VectorXd y(fd.n);
    for (int i = 0; i < fd.n; ++i)
      y(i) = fd.mean(i, 0) + cfg.sigma * rng.normal();
    const double s = sig2 * rng.chi_square(k);
    const double hv = h.value(y, s);
    lhs[r] = hv / sig2;
    rhs[r] = static_cast<double>(k - 2) * hv / s + 2.0 * h.d_ds(y, s);
  }
  return make_report("stein_haff_chi2[" + h.name + "]", lhs, rhs, true);
}

IdentityReport check_stein_spherical(const VectorField& g, const McConfig& cfg) {
  require_positive_replications(cfg);
  const FixedDesign fd = prepare_design(cfg);
  if (fd.m != 1) throw DimensionError("spherical identity is vector-model");
  const Eigen::VectorXd theta = fd.theta.col(0);
  std::vector<double> lhs(cfg.replications), rhs(cfg.replications);
  for (long r = 0; r < cfg.replications; ++r) {
    const Eigen::VectorXd eps = sample(cfg.law, fd.n, 1, cfg.seed, r);
    const Eigen::VectorXd z = theta + cfg.sigma * (fd.cf.Q1.transpose() * eps);
    const Eigen::VectorXd u = cfg.sigma * (fd.cf.Q2.transpose() * eps);
    lhs[r] = (z - theta).dot(g.apply(z));
    rhs[r] = u.squaredNorm() * g.divergence(z) / static_cast<double>(fd.n - fd.p);
  }
  return make_report(
      "stein_spherical[" + cfg.law.name() + "," + g.name + "]", lhs, rhs, true);
}

IdentityReport check_stein_elliptical(const MatrixField& g, const McConfig& cfg) {
  require_positive_replications(cfg);
  const FixedDesign fd = prepare_design(cfg);
  const Eigen::MatrixXd sigma_mat = scale_or_identity(cfg.law, fd.m);
  const Eigen::MatrixXd sigma_inv =
      sigma_mat.llt().solve(Eigen::MatrixXd::Identity(fd.m, fd.m));
  const double denom = static_cast<double>(fd.n - fd.p) * fd.m;
  std::vector<double> lhs(cfg.replications), rhs(cfg.replications);
  for (long r = 0; r < cfg.replications; ++r) {
    const Eigen::MatrixXd eps = sample(cfg.law, fd.n, fd.m, cfg.seed, r);
    const Eigen::MatrixXd z = fd.theta + fd.cf.Q1.transpose() * eps;
    const Eigen::MatrixXd u = fd.cf.Q2.transpose() * eps;
    lhs[r] = ((z - fd.theta) * sigma_inv * g.apply(z).transpose()).trace();
    rhs[r] = (u * sigma_inv * u.transpose()).trace() * g.divergence(z) / denom;
  }
  return make_report(
      "stein_elliptical[" + cfg.law.name() + "," + g.name + "]", lhs, rhs, true);
}

IdentityReport check_stein_haff_elliptical(const MatrixInS& t,
                                           const McConfig& cfg) {
  require_positive_replications(cfg);
  const FixedDesign fd = prepare_design(cfg);
  const StarLaw star(cfg.law);
  const Eigen::MatrixXd sigma_mat = scale_or_identity(cfg.law, fd.m);
  const Eigen::MatrixXd sigma_inv =
      sigma_mat.llt().solve(Eigen::MatrixXd::Identity(fd.m, fd.m));
  const double c = star.normalizer();
  const double a = static_cast<double>(fd.n - fd.p - fd.m - 1);
  if (a <= 0.0) throw DimensionError("requires n > p + m + 1");

  // The two sides live under different laws, so they use disjoint draw
  // indices and an unpaired z-test.
  std::vector<double> lhs(cfg.replications), rhs(cfg.replications);
  for (long r = 0; r < cfg.replications; ++r) {
    const Eigen::MatrixXd eps = sample(cfg.law, fd.n, fd.m, cfg.seed, 2 * r);
    const Eigen::MatrixXd z = fd.theta + fd.cf.Q1.transpose() * eps;
    const Eigen::MatrixXd u = fd.cf.Q2.transpose() * eps;
    const Eigen::MatrixXd s = u.transpose() * u;
    lhs[r] = (t.value(z, s) * sigma_inv).trace();

    const Eigen::MatrixXd eps_star =
        sample_star(star, fd.n, fd.m, cfg.seed, 2 * r + 1);
    const Eigen::MatrixXd zs = fd.theta + fd.cf.Q1.transpose() * eps_star;
    const Eigen::MatrixXd us = fd.cf.Q2.transpose() * eps_star;
    const Eigen::MatrixXd ss = us.transpose() * us;
    const Eigen::MatrixXd tv = t.value(zs, ss);
    const double tr_sinv_t = ss.llt().solve(tv).trace();
    rhs[r] = c * (2.0 * t.dstar(zs, ss) + a * tr_sinv_t);
  }
  return make_report(
      "stein_haff_elliptical[" + cfg.law.name() + "," + t.name + "]", lhs, rhs,
      false);
}

IdentityReport check_unbiased(UnbiasedTarget target, const McConfig& cfg) {
  require_positive_replications(cfg);
  const FixedDesign fd = prepare_design(cfg);
  RegressionData data{cfg.X, Eigen::MatrixXd::Zero(fd.n, fd.m), {}};
  CanonicalForm cf = fd.cf;

  auto refit = [&](const Eigen::MatrixXd& y) {
    data.Y = y;
    cf.Z = cf.Q1.transpose() * y;
    cf.U = cf.Q2.transpose() * y;
    cf.S = cf.U.transpose() * cf.U;
    return fit(cfg.estimator, cf, data);
  };

  std::vector<double> lhs(cfg.replications), rhs(cfg.replications);

  switch (target) {
    case UnbiasedTarget::delta0: {
      if (fd.m != 1) throw DimensionError("delta0 is vector-model");
      for (long r = 0; r < cfg.replications; ++r) {
        const Eigen::MatrixXd y =
            fd.mean + cfg.sigma * sample(cfg.law, fd.n, 1, cfg.seed, r);
        const FitResult fr = refit(y);
        const double rss = (y - fr.fitted).squaredNorm();
        const double s2 = cf.U.squaredNorm() / static_cast<double>(fd.n - fd.p);
        lhs[r] = delta0(rss, s2, fr.divergence, fd.n);
        rhs[r] = (fr.fitted - fd.mean).squaredNorm();
      }
      return make_report(
          "unbiased_delta0[" + cfg.law.name() + "," + cfg.estimator.label() + "]",
          lhs, rhs, true);
    }
    case UnbiasedTarget::delta0_inv: {
      if (fd.m != 1) throw DimensionError("delta0_inv is vector-model");
      const double sig2 = cfg.sigma * cfg.sigma;
      for (long r = 0; r < cfg.replications; ++r) {
        const Eigen::MatrixXd y =
            fd.mean + cfg.sigma * sample(cfg.law, fd.n, 1, cfg.seed, r);
        const FitResult fr = refit(y);
        const double rss = (y - fr.fitted).squaredNorm();
        lhs[r] = delta0_inv(rss, cf.U.squaredNorm(), fr.divergence, fd.n, fd.p);
        rhs[r] = (fr.fitted - fd.mean).squaredNorm() / sig2;
      }
      return make_report("unbiased_delta0_inv[" + cfg.law.name() + "," +
                             cfg.estimator.label() + "]",
                         lhs, rhs, true);
    }
    case UnbiasedTarget::delta0_inv_elliptical: {
      const StarLaw star(cfg.law);
      const Eigen::MatrixXd sigma_mat = scale_or_identity(cfg.law, fd.m);
      const Eigen::MatrixXd sigma_inv =
          sigma_mat.llt().solve(Eigen::MatrixXd::Identity(fd.m, fd.m));
      const double t2 = cfg.law.tau2();
      for (long r = 0; r < cfg.replications; ++r) {
        // Criterion side under the star law.
        const Eigen::MatrixXd ys =
            fd.mean + sample_star(star, fd.n, fd.m, cfg.seed, 2 * r);
        const FitResult frs = refit(ys);
        lhs[r] = delta0_inv_elliptical(ys - frs.fitted, cf.S, frs.divergence,
                                       fd.n, fd.p, fd.m);
        // Loss side under the base law.
        const Eigen::MatrixXd y =
            fd.mean + sample(cfg.law, fd.n, fd.m, cfg.seed, 2 * r + 1);
        const FitResult fr = refit(y);
        const Eigen::MatrixXd dev = fr.fitted - fd.mean;
        rhs[r] = (dev * sigma_inv * dev.transpose()).trace() / t2;
      }
      return make_report("unbiased_delta0_inv_elliptical[" + cfg.law.name() +
                             "," + cfg.estimator.label() + "]",
                         lhs, rhs, false);
    }
  }
  throw InvalidParameter("unknown unbiasedness target");
}

}  // namespace lossest
