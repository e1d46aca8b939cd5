#include "lossest/distributions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "lossest/numeric.hpp"
#include "lossest/rng.hpp"

namespace lossest {

namespace {

void validate_probability_vector(const std::vector<double>& w) {
  if (w.empty()) throw InvalidParameter("mixture needs at least one component");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw InvalidParameter("mixture weights must be >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidParameter("mixture weights must sum to 1");
}

Eigen::MatrixXd standard_normal(int n, int m, Rng& rng) {
  Eigen::MatrixXd out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = rng.normal();
  return out;
}

Eigen::MatrixXd spherical_draw(const NoiseLaw& law, int n, int m, Rng& rng) {
  switch (law.kind()) {
    case LawKind::gaussian:
      return standard_normal(n, m, rng);
    case LawKind::student_t: {
      // One mixing variable per draw: v ~ inverse-gamma(nu/2, nu/2),
      // i.e. v = nu / chi2_nu.
      const double v = law.nu() / rng.chi_square(law.nu());
      return std::sqrt(v) * standard_normal(n, m, rng);
    }
    case LawKind::variance_mixture: {
      const std::size_t k = rng.discrete(law.weights());
      return std::sqrt(law.variances()[k]) * standard_normal(n, m, rng);
    }
    case LawKind::uniform_ball: {
      Eigen::MatrixXd g = standard_normal(n, m, rng);
      const double norm = g.norm();
      const double d = static_cast<double>(n) * static_cast<double>(m);
      const double r = law.radius() * std::pow(rng.uniform(), 1.0 / d);
      return (r / norm) * g;
    }
  }
  throw InvalidParameter("unknown law kind");
}

Eigen::MatrixXd apply_scale(const NoiseLaw& law, Eigen::MatrixXd draw) {
  if (law.is_spherical()) return draw;
  // Rows are m-vectors; scale_sqrt is symmetric, so right-multiplication
  // transforms each row by sigma^{1/2}.
  return draw * law.scale_sqrt();
}

void check_shape(const NoiseLaw& law, int n, int m) {
  if (n < 1 || m < 1) throw InvalidParameter("sample shape must be positive");
  if (!law.is_spherical() && law.scale_sqrt().rows() != m)
    throw InvalidParameter("scale matrix does not match m");
  if (law.dimension() != 0 && law.dimension() != n * m)
    throw InvalidParameter("law dimension does not match n*m");
}

}  // namespace

NoiseLaw NoiseLaw::gaussian() {
  NoiseLaw law;
  law.kind_ = LawKind::gaussian;
  return law;
}

NoiseLaw NoiseLaw::student_t(double nu) {
  if (!(nu > 2.0))
    throw InvalidParameter("student_t requires nu > 2 (finite second moment)");
  NoiseLaw law;
  law.kind_ = LawKind::student_t;
  law.nu_ = nu;
  return law;
}

NoiseLaw NoiseLaw::variance_mixture(std::vector<double> weights,
                                    std::vector<double> variances) {
  validate_probability_vector(weights);
  if (variances.size() != weights.size())
    throw InvalidParameter("weights and variances must have equal length");
  for (double v : variances)
    if (!(v > 0.0)) throw InvalidParameter("mixture variances must be > 0");
  NoiseLaw law;
  law.kind_ = LawKind::variance_mixture;
  law.weights_ = std::move(weights);
  law.variances_ = std::move(variances);
  return law;
}

NoiseLaw NoiseLaw::uniform_ball(double radius, int dimension) {
  if (!(radius > 0.0)) throw InvalidParameter("radius must be > 0");
  if (dimension < 1) throw InvalidParameter("dimension must be >= 1");
  NoiseLaw law;
  law.kind_ = LawKind::uniform_ball;
  law.radius_ = radius;
  law.dimension_ = dimension;
  return law;
}

NoiseLaw NoiseLaw::with_scale(const Eigen::MatrixXd& sigma) const {
  if (sigma.rows() != sigma.cols())
    throw InvalidParameter("scale matrix must be square");
  if (!sigma.isApprox(sigma.transpose(), 1e-12))
    throw InvalidParameter("scale matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.info() != Eigen::Success)
    throw InvalidParameter("scale matrix eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw InvalidParameter("scale matrix must be positive definite");

  NoiseLaw law = *this;
  law.scale_ = sigma;
  law.scale_sqrt_ = es.operatorSqrt();
  return law;
}

Eigen::MatrixXd NoiseLaw::scale() const {
  if (is_spherical()) return Eigen::MatrixXd::Identity(1, 1);
  return scale_;
}

double NoiseLaw::tau2() const {
  switch (kind_) {
    case LawKind::gaussian:
      return 1.0;
    case LawKind::student_t:
      return nu_ / (nu_ - 2.0);
    case LawKind::variance_mixture: {
      double acc = 0.0;
      for (std::size_t i = 0; i < weights_.size(); ++i)
        acc += weights_[i] * variances_[i];
      return acc;
    }
    case LawKind::uniform_ball:
      return radius_ * radius_ / (static_cast<double>(dimension_) + 2.0);
  }
  throw InvalidParameter("unknown law kind");
}

std::string NoiseLaw::name() const {
  std::ostringstream os;
  switch (kind_) {
    case LawKind::gaussian:
      os << "gaussian";
      break;
    case LawKind::student_t:
      os << "student_t(" << nu_ << ")";
      break;
    case LawKind::variance_mixture:
      os << "variance_mixture";
      break;
    case LawKind::uniform_ball:
      os << "uniform_ball(" << radius_ << ")";
      break;
  }
  if (!is_spherical()) os << "+scale";
  return os.str();
}

StarLaw::StarLaw(NoiseLaw base) : base_(std::move(base)) {
  switch (base_.kind()) {
    case LawKind::gaussian:
    case LawKind::student_t:
    case LawKind::variance_mixture:
      break;
    case LawKind::uniform_ball:
      throw UnsupportedStarLaw(
          "uniform_ball has no Gaussian-mixture representation");
  }
  normalizer_ = base_.tau2();
}

Eigen::MatrixXd sample(const NoiseLaw& law, int n, int m, std::uint64_t seed,
                       std::uint64_t index) {
  check_shape(law, n, m);
  Rng rng(seed, index);
  return apply_scale(law, spherical_draw(law, n, m, rng));
}

Eigen::MatrixXd sample_star(const StarLaw& star, int n, int m,
                            std::uint64_t seed, std::uint64_t index) {
  const NoiseLaw& base = star.base();
  check_shape(base, n, m);
  Rng rng(seed, index);
  Eigen::MatrixXd draw;
  switch (base.kind()) {
    case LawKind::gaussian:
      // The star law of a Gaussian is the same Gaussian.
      draw = standard_normal(n, m, rng);
      break;
    case LawKind::student_t: {
      // Base mixing inverse-gamma(nu/2, nu/2); reweighting by v shifts the
      // shape down by one: inverse-gamma(nu/2 - 1, nu/2).
      const double shape = 0.5 * base.nu() - 1.0;
      const double v = (0.5 * base.nu()) / rng.gamma(shape);
      draw = std::sqrt(v) * standard_normal(n, m, rng);
      break;
    }
    case LawKind::variance_mixture: {
      std::vector<double> w = base.weights();
      double total = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] *= base.variances()[i];
        total += w[i];
      }
      for (double& x : w) x /= total;
      const std::size_t k = rng.discrete(w);
      draw = std::sqrt(base.variances()[k]) * standard_normal(n, m, rng);
      break;
    }
    case LawKind::uniform_ball:
      throw UnsupportedStarLaw(
          "uniform_ball has no Gaussian-mixture representation");
  }
  return apply_scale(base, std::move(draw));
}

}  // namespace lossest
