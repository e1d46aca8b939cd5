#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lossest/errors.hpp"

namespace lossest {

enum class LawKind { gaussian, student_t, variance_mixture, uniform_ball };

/// A spherically or elliptically symmetric error law. Spherical laws are
/// built by the factories below; an elliptical law is a spherical law with
/// an m x m scale matrix attached via with_scale(), applied on the row index
/// of the n x m draw. tau2() is the proportionality coefficient between the
/// covariance and the scale matrix:
///   Gaussian -> 1, Student-t(nu) -> nu/(nu-2), mixture -> sum w_i v_i,
///   uniform ball of radius r in dimension d -> r^2/(d+2).
class NoiseLaw {
 public:
  static NoiseLaw gaussian();
  /// Requires nu > 2 so the second moment exists.
  static NoiseLaw student_t(double nu);
  /// Gaussian scale mixture: coordinatewise N(0, v_k I) with a single mixing
  /// index per draw. Weights must be a probability vector.
  static NoiseLaw variance_mixture(std::vector<double> weights,
                                   std::vector<double> variances);
  /// Uniform on the centered ball of the given radius in R^dimension.
  /// The dimension is part of the law (tau2 depends on it) and must match
  /// n*m at sampling time.
  static NoiseLaw uniform_ball(double radius, int dimension);

  /// Elliptical version of this law: rows are scaled by sigma^{1/2}.
  /// sigma must be symmetric positive definite.
  NoiseLaw with_scale(const Eigen::MatrixXd& sigma) const;

  LawKind kind() const { return kind_; }
  double nu() const { return nu_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& variances() const { return variances_; }
  double radius() const { return radius_; }
  int dimension() const { return dimension_; }  // 0 = unconstrained
  bool is_spherical() const { return scale_.size() == 0; }
  /// m x m scale matrix; identity(1) when the law is spherical.
  Eigen::MatrixXd scale() const;
  const Eigen::MatrixXd& scale_sqrt() const { return scale_sqrt_; }

  double tau2() const;
  std::string name() const;

 private:
  NoiseLaw() = default;
  LawKind kind_ = LawKind::gaussian;
  double nu_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> variances_;
  double radius_ = 0.0;
  int dimension_ = 0;
  Eigen::MatrixXd scale_;       // empty when spherical
  Eigen::MatrixXd scale_sqrt_;  // symmetric square root, cached
};

/// The modified ("star") law attached to a base law: for a base mixing
/// N(0, vI) with weight dG(v), the star law mixes with weight
/// v dG(v) / E[v]. The normalizer equals tau2 of the base law. Only laws
/// with a Gaussian-mixture representation are supported (Gaussian,
/// Student-t, variance mixture); uniform_ball has none.
class StarLaw {
 public:
  explicit StarLaw(NoiseLaw base);
  const NoiseLaw& base() const { return base_; }
  double normalizer() const { return normalizer_; }

 private:
  NoiseLaw base_;
  double normalizer_ = 1.0;
};

/// One n x m draw. (seed, index) fully determines the result; replications
/// should vary `index`. Spherical draws fill coordinates row-major; the
/// mixing variable, when any, is drawn first.
Eigen::MatrixXd sample(const NoiseLaw& law, int n, int m, std::uint64_t seed,
                       std::uint64_t index = 0);

/// One n x m draw from the star law.
Eigen::MatrixXd sample_star(const StarLaw& star, int n, int m,
                            std::uint64_t seed, std::uint64_t index = 0);

inline double tau2(const NoiseLaw& law) { return law.tau2(); }

}  // namespace lossest
