#include "hetprobit/kernels.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hetprobit/errors.hpp"

namespace hetprobit {

void KernelSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::domain_error("KernelSpec: alpha must be positive");
  }
  if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw std::domain_error("KernelSpec: length_scale must be positive");
  }
}

namespace detail {

double matern_bessel(double alpha, double length_scale, double r) {
  if (r <= 0.0) return 1.0;
  const double z = std::sqrt(2.0 * alpha) * r / length_scale;
  if (z > 700.0) return 0.0;  // exp(-z) underflows; kernel is numerically zero
  return 2.0 * std::pow(0.5 * z, alpha) / std::tgamma(alpha) *
         boost::math::cyl_bessel_k(alpha, z);
}

}  // namespace detail

double matern_radial(const KernelSpec& spec, double r) {
  spec.validate();
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::domain_error("matern: distance must be finite and nonnegative");
  }
  if (r == 0.0) return 1.0;
  const double d = r / spec.length_scale;
  // Closed forms on the half-integer grid; everything else goes through the
  // Bessel function.
  if (spec.alpha == 0.5) {
    return std::exp(-d);
  }
  if (spec.alpha == 1.5) {
    const double c = std::sqrt(3.0) * d;
    return (1.0 + c) * std::exp(-c);
  }
  if (spec.alpha == 2.5) {
    const double c = std::sqrt(5.0) * d;
    return (1.0 + c + c * c / 3.0) * std::exp(-c);
  }
  if (spec.alpha == 3.5) {
    const double c = std::sqrt(7.0) * d;
    return (1.0 + c + 0.4 * c * c + c * c * c / 15.0) * std::exp(-c);
  }
  return detail::matern_bessel(spec.alpha, spec.length_scale, r);
}

double matern(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw std::domain_error("matern: point dimensions differ");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw std::domain_error("matern: non-finite point");
  }
  return matern_radial(spec, (x - y).norm());
}

GramMatrix::GramMatrix(Eigen::MatrixXd values, double jitter)
    : values_(std::move(values)), jitter_(jitter) {
  llt_.compute(values_);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("GramMatrix: matrix is not positive definite");
  }
}

GramMatrix gram(const KernelSpec& spec, const Eigen::MatrixXd& points) {
  spec.validate();
  const Eigen::Index n = points.rows();
  if (n == 0) {
    throw std::domain_error("gram: empty point set");
  }
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = matern_radial(spec, (points.row(i) - points.row(j)).norm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  // Duplicate points make the raw matrix singular; the smallest rung that
  // factors wins and is recorded.
  for (double jitter : kJitterLadder) {
    Eigen::MatrixXd bumped = k;
    bumped.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(bumped);
    if (llt.info() == Eigen::Success) {
      return GramMatrix(std::move(bumped), jitter);
    }
  }
  std::ostringstream msg;
  msg << "gram: Cholesky failed for " << n << " points after max jitter " << kJitterLadder[2];
  throw NumericalError(msg.str());
}

PredictionCov cross_cov(const KernelSpec& spec, const Eigen::MatrixXd& points,
                        const Eigen::VectorXd& x_star) {
  if (points.cols() != x_star.size()) {
    throw std::domain_error("cross_cov: dimension mismatch");
  }
  PredictionCov out;
  out.kappa_star = 1.0;
  out.kappa_n_star.resize(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.kappa_n_star(i) = matern_radial(spec, (points.row(i).transpose() - x_star).norm());
  }
  return out;
}

PredictionBlock prediction_block(const KernelSpec& spec, const Eigen::MatrixXd& points,
                                 const Eigen::MatrixXd& star_points) {
  if (points.cols() != star_points.cols()) {
    throw std::domain_error("prediction_block: dimension mismatch");
  }
  PredictionBlock block;
  block.star = gram(spec, star_points);
  block.cross.resize(points.rows(), star_points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < star_points.rows(); ++j) {
      block.cross(i, j) =
          matern_radial(spec, (points.row(i) - star_points.row(j)).norm());
    }
  }
  return block;
}

}  // namespace hetprobit
