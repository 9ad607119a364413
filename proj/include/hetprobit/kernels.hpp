#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace hetprobit {

/// Matern covariance hyperparameters: smoothness alpha and length scale l.
/// Prior variance is one (kappa(x, x) = 1).
struct KernelSpec {
  double alpha = 1.5;
  double length_scale = 1.0;

  void validate() const;
};

/// Diagonal jitter escalation ladder used whenever a kernel matrix must be
/// factored. Duplicate design points make the raw Gram matrix singular, so
/// the smallest rung is always applied.
inline constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6};

/// Matern covariance between two points of equal dimension. Exactly 1 at
/// zero distance, strictly positive, decreasing in the distance.
double matern(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Same kernel as a function of the Euclidean distance r = ||x - y||.
double matern_radial(const KernelSpec& spec, double r);

namespace detail {
/// General-order evaluation through the modified Bessel function of the
/// second kind. The public entry points dispatch to closed forms on the
/// half-integer grid {1/2, 3/2, 5/2, 7/2}; this path covers everything else
/// and backs the agreement tests for the closed forms.
double matern_bessel(double alpha, double length_scale, double r);
}  // namespace detail

/// Kernel matrix over a fixed point set, factored once. Rows of `points` are
/// the inputs. The diagonal carries 1 + jitter where jitter is the smallest
/// rung of the ladder for which the Cholesky factorization succeeds.
class GramMatrix {
 public:
  GramMatrix() = default;
  GramMatrix(Eigen::MatrixXd values, double jitter);

  Eigen::Index size() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }
  double jitter() const { return jitter_; }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const { return llt_; }

 private:
  Eigen::MatrixXd values_;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

GramMatrix gram(const KernelSpec& spec, const Eigen::MatrixXd& points);

/// Cross covariance between a point set and one prediction point.
/// kappa_star = kappa(x_*, x_*) = 1.
struct PredictionCov {
  double kappa_star = 1.0;
  Eigen::VectorXd kappa_n_star;
};

PredictionCov cross_cov(const KernelSpec& spec, const Eigen::MatrixXd& points,
                        const Eigen::VectorXd& x_star);

/// Joint extension to m >= 1 prediction points: the m x m Gram block of the
/// prediction points (jittered and factored like any Gram matrix) plus the
/// n x m cross-covariance block against the design points.
struct PredictionBlock {
  GramMatrix star;
  Eigen::MatrixXd cross;  // n x m, cross(i, j) = kappa(x_i, x*_j)
};

PredictionBlock prediction_block(const KernelSpec& spec, const Eigen::MatrixXd& points,
                                 const Eigen::MatrixXd& star_points);

}  // namespace hetprobit
