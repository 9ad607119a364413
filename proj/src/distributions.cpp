#include "hetprobit/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hetprobit/errors.hpp"
#include "hetprobit/kernels.hpp"

namespace hetprobit {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kPi = 3.14159265358979323846;

// Upper-tail probability P(X > a) for a standard normal, accurate for a > 0.
double upper_tail(double a) { return 0.5 * std::erfc(a * kInvSqrt2); }

// Standard normal conditioned on X >= a. Inverse CDF while the tail mass is
// representable with full precision, Robert's exponential-proposal rejection
// farther out.
double sample_std_lower_truncated(RngStream& rng, double a) {
  if (a <= 0.0) {
    const double pa = std_normal_cdf(a);
    const double p = pa + rng.uniform() * (1.0 - pa);
    return std_normal_quantile(p);
  }
  if (a <= 5.0) {
    // Map a uniform fraction of the upper-tail mass back through the
    // quantile; the reflected form keeps the argument near zero where the
    // quantile's tail branch is accurate.
    const double q = upper_tail(a);
    return -std_normal_quantile(rng.uniform() * q);
  }
  // Robert (1995): shifted exponential proposal with the optimal rate.
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a - std::log(rng.uniform()) / rate;
    const double d = x - rate;
    if (std::log(rng.uniform()) <= -0.5 * d * d) {
      return x;
    }
  }
}

}  // namespace

double sample_truncated_normal(RngStream& rng, double mean, double variance,
                               TruncationRegion region) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw std::domain_error("sample_truncated_normal: variance must be positive and finite");
  }
  const double sd = std::sqrt(variance);
  if (region == TruncationRegion::nonnegative) {
    const double x = sample_std_lower_truncated(rng, -mean / sd);
    const double z = mean + sd * x;
    return z >= 0.0 ? z : 0.0;
  }
  // Z < 0 iff -Z > 0 and -Z ~ N(-mean, variance).
  const double x = sample_std_lower_truncated(rng, mean / sd);
  const double z = mean - sd * x;
  // Rounding can land exactly on the boundary; nudge into the open region.
  return z < 0.0 ? z : -std::numeric_limits<double>::denorm_min();
}

Eigen::VectorXd sample_mvn(RngStream& rng, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& covariance) {
  const Eigen::Index n = mean.size();
  if (covariance.rows() != n || covariance.cols() != n) {
    throw std::domain_error("sample_mvn: dimension mismatch");
  }
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw std::domain_error("sample_mvn: covariance is not symmetric");
  }

  // Exactly-zero diagonal entries mark degenerate directions: by positive
  // semidefiniteness their whole row vanishes and the coordinate is its mean.
  std::vector<Eigen::Index> active;
  active.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (covariance(i, i) != 0.0) active.push_back(i);
  }

  Eigen::VectorXd out = mean;
  const Eigen::Index k = static_cast<Eigen::Index>(active.size());
  if (k == 0) return out;

  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = covariance(active[a], active[b]);

  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  double jitter_used = 0.0;
  if (llt.info() != Eigen::Success) {
    for (double jitter : kJitterLadder) {
      Eigen::MatrixXd bumped = sub;
      bumped.diagonal().array() += jitter;
      llt.compute(bumped);
      if (llt.info() == Eigen::Success) {
        jitter_used = jitter;
        break;
      }
    }
  }
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sample_mvn: Cholesky failed after max jitter " << kJitterLadder[2]
        << " (dim " << k << ", diagonal range [" << sub.diagonal().minCoeff() << ", "
        << sub.diagonal().maxCoeff() << "], min eigenvalue estimate "
        << Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub).eigenvalues().minCoeff()
        << ")";
    throw NumericalError(msg.str());
  }
  (void)jitter_used;

  Eigen::VectorXd z(k);
  for (Eigen::Index i = 0; i < k; ++i) z(i) = rng.normal();
  const Eigen::VectorXd shifted = llt.matrixL() * z;
  for (Eigen::Index a = 0; a < k; ++a) out(active[a]) += shifted(a);
  return out;
}

int sample_categorical(RngStream& rng, const Eigen::VectorXd& weights) {
  if (weights.size() == 0) {
    throw std::domain_error("sample_categorical: empty weight vector");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    const double w = weights(j);
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::domain_error("sample_categorical: weights must be nonnegative and finite");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::domain_error("sample_categorical: weights sum to zero");
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    acc += weights(j);
    if (u <= acc) return static_cast<int>(j);
  }
  return static_cast<int>(weights.size() - 1);
}

double sample_logistic(RngStream& rng, double median, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(median)) {
    throw std::domain_error("sample_logistic: variance must be positive and finite");
  }
  const double scale = std::sqrt(3.0 * variance) / kPi;
  const double u = rng.uniform();
  return median + scale * std::log(u / (1.0 - u));
}

}  // namespace hetprobit
