#pragma once

#include <Eigen/Dense>

#include "hetprobit/normal.hpp"
#include "hetprobit/rng.hpp"

namespace hetprobit {

/// The two half-line truncation regions used by the latent-variable update:
/// negative is (-inf, 0), nonnegative is [0, inf).
enum class TruncationRegion { negative, nonnegative };

/// Draw from N(mean, variance) conditioned on the region. Inverse-CDF when
/// the retained mass is not too far in the tail, exponential-proposal
/// rejection beyond five standard deviations (the inverse CDF loses precision
/// there). variance must be positive.
double sample_truncated_normal(RngStream& rng, double mean, double variance,
                               TruncationRegion region);

/// Draw from N(mean, covariance). The covariance must be symmetric and
/// positive semidefinite; coordinates with an exactly zero diagonal entry are
/// returned at their mean, the remaining block is factored with the jitter
/// ladder shared with the Gram-matrix assembly. Throws NumericalError with a
/// condition diagnostic if the ladder is exhausted.
Eigen::VectorXd sample_mvn(RngStream& rng, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& covariance);

/// Categorical draw over {0, ..., K-1} with probabilities proportional to
/// weights. Weights must be nonnegative with a positive sum; normalization is
/// internal.
int sample_categorical(RngStream& rng, const Eigen::VectorXd& weights);

/// Logistic draw with the given median and variance. The scale parameter is
/// s = sqrt(3 * variance) / pi, so that the variance is pi^2 s^2 / 3.
double sample_logistic(RngStream& rng, double median, double variance);

}  // namespace hetprobit
