#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hetprobit/gibbs.hpp"
#include "hetprobit/model.hpp"

namespace hetprobit {

/// Equitailed credible interval from empirical quantiles.
struct CredibleInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

/// Empirical quantile with linear interpolation between order statistics
/// (type-7 convention). `values` need not be sorted.
double empirical_quantile(std::vector<double> values, double p);

struct ThetaSummary {
  Eigen::VectorXd medians;
  std::vector<CredibleInterval> intervals;
};

/// Coordinatewise posterior medians and equitailed intervals at the given
/// level. Requires at least two retained draws.
ThetaSummary summarize_theta(const PosteriorDraws& draws, double level);

/// Per-draw predictive choice probabilities at prediction point k.
Eigen::VectorXd predictive_prob_draws(const PosteriorDraws& draws, int point_index);

/// Posterior predictive probability at prediction point k: the average of
/// Phi(x_*' beta_s exp(-g_s(x_*)/2)) over retained draws.
double posterior_predictive(const PosteriorDraws& draws, int point_index);

/// Lookup variant: x_star (internal order) must match a stored prediction
/// point exactly, otherwise a domain error is thrown.
double posterior_predictive(const PosteriorDraws& draws, const Eigen::VectorXd& x_star);

/// Bayes decision under absolute-error loss: 1 iff probability >= 1/2.
int bayes_decision(double probability);

/// Per-draw choice probabilities at design point i (credible bands for the
/// model-implied choice probabilities).
Eigen::VectorXd choice_prob_draws(const PosteriorDraws& draws, const Dataset& data, int i);

/// Effective sample size via the initial-monotone-sequence estimator; clipped
/// to the series length, and a constant series reports its full length.
double effective_sample_size(const std::vector<double>& series);

/// Everything the CLI reports after a fit.
struct Summary {
  Eigen::VectorXd theta_medians;
  std::vector<CredibleInterval> theta_intervals;
  std::vector<std::string> theta_names;
  std::vector<double> predictive_probs;  // one per prediction point
  std::vector<int> decisions;
  std::vector<double> ess;  // per theta coordinate
};

Summary build_summary(const PosteriorDraws& draws, double level);

}  // namespace hetprobit
