#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "hetprobit/rng.hpp"

namespace hetprobit {

/// Fixed covariate rows plus binary outcomes. One covariate column has its
/// index coefficient pinned to 1 for scale normalization; internally that
/// column is permuted to the last position so the free coefficients always
/// occupy a contiguous leading block.
class Dataset {
 public:
  /// Build from arrays laid out in "file order". `normalized` names the
  /// covariate whose coefficient is fixed to 1; empty selects the last
  /// column.
  Dataset(Eigen::MatrixXd covariates, Eigen::VectorXi outcomes,
          std::vector<std::string> covariate_names, const std::string& normalized = "");

  /// Ingest a CSV file with a header row. Column `y` (values in {0,1}) is the
  /// outcome; every other column must be numeric and becomes a covariate.
  static Dataset from_csv(const std::string& path, const std::string& normalized = "");

  Eigen::Index n() const { return covariates_.rows(); }
  Eigen::Index dim() const { return covariates_.cols(); }

  /// Covariates in internal order (normalized column last).
  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const Eigen::VectorXi& outcomes() const { return outcomes_; }
  Eigen::VectorXd row(Eigen::Index i) const { return covariates_.row(i); }

  /// Covariate names in internal order; the last one is the normalized
  /// column.
  const std::vector<std::string>& names() const { return names_; }
  const std::string& normalized_column() const { return names_.back(); }

  /// Names in the order they appeared in the source file.
  const std::vector<std::string>& file_order_names() const { return file_names_; }

  /// Covariate matrix with columns restored to file order (for round trips).
  Eigen::MatrixXd covariates_file_order() const;

  /// Reorder a point given in file order into internal order.
  Eigen::VectorXd to_internal(const Eigen::VectorXd& point_file_order) const;

  /// Column indices (internal order) of the named covariates.
  std::vector<int> column_indices(const std::vector<std::string>& columns) const;

 private:
  Eigen::MatrixXd covariates_;
  Eigen::VectorXi outcomes_;
  std::vector<std::string> names_;
  std::vector<std::string> file_names_;
  std::vector<int> internal_to_file_;
};

/// Free index coefficients theta; the full coefficient vector is
/// (theta', 1)'.
struct Coefficients {
  Eigen::VectorXd theta;

  Eigen::VectorXd full() const;
  /// x' beta with beta = (theta', 1)'.
  double index(const Eigen::VectorXd& x) const;
};

/// Values of the log-skedastic function g = log sigma^2 at the design points
/// and, when prediction is active, at the prediction points.
struct LogSkedastic {
  Eigen::VectorXd at_design;
  Eigen::VectorXd at_star;  // empty when no prediction points
};

/// Ten-component Gaussian mixture constants.
struct MixtureTable {
  std::array<double, 10> weights;
  std::array<double, 10> means;
  std::array<double, 10> variances;

  /// The known mixture approximating the log chi-squared(1) distribution.
  /// Constants transcribed from Omori, Chib, Shephard & Nakajima (2007),
  /// "Stochastic volatility with leverage: Fast and efficient likelihood
  /// inference", Journal of Econometrics 140(2), Table 1.
  static MixtureTable log_chisq1();

  /// Weights must sum to 1 within 1e-12, variances must be positive.
  void validate() const;

  Eigen::VectorXd weight_vector() const;
};

/// Mutable per-chain sampler state.
struct ChainState {
  Coefficients coefficients;
  LogSkedastic log_sked;
  Eigen::VectorXd latent;  // Z_i, sign-linked to the outcomes
  Eigen::VectorXi labels;  // mixture component per observation, zero-based
};

/// Phi(x' beta * exp(-g(x)/2)).
double choice_probability(const Eigen::VectorXd& x, const Coefficients& coefficients,
                          double g_at_x);

/// Bernoulli log likelihood under the heteroskedastic probit form, with
/// tail-safe log-CDF evaluation.
double log_likelihood(const Dataset& data, const Coefficients& coefficients,
                      const Eigen::VectorXd& g_at_design);

/// log((z - x' beta)^2), with the squared residual floored at 1e-50 so the
/// measure-zero exact-hit case stays finite.
double log_squared_residual(double z, const Eigen::VectorXd& x,
                            const Coefficients& coefficients);

inline constexpr double kResidualFloor = 1e-50;

/// Sup-norm distance between the mixture CDF and the empirical CDF of
/// log(W^2), W standard normal, over n_draws simulated draws.
double mixture_cdf_sup_distance(const MixtureTable& table, RngStream& rng,
                                int n_draws = 1000000);

}  // namespace hetprobit
