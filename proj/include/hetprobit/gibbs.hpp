#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetprobit/kernels.hpp"
#include "hetprobit/model.hpp"
#include "hetprobit/rng.hpp"

namespace hetprobit {

struct GibbsConfig {
  int iterations = 10000;
  int burn_in = 5000;
  int thin = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Prediction points, one per row, in the dataset's internal covariate
  /// order. Zero rows disables the prediction-extended sampler.
  Eigen::MatrixXd prediction_points;

  /// Discrete covariate columns defining the groupwise g update. Empty means
  /// one Gaussian process over all covariates.
  std::vector<std::string> grouping;

  void validate() const;
};

/// Retained post-burn-in draws.
struct PosteriorDraws {
  Eigen::MatrixXd thetas;             // retained x (d-1)
  Eigen::MatrixXd g_draws;            // retained x n
  Eigen::MatrixXd g_star_draws;       // retained x m (zero cols when unused)
  Eigen::MatrixXd prediction_points;  // m x d, internal order
  std::vector<std::string> theta_names;
  int retained = 0;
};

/// Mean and covariance of a conditional Gaussian update. The step functions
/// draw from these; they are exposed so the closed forms can be checked
/// against independent implementations.
struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Optional conjugate Gaussian prior for the index coefficients. The shipped
/// sampler uses the improper flat prior (null prior); the proper variant
/// exists so self-consistency checks can simulate from a proper joint.
struct GaussianPrior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
};

/// Weighted-least-squares moments for the coefficient update: mean
/// theta_hat(g) and covariance V_hat(g) with weights exp(-g(x_i)) and
/// responses z_i - x_{i,last}.
GaussianMoments step2_moments(const Dataset& data, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& z,
                              const GaussianPrior* prior = nullptr);

/// GP-regression moments for the g update: observations `centered` (the
/// log-squared residuals minus the component means), noise variances
/// `noise_diag`.
GaussianMoments step4_moments(const GramMatrix& gram, const Eigen::VectorXd& noise_diag,
                              const Eigen::VectorXd& centered);

/// Prediction-extended g update: conditions the GP prior on the current
/// g(x_*) values before the regression update.
GaussianMoments step4_star_moments(const GramMatrix& gram, const PredictionBlock& block,
                                   const Eigen::VectorXd& g_star,
                                   const Eigen::VectorXd& noise_diag,
                                   const Eigen::VectorXd& centered);

/// Conditional of g at the prediction points given g at the design points
/// (pure GP interpolation; no likelihood term).
GaussianMoments step5_moments(const GramMatrix& gram, const PredictionBlock& block,
                              const Eigen::VectorXd& g_at_design);

void step1_update_latents(RngStream& rng, const Dataset& data, ChainState& state);
void step2_update_theta(RngStream& rng, const Dataset& data, ChainState& state,
                        const GaussianPrior* prior = nullptr);
void step3_update_labels(RngStream& rng, const Dataset& data, ChainState& state,
                         const MixtureTable& table);
void step4_update_g(RngStream& rng, const Dataset& data, ChainState& state,
                    const GramMatrix& gram, const MixtureTable& table);
void step4_update_g_with_star(RngStream& rng, const Dataset& data, ChainState& state,
                              const GramMatrix& gram, const PredictionBlock& block,
                              const MixtureTable& table);
void step5_update_g_star(RngStream& rng, ChainState& state, const GramMatrix& gram,
                         const PredictionBlock& block);

/// Partition of the observations by the values of discrete covariates, with
/// one Gram matrix per group over the continuous covariates only.
struct Grouping {
  std::vector<std::vector<int>> members;
  std::vector<GramMatrix> grams;
  std::vector<std::string> keys;  // printable group labels for diagnostics
};

Grouping build_grouping(const Dataset& data, const KernelSpec& spec,
                        const std::vector<std::string>& group_columns);

/// Groupwise g update: the g blocks are independent across groups under the
/// conditional posterior, so each group runs the plain update on its
/// restriction.
void step4_update_g_grouped(RngStream& rng, const Dataset& data, ChainState& state,
                            const Grouping& grouping, const MixtureTable& table);

/// Full sampler: steps Z -> theta -> labels -> g (-> g with prediction
/// conditioning -> g at prediction points) for `iterations` sweeps from a
/// deterministic initialization. Deterministic given (seed, stream_id).
PosteriorDraws run_chain(const Dataset& data, const KernelSpec& spec,
                         const GibbsConfig& config, const MixtureTable& table);

/// Initialization used by run_chain, exposed for the self-consistency tests:
/// theta from an unweighted least-squares fit of 2y-1 on the free covariates
/// with the normalized column as offset, g identically zero, labels from the
/// prior weights, latents from step 1.
ChainState initial_state(const Dataset& data, const GibbsConfig& config,
                         const MixtureTable& table, RngStream& rng);

/// Sign consistency between outcomes and latents (y=1 <=> z >= 0), enforced
/// after every sweep.
bool sign_consistent(const Dataset& data, const ChainState& state);

}  // namespace hetprobit
