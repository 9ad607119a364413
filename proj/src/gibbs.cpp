#include "hetprobit/gibbs.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hetprobit/csv.hpp"
#include "hetprobit/distributions.hpp"
#include "hetprobit/errors.hpp"

namespace hetprobit {

void GibbsConfig::validate() const {
  if (iterations < 1) throw std::domain_error("GibbsConfig: iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::domain_error("GibbsConfig: burn_in must lie in [0, iterations)");
  }
  if (thin < 1) throw std::domain_error("GibbsConfig: thin must be >= 1");
  if (prediction_points.rows() > 0 && !grouping.empty()) {
    throw std::domain_error(
        "GibbsConfig: prediction points and grouped updates cannot be combined");
  }
  if (prediction_points.rows() > 0 && !prediction_points.allFinite()) {
    throw std::domain_error("GibbsConfig: non-finite prediction point");
  }
}

namespace {

// Weighted cross products used by the coefficient update: A = X' W X over the
// free columns, b = X' W (z - x_last), with W = diag(exp(-g)).
void weighted_normal_equations(const Dataset& data, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& z, Eigen::MatrixXd& a,
                               Eigen::VectorXd& b) {
  const Eigen::Index k = data.dim() - 1;
  const auto free_cols = data.covariates().leftCols(k);
  const Eigen::ArrayXd w = (-g.array()).exp();
  const Eigen::VectorXd resp = z - data.covariates().col(k);
  a.noalias() = free_cols.transpose() * (free_cols.array().colwise() * w).matrix();
  b.noalias() = free_cols.transpose() * (resp.array() * w).matrix();
}

[[noreturn]] void report_deficient_column(const Dataset& data, const Eigen::VectorXd& g) {
  const Eigen::Index k = data.dim() - 1;
  const Eigen::ArrayXd sw = (-0.5 * g.array()).exp();
  const Eigen::MatrixXd design = (data.covariates().leftCols(k).array().colwise() * sw).matrix();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  std::string column = "unknown";
  if (rank < k) {
    const int idx = qr.colsPermutation().indices()(rank);
    column = data.names()[static_cast<std::size_t>(idx)];
  }
  throw NumericalError("step2: weighted Gram matrix is singular (deficient column '" + column +
                       "')");
}

Eigen::VectorXd mixture_sds(const MixtureTable& table) {
  Eigen::VectorXd out(10);
  for (int j = 0; j < 10; ++j) out(j) = std::sqrt(table.variances[j]);
  return out;
}

// Log-squared residuals minus the assigned component means, plus the matching
// noise variances: the inputs of the g update.
void centered_observations(const Dataset& data, const ChainState& state,
                           const MixtureTable& table, Eigen::VectorXd& centered,
                           Eigen::VectorXd& noise) {
  const Eigen::Index n = data.n();
  centered.resize(n);
  noise.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = state.labels(i);
    centered(i) =
        log_squared_residual(state.latent(i), data.row(i), state.coefficients) - table.means[a];
    noise(i) = table.variances[a];
  }
}

}  // namespace

GaussianMoments step2_moments(const Dataset& data, const Eigen::VectorXd& g,
                              const Eigen::VectorXd& z, const GaussianPrior* prior) {
  if (g.size() != data.n() || z.size() != data.n()) {
    throw std::domain_error("step2_moments: length mismatch");
  }
  const Eigen::Index k = data.dim() - 1;
  Eigen::MatrixXd a(k, k);
  Eigen::VectorXd b(k);
  weighted_normal_equations(data, g, z, a, b);
  if (prior != nullptr) {
    a += prior->precision;
    b += prior->precision * prior->mean;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) {
    report_deficient_column(data, g);
  }
  GaussianMoments out;
  out.mean = llt.solve(b);
  out.covariance = llt.solve(Eigen::MatrixXd::Identity(k, k));
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

GaussianMoments step4_moments(const GramMatrix& gram, const Eigen::VectorXd& noise_diag,
                              const Eigen::VectorXd& centered) {
  const Eigen::Index n = gram.size();
  if (noise_diag.size() != n || centered.size() != n) {
    throw std::domain_error("step4_moments: length mismatch");
  }
  Eigen::MatrixXd c = gram.values();
  c.diagonal() += noise_diag;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("step4: Cholesky of K + Sigma failed");
  }
  // mean = K (K+S)^{-1} r, cov = K - K (K+S)^{-1} K via one triangular solve.
  Eigen::MatrixXd half = llt.matrixL().solve(gram.values());
  GaussianMoments out;
  out.mean.noalias() = half.transpose() * llt.matrixL().solve(centered);
  out.covariance = gram.values();
  out.covariance.selfadjointView<Eigen::Lower>().rankUpdate(half.transpose(), -1.0);
  out.covariance = out.covariance.selfadjointView<Eigen::Lower>();
  return out;
}

GaussianMoments step4_star_moments(const GramMatrix& gram, const PredictionBlock& block,
                                   const Eigen::VectorXd& g_star,
                                   const Eigen::VectorXd& noise_diag,
                                   const Eigen::VectorXd& centered) {
  const Eigen::Index n = gram.size();
  const Eigen::Index m = block.star.size();
  if (g_star.size() != m || block.cross.rows() != n) {
    throw std::domain_error("step4_star_moments: dimension mismatch");
  }
  // Prior of g_n conditioned on the current prediction values:
  //   mean  C S^{-1} g_star,  covariance  K - C S^{-1} C'.
  const Eigen::MatrixXd s_inv_ct = block.star.factor().solve(block.cross.transpose());
  const Eigen::VectorXd prior_mean = block.cross * block.star.factor().solve(g_star);
  Eigen::MatrixXd k_star = gram.values();
  k_star.noalias() -= block.cross * s_inv_ct;
  k_star = 0.5 * (k_star + k_star.transpose()).eval();

  Eigen::MatrixXd c = k_star;
  c.diagonal() += noise_diag;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("step4 (prediction): Cholesky of K_* + Sigma failed");
  }
  Eigen::MatrixXd half = llt.matrixL().solve(k_star);
  GaussianMoments out;
  out.mean = prior_mean;
  out.mean.noalias() += half.transpose() * llt.matrixL().solve((centered - prior_mean).eval());
  out.covariance = k_star;
  out.covariance.selfadjointView<Eigen::Lower>().rankUpdate(half.transpose(), -1.0);
  out.covariance = out.covariance.selfadjointView<Eigen::Lower>();
  return out;
}

GaussianMoments step5_moments(const GramMatrix& gram, const PredictionBlock& block,
                              const Eigen::VectorXd& g_at_design) {
  if (g_at_design.size() != gram.size() || block.cross.rows() != gram.size()) {
    throw std::domain_error("step5_moments: dimension mismatch");
  }
  const Eigen::MatrixXd k_inv_c = gram.factor().solve(block.cross);
  GaussianMoments out;
  out.mean.noalias() = block.cross.transpose() * gram.factor().solve(g_at_design);
  out.covariance = block.star.values();
  out.covariance.noalias() -= block.cross.transpose() * k_inv_c;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

void step1_update_latents(RngStream& rng, const Dataset& data, ChainState& state) {
  const Eigen::Index n = data.n();
  if (state.latent.size() != n) state.latent.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = state.coefficients.index(data.row(i));
    const double variance = std::exp(state.log_sked.at_design(i));
    const auto region = data.outcomes()(i) == 1 ? TruncationRegion::nonnegative
                                                : TruncationRegion::negative;
    state.latent(i) = sample_truncated_normal(rng, mean, variance, region);
  }
}

void step2_update_theta(RngStream& rng, const Dataset& data, ChainState& state,
                        const GaussianPrior* prior) {
  const GaussianMoments moments =
      step2_moments(data, state.log_sked.at_design, state.latent, prior);
  state.coefficients.theta = sample_mvn(rng, moments.mean, moments.covariance);
}

void step3_update_labels(RngStream& rng, const Dataset& data, ChainState& state,
                         const MixtureTable& table) {
  const Eigen::Index n = data.n();
  if (state.labels.size() != n) state.labels.resize(n);
  Eigen::VectorXd logw(10), w(10);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = log_squared_residual(state.latent(i), data.row(i), state.coefficients);
    const double g = state.log_sked.at_design(i);
    for (int j = 0; j < 10; ++j) {
      logw(j) = std::log(table.weights[j]) +
                normal_logpdf(t, table.means[j] + g, table.variances[j]);
    }
    const double top = logw.maxCoeff();
    if (!std::isfinite(top)) {
      throw NumericalError("step3: all component log-weights are -inf at observation " +
                           std::to_string(i + 1));
    }
    w = (logw.array() - top).exp();
    state.labels(i) = sample_categorical(rng, w);
  }
}

void step4_update_g(RngStream& rng, const Dataset& data, ChainState& state,
                    const GramMatrix& gram, const MixtureTable& table) {
  Eigen::VectorXd centered, noise;
  centered_observations(data, state, table, centered, noise);
  const GaussianMoments moments = step4_moments(gram, noise, centered);
  state.log_sked.at_design = sample_mvn(rng, moments.mean, moments.covariance);
}

void step4_update_g_with_star(RngStream& rng, const Dataset& data, ChainState& state,
                              const GramMatrix& gram, const PredictionBlock& block,
                              const MixtureTable& table) {
  if (state.log_sked.at_star.size() != block.star.size()) {
    throw std::domain_error("step4 (prediction): missing g values at the prediction points");
  }
  Eigen::VectorXd centered, noise;
  centered_observations(data, state, table, centered, noise);
  const GaussianMoments moments =
      step4_star_moments(gram, block, state.log_sked.at_star, noise, centered);
  state.log_sked.at_design = sample_mvn(rng, moments.mean, moments.covariance);
}

void step5_update_g_star(RngStream& rng, ChainState& state, const GramMatrix& gram,
                         const PredictionBlock& block) {
  const GaussianMoments moments = step5_moments(gram, block, state.log_sked.at_design);
  state.log_sked.at_star = sample_mvn(rng, moments.mean, moments.covariance);
}

Grouping build_grouping(const Dataset& data, const KernelSpec& spec,
                        const std::vector<std::string>& group_columns) {
  if (group_columns.empty()) {
    throw std::domain_error("build_grouping: no grouping columns given");
  }
  const std::vector<int> group_idx = data.column_indices(group_columns);
  std::vector<int> continuous;
  for (int j = 0; j < data.dim(); ++j) {
    if (std::find(group_idx.begin(), group_idx.end(), j) == group_idx.end()) {
      continuous.push_back(j);
    }
  }
  if (continuous.empty()) {
    throw std::domain_error("build_grouping: grouping uses every covariate; "
                            "at least one continuous covariate is required");
  }

  // Groups keyed by the exact discrete values, in order of first appearance.
  std::map<std::string, int> seen;
  Grouping grouping;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    std::string key;
    for (const int j : group_idx) {
      key += format_double(data.covariates()(i, j));
      key += '|';
    }
    auto [it, inserted] = seen.try_emplace(key, static_cast<int>(grouping.members.size()));
    if (inserted) {
      grouping.members.emplace_back();
      grouping.keys.push_back(key);
    }
    grouping.members[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
  }

  for (const auto& members : grouping.members) {
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(members.size()),
                        static_cast<Eigen::Index>(continuous.size()));
    for (std::size_t r = 0; r < members.size(); ++r) {
      for (std::size_t c = 0; c < continuous.size(); ++c) {
        pts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            data.covariates()(members[r], continuous[c]);
      }
    }
    grouping.grams.push_back(gram(spec, pts));
  }
  return grouping;
}

void step4_update_g_grouped(RngStream& rng, const Dataset& data, ChainState& state,
                            const Grouping& grouping, const MixtureTable& table) {
  Eigen::VectorXd centered, noise;
  centered_observations(data, state, table, centered, noise);
  for (std::size_t r = 0; r < grouping.members.size(); ++r) {
    const auto& members = grouping.members[r];
    if (members.empty()) continue;
    const Eigen::Index nr = static_cast<Eigen::Index>(members.size());
    Eigen::VectorXd sub_centered(nr), sub_noise(nr);
    for (Eigen::Index a = 0; a < nr; ++a) {
      sub_centered(a) = centered(members[static_cast<std::size_t>(a)]);
      sub_noise(a) = noise(members[static_cast<std::size_t>(a)]);
    }
    try {
      const GaussianMoments moments = step4_moments(grouping.grams[r], sub_noise, sub_centered);
      const Eigen::VectorXd draw = sample_mvn(rng, moments.mean, moments.covariance);
      for (Eigen::Index a = 0; a < nr; ++a) {
        state.log_sked.at_design(members[static_cast<std::size_t>(a)]) = draw(a);
      }
    } catch (const NumericalError& err) {
      throw NumericalError("group '" + grouping.keys[r] + "': " + err.what());
    }
  }
}

bool sign_consistent(const Dataset& data, const ChainState& state) {
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const bool ok = data.outcomes()(i) == 1 ? state.latent(i) >= 0.0 : state.latent(i) < 0.0;
    if (!ok) return false;
  }
  return true;
}

ChainState initial_state(const Dataset& data, const GibbsConfig& config,
                         const MixtureTable& table, RngStream& rng) {
  ChainState state;
  state.log_sked.at_design = Eigen::VectorXd::Zero(data.n());
  if (config.prediction_points.rows() > 0) {
    state.log_sked.at_star = Eigen::VectorXd::Zero(config.prediction_points.rows());
  }
  // Least-squares fit of 2y - 1 on the free covariates with the normalized
  // column as offset: the coefficient update's moments at unit weights.
  Eigen::VectorXd pseudo(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    pseudo(i) = 2.0 * data.outcomes()(i) - 1.0;
  }
  state.coefficients.theta = step2_moments(data, state.log_sked.at_design, pseudo).mean;

  const Eigen::VectorXd weights = table.weight_vector();
  state.labels.resize(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    state.labels(i) = sample_categorical(rng, weights);
  }
  step1_update_latents(rng, data, state);
  return state;
}

PosteriorDraws run_chain(const Dataset& data, const KernelSpec& spec,
                         const GibbsConfig& config, const MixtureTable& table) {
  config.validate();
  spec.validate();
  table.validate();
  if (config.prediction_points.rows() > 0 && config.prediction_points.cols() != data.dim()) {
    throw std::domain_error("run_chain: prediction points must have " +
                            std::to_string(data.dim()) + " coordinates");
  }

  RngStream rng(config.seed, config.stream_id);
  const bool grouped = !config.grouping.empty();
  const Eigen::Index m = config.prediction_points.rows();

  Grouping grouping;
  GramMatrix full_gram;
  PredictionBlock block;
  if (grouped) {
    grouping = build_grouping(data, spec, config.grouping);
  } else {
    full_gram = gram(spec, data.covariates());
    if (m > 0) {
      block = prediction_block(spec, data.covariates(), config.prediction_points);
    }
  }

  ChainState state = initial_state(data, config, table, rng);

  const int retained = (config.iterations - config.burn_in) / config.thin;
  PosteriorDraws draws;
  draws.retained = retained;
  draws.thetas.resize(retained, data.dim() - 1);
  draws.g_draws.resize(retained, data.n());
  draws.g_star_draws.resize(retained, m);
  draws.prediction_points = config.prediction_points;
  draws.theta_names.assign(data.names().begin(), data.names().end() - 1);

  int stored = 0;
  for (int s = 1; s <= config.iterations; ++s) {
    try {
      step1_update_latents(rng, data, state);
      step2_update_theta(rng, data, state);
      step3_update_labels(rng, data, state, table);
      if (grouped) {
        step4_update_g_grouped(rng, data, state, grouping, table);
      } else if (m > 0) {
        step4_update_g_with_star(rng, data, state, full_gram, block, table);
        step5_update_g_star(rng, state, full_gram, block);
      } else {
        step4_update_g(rng, data, state, full_gram, table);
      }
      if (!sign_consistent(data, state)) {
        throw NumericalError("latent/outcome sign consistency violated");
      }
    } catch (const std::exception& err) {
      throw NumericalError("iteration " + std::to_string(s) + ": " + err.what());
    }
    if (s > config.burn_in && (s - config.burn_in) % config.thin == 0 && stored < retained) {
      draws.thetas.row(stored) = state.coefficients.theta;
      draws.g_draws.row(stored) = state.log_sked.at_design;
      if (m > 0) draws.g_star_draws.row(stored) = state.log_sked.at_star;
      ++stored;
    }
  }
  return draws;
}

}  // namespace hetprobit
