#include "hetprobit/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetprobit/normal.hpp"

namespace hetprobit {

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::domain_error("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("empirical_quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

ThetaSummary summarize_theta(const PosteriorDraws& draws, double level) {
  if (draws.thetas.rows() < 2) {
    throw std::domain_error("summarize_theta: need at least two retained draws");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("summarize_theta: level must lie in (0, 1)");
  }
  const Eigen::Index k = draws.thetas.cols();
  ThetaSummary out;
  out.medians.resize(k);
  out.intervals.resize(static_cast<std::size_t>(k));
  const double tail = 0.5 * (1.0 - level);
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<double> column(draws.thetas.col(j).data(),
                               draws.thetas.col(j).data() + draws.thetas.rows());
    out.medians(j) = empirical_quantile(column, 0.5);
    out.intervals[static_cast<std::size_t>(j)] = {empirical_quantile(column, tail),
                                                  empirical_quantile(column, 1.0 - tail), level};
  }
  return out;
}

Eigen::VectorXd predictive_prob_draws(const PosteriorDraws& draws, int point_index) {
  if (point_index < 0 || point_index >= draws.g_star_draws.cols()) {
    throw std::domain_error("predictive_prob_draws: no g draws for prediction point " +
                            std::to_string(point_index));
  }
  const Eigen::VectorXd x = draws.prediction_points.row(point_index);
  const Eigen::Index d = x.size();
  Eigen::VectorXd out(draws.thetas.rows());
  for (Eigen::Index s = 0; s < draws.thetas.rows(); ++s) {
    const double index = draws.thetas.row(s).dot(x.head(d - 1).transpose()) + x(d - 1);
    out(s) = std_normal_cdf(index * std::exp(-0.5 * draws.g_star_draws(s, point_index)));
  }
  return out;
}

double posterior_predictive(const PosteriorDraws& draws, int point_index) {
  return predictive_prob_draws(draws, point_index).mean();
}

double posterior_predictive(const PosteriorDraws& draws, const Eigen::VectorXd& x_star) {
  for (Eigen::Index k = 0; k < draws.prediction_points.rows(); ++k) {
    if (draws.prediction_points.row(k).transpose() == x_star) {
      return posterior_predictive(draws, static_cast<int>(k));
    }
  }
  throw std::domain_error("posterior_predictive: x_star does not match any stored point");
}

int bayes_decision(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::domain_error("bayes_decision: probability outside [0, 1]");
  }
  return probability >= 0.5 ? 1 : 0;
}

Eigen::VectorXd choice_prob_draws(const PosteriorDraws& draws, const Dataset& data, int i) {
  if (i < 0 || i >= data.n()) {
    throw std::domain_error("choice_prob_draws: observation index out of range");
  }
  const Eigen::VectorXd x = data.row(i);
  const Eigen::Index d = x.size();
  Eigen::VectorXd out(draws.thetas.rows());
  for (Eigen::Index s = 0; s < draws.thetas.rows(); ++s) {
    const double index = draws.thetas.row(s).dot(x.head(d - 1).transpose()) + x(d - 1);
    out(s) = std_normal_cdf(index * std::exp(-0.5 * draws.g_draws(s, i)));
  }
  return out;
}

double effective_sample_size(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::domain_error("effective_sample_size: need at least 10 values");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi) {
    return static_cast<double>(n);  // constant series: no autocorrelation by convention
  }
  double mean = 0.0;
  for (const double v : series) mean += v;
  mean /= static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
      acc += (series[t] - mean) * (series[t + lag] - mean);
    }
    return acc / static_cast<double>(n);
  };
  const double gamma0 = autocov(0);
  if (gamma0 <= 0.0) {
    return static_cast<double>(n);  // constant series: no autocorrelation by convention
  }
  // Geyer's initial monotone sequence: sum successive-lag pairs while they
  // stay positive, forcing the pair sums to be nonincreasing.
  double tau = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = (autocov(2 * m) + autocov(2 * m + 1)) / gamma0;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    tau += pair;
    prev_pair = pair;
  }
  tau = 2.0 * tau - 1.0;
  if (tau <= 1.0) {
    return static_cast<double>(n);  // negative autocorrelation: clip at the length
  }
  return std::min(static_cast<double>(n), static_cast<double>(n) / tau);
}

Summary build_summary(const PosteriorDraws& draws, double level) {
  Summary out;
  const ThetaSummary theta = summarize_theta(draws, level);
  out.theta_medians = theta.medians;
  out.theta_intervals = theta.intervals;
  out.theta_names = draws.theta_names;
  for (Eigen::Index j = 0; j < draws.thetas.cols(); ++j) {
    std::vector<double> column(draws.thetas.col(j).data(),
                               draws.thetas.col(j).data() + draws.thetas.rows());
    out.ess.push_back(effective_sample_size(column));
  }
  for (Eigen::Index k = 0; k < draws.g_star_draws.cols(); ++k) {
    const double prob = posterior_predictive(draws, static_cast<int>(k));
    out.predictive_probs.push_back(prob);
    out.decisions.push_back(bayes_decision(prob));
  }
  return out;
}

}  // namespace hetprobit
