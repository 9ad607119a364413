#include "hetprobit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hetprobit/csv.hpp"
#include "hetprobit/errors.hpp"
#include "hetprobit/normal.hpp"

namespace hetprobit {

Dataset::Dataset(Eigen::MatrixXd covariates, Eigen::VectorXi outcomes,
                 std::vector<std::string> covariate_names, const std::string& normalized) {
  const Eigen::Index n = covariates.rows();
  const Eigen::Index d = covariates.cols();
  if (n < 1) throw std::domain_error("Dataset: need at least one observation");
  if (d < 2) throw std::domain_error("Dataset: need at least two covariates");
  if (outcomes.size() != n) throw std::domain_error("Dataset: outcome length mismatch");
  if (static_cast<Eigen::Index>(covariate_names.size()) != d) {
    throw std::domain_error("Dataset: covariate name count mismatch");
  }
  if (!covariates.allFinite()) throw std::domain_error("Dataset: non-finite covariate value");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (outcomes(i) != 0 && outcomes(i) != 1) {
      throw std::domain_error("Dataset: outcome values must be 0 or 1 (row " +
                              std::to_string(i + 1) + ")");
    }
  }

  int pinned = static_cast<int>(d) - 1;
  if (!normalized.empty()) {
    pinned = -1;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (covariate_names[static_cast<std::size_t>(j)] == normalized) {
        pinned = static_cast<int>(j);
        break;
      }
    }
    if (pinned < 0) {
      throw std::domain_error("Dataset: normalized column '" + normalized + "' not found");
    }
  }

  file_names_ = covariate_names;
  internal_to_file_.resize(static_cast<std::size_t>(d));
  std::iota(internal_to_file_.begin(), internal_to_file_.end(), 0);
  // Move the pinned column to the back; relative order of the rest is kept.
  internal_to_file_.erase(internal_to_file_.begin() + pinned);
  internal_to_file_.push_back(pinned);

  covariates_.resize(n, d);
  names_.resize(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const int src = internal_to_file_[static_cast<std::size_t>(j)];
    covariates_.col(j) = covariates.col(src);
    names_[static_cast<std::size_t>(j)] = covariate_names[static_cast<std::size_t>(src)];
  }
  outcomes_ = std::move(outcomes);
}

Dataset Dataset::from_csv(const std::string& path, const std::string& normalized) {
  const CsvTable table = read_csv(path);
  const int ycol = table.column_index("y");
  if (ycol < 0) {
    throw ParseError(1, "required column 'y' not found in '" + path + "'");
  }
  const Eigen::Index n = table.values.rows();
  const Eigen::Index d = static_cast<Eigen::Index>(table.columns.size()) - 1;
  if (n < 1) throw ParseError(1, "no data rows in '" + path + "'");
  Eigen::MatrixXd x(n, d);
  std::vector<std::string> names;
  Eigen::Index j = 0;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (static_cast<int>(c) == ycol) continue;
    x.col(j++) = table.values.col(static_cast<Eigen::Index>(c));
    names.push_back(table.columns[c]);
  }
  Eigen::VectorXi y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = table.values(i, ycol);
    if (v != 0.0 && v != 1.0) {
      throw ParseError(static_cast<int>(i) + 2, "column 'y' must be 0 or 1");
    }
    y(i) = static_cast<int>(v);
  }
  return Dataset(std::move(x), std::move(y), std::move(names), normalized);
}

Eigen::MatrixXd Dataset::covariates_file_order() const {
  Eigen::MatrixXd out(covariates_.rows(), covariates_.cols());
  for (Eigen::Index j = 0; j < covariates_.cols(); ++j) {
    out.col(internal_to_file_[static_cast<std::size_t>(j)]) = covariates_.col(j);
  }
  return out;
}

Eigen::VectorXd Dataset::to_internal(const Eigen::VectorXd& point_file_order) const {
  if (point_file_order.size() != dim()) {
    throw std::domain_error("Dataset: point has " + std::to_string(point_file_order.size()) +
                            " coordinates, expected " + std::to_string(dim()));
  }
  Eigen::VectorXd out(dim());
  for (Eigen::Index j = 0; j < dim(); ++j) {
    out(j) = point_file_order(internal_to_file_[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::vector<int> Dataset::column_indices(const std::vector<std::string>& columns) const {
  std::vector<int> out;
  for (const auto& c : columns) {
    const auto it = std::find(names_.begin(), names_.end(), c);
    if (it == names_.end()) {
      throw std::domain_error("Dataset: unknown covariate column '" + c + "'");
    }
    out.push_back(static_cast<int>(it - names_.begin()));
  }
  return out;
}

Eigen::VectorXd Coefficients::full() const {
  Eigen::VectorXd beta(theta.size() + 1);
  beta.head(theta.size()) = theta;
  beta(theta.size()) = 1.0;
  return beta;
}

double Coefficients::index(const Eigen::VectorXd& x) const {
  if (x.size() != theta.size() + 1) {
    throw std::domain_error("Coefficients: covariate dimension mismatch");
  }
  return theta.dot(x.head(theta.size())) + x(theta.size());
}

MixtureTable MixtureTable::log_chisq1() {
  MixtureTable t;
  t.weights = {0.00609, 0.04775, 0.13057, 0.20674, 0.22715,
               0.18842, 0.12047, 0.05591, 0.01575, 0.00115};
  t.means = {1.92677, 1.34744, 0.73504, 0.02266, -0.85173,
             -1.97278, -3.46788, -5.55246, -8.68384, -14.65000};
  t.variances = {0.11265, 0.17788, 0.26768, 0.40611, 0.62699,
                 0.98583, 1.57469, 2.54498, 4.16591, 7.33342};
  return t;
}

void MixtureTable::validate() const {
  double total = 0.0;
  for (int j = 0; j < 10; ++j) {
    if (!(weights[j] >= 0.0)) {
      throw std::domain_error("MixtureTable: negative weight at component " + std::to_string(j + 1));
    }
    if (!(variances[j] > 0.0)) {
      throw std::domain_error("MixtureTable: nonpositive variance at component " +
                              std::to_string(j + 1));
    }
    total += weights[j];
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::domain_error("MixtureTable: weights sum to " + std::to_string(total));
  }
}

Eigen::VectorXd MixtureTable::weight_vector() const {
  Eigen::VectorXd w(10);
  for (int j = 0; j < 10; ++j) w(j) = weights[j];
  return w;
}

double choice_probability(const Eigen::VectorXd& x, const Coefficients& coefficients,
                          double g_at_x) {
  if (!x.allFinite() || !coefficients.theta.allFinite() || !std::isfinite(g_at_x)) {
    throw std::domain_error("choice_probability: non-finite input");
  }
  return std_normal_cdf(coefficients.index(x) * std::exp(-0.5 * g_at_x));
}

double log_likelihood(const Dataset& data, const Coefficients& coefficients,
                      const Eigen::VectorXd& g_at_design) {
  if (g_at_design.size() != data.n()) {
    throw std::domain_error("log_likelihood: g length mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double v = coefficients.index(data.row(i)) * std::exp(-0.5 * g_at_design(i));
    // log(1 - Phi(v)) == log Phi(-v); both sides stay finite in the tails.
    total += data.outcomes()(i) == 1 ? std_normal_logcdf(v) : std_normal_logcdf(-v);
  }
  return total;
}

double log_squared_residual(double z, const Eigen::VectorXd& x,
                            const Coefficients& coefficients) {
  const double r = z - coefficients.index(x);
  return std::log(std::max(r * r, kResidualFloor));
}

double mixture_cdf_sup_distance(const MixtureTable& table, RngStream& rng, int n_draws) {
  table.validate();
  if (n_draws < 1) throw std::domain_error("mixture_cdf_sup_distance: need draws");
  std::vector<double> draws(static_cast<std::size_t>(n_draws));
  for (auto& d : draws) {
    const double w = rng.normal();
    d = std::log(std::max(w * w, kResidualFloor));
  }
  std::sort(draws.begin(), draws.end());
  std::array<double, 10> sds;
  for (int j = 0; j < 10; ++j) sds[j] = std::sqrt(table.variances[j]);
  double sup = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    double cdf = 0.0;
    for (int j = 0; j < 10; ++j) {
      cdf += table.weights[j] * std_normal_cdf((draws[i] - table.means[j]) / sds[j]);
    }
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n_draws);
    const double lo = static_cast<double>(i) / static_cast<double>(n_draws);
    sup = std::max(sup, std::max(std::fabs(cdf - hi), std::fabs(cdf - lo)));
  }
  return sup;
}

}  // namespace hetprobit
