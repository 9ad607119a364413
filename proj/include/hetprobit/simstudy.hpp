#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetprobit/gibbs.hpp"
#include "hetprobit/model.hpp"

namespace hetprobit {

/// Simulation design: Y = 1{X1 + theta*X2 >= U} with X1 ~ N(0,1),
/// X2 ~ N(1,1) and U = 0.25 (1 + 2 (X1+X2)^2 + (X1+X2)^4) V, where V is
/// logistic with median zero and unit variance. The coefficient on X1 is the
/// one normalized to 1, leaving theta on X2 as the single free coefficient.
struct DgpSpec {
  int n = 250;
  double theta_true = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Multiplier on the logistic noise at index sum s = x1 + x2.
double dgp_error_scale(double index_sum);

Dataset generate_dgp(const DgpSpec& spec, RngStream& rng);

struct StudyRow {
  double alpha = 0.0;
  double mse = 0.0;
  double mse_se = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;  // binomial proportion standard error
  double avg_length = 0.0;
  double avg_length_se = 0.0;
  int replications = 0;
  int failures = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
};

struct StudyConfig {
  int n = 250;
  std::vector<double> alphas = {1.5};
  int replications = 100;
  double length_scale = 1.0;
  double theta_true = 1.0;
  double level = 0.95;
  int iterations = 10000;
  int burn_in = 5000;
  int thin = 1;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  bool progress = false;

  void validate() const;
};

/// One replication: simulate a dataset, fit the chain, summarize theta.
struct ReplicationOutcome {
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool ok = false;
  std::string error;
};

ReplicationOutcome run_replication(const StudyConfig& config, double alpha, int replication);

/// Monte Carlo study over all requested smoothness values. Replications run
/// on independent streams (split by replication index), so results do not
/// depend on the thread count. Failed replications are excluded from the
/// aggregates and counted.
StudyResult run_study(const StudyConfig& config);

}  // namespace hetprobit
