#include "hetprobit/simstudy.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "hetprobit/distributions.hpp"
#include "hetprobit/posterior.hpp"

namespace hetprobit {

void DgpSpec::validate() const {
  if (n < 1) throw std::domain_error("DgpSpec: n must be at least 1");
  if (!std::isfinite(theta_true)) throw std::domain_error("DgpSpec: theta_true must be finite");
}

void StudyConfig::validate() const {
  if (n < 1) throw std::domain_error("StudyConfig: n must be at least 1");
  if (replications < 1) throw std::domain_error("StudyConfig: replications must be at least 1");
  if (alphas.empty()) throw std::domain_error("StudyConfig: need at least one alpha");
  for (const double a : alphas) {
    if (!(a > 0.0)) throw std::domain_error("StudyConfig: alpha must be positive");
  }
  if (!(length_scale > 0.0)) throw std::domain_error("StudyConfig: length_scale must be positive");
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("StudyConfig: level outside (0, 1)");
  GibbsConfig g;
  g.iterations = iterations;
  g.burn_in = burn_in;
  g.thin = thin;
  g.validate();
}

double dgp_error_scale(double index_sum) {
  const double s2 = index_sum * index_sum;
  return 0.25 * (1.0 + 2.0 * s2 + s2 * s2);
}

Dataset generate_dgp(const DgpSpec& spec, RngStream& rng) {
  spec.validate();
  Eigen::MatrixXd x(spec.n, 2);
  Eigen::VectorXi y(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const double x1 = rng.normal();
    const double x2 = 1.0 + rng.normal();
    const double v = sample_logistic(rng, 0.0, 1.0);
    const double u = dgp_error_scale(x1 + x2) * v;
    x(i, 0) = x1;
    x(i, 1) = x2;
    y(i) = (x1 + spec.theta_true * x2 >= u) ? 1 : 0;
  }
  // The x1 coefficient is the one pinned to 1, so theta rides on x2.
  return Dataset(std::move(x), std::move(y), {"x1", "x2"}, "x1");
}

ReplicationOutcome run_replication(const StudyConfig& config, double alpha, int replication) {
  ReplicationOutcome out;
  try {
    DgpSpec dgp;
    dgp.n = config.n;
    dgp.theta_true = config.theta_true;
    dgp.seed = config.seed;
    // Stream split: even ids generate data, odd ids drive the chain. The
    // same data stream is reused across alphas so smoothness comparisons
    // share datasets.
    RngStream data_rng(config.seed, 2 * static_cast<std::uint64_t>(replication));
    const Dataset data = generate_dgp(dgp, data_rng);

    KernelSpec kernel{alpha, config.length_scale};
    GibbsConfig gibbs;
    gibbs.iterations = config.iterations;
    gibbs.burn_in = config.burn_in;
    gibbs.thin = config.thin;
    gibbs.seed = config.seed;
    gibbs.stream_id = 2 * static_cast<std::uint64_t>(replication) + 1;

    const PosteriorDraws draws = run_chain(data, kernel, gibbs, MixtureTable::log_chisq1());
    const ThetaSummary summary = summarize_theta(draws, config.level);
    out.median = summary.medians(0);
    out.lower = summary.intervals[0].lower;
    out.upper = summary.intervals[0].upper;
    out.ok = true;
  } catch (const std::exception& err) {
    out.ok = false;
    out.error = err.what();
  }
  return out;
}

StudyResult run_study(const StudyConfig& config) {
  config.validate();
  const int r = config.replications;
  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, r);

  StudyResult result;
  for (const double alpha : config.alphas) {
    std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(r));
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    auto worker = [&]() {
      for (;;) {
        const int idx = next.fetch_add(1);
        if (idx >= r) return;
        outcomes[static_cast<std::size_t>(idx)] = run_replication(config, alpha, idx);
        const int finished = done.fetch_add(1) + 1;
        if (config.progress) {
          std::fprintf(stderr, "alpha=%g replication %d/%d done\n", alpha, finished, r);
        }
      }
    };
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    StudyRow row;
    row.alpha = alpha;
    row.replications = r;
    std::vector<double> sq_errors, lengths;
    int covered = 0;
    for (const auto& o : outcomes) {
      if (!o.ok) {
        ++row.failures;
        continue;
      }
      const double err = o.median - config.theta_true;
      sq_errors.push_back(err * err);
      lengths.push_back(o.upper - o.lower);
      if (o.lower <= config.theta_true && config.theta_true <= o.upper) ++covered;
    }
    const int ok = static_cast<int>(sq_errors.size());
    if (ok > 0) {
      auto mean_sd = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (const double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (const double x : v) ss += (x - mean) * (x - mean);
        const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        return std::pair<double, double>(mean, sd);
      };
      const auto [mse, mse_sd] = mean_sd(sq_errors);
      const auto [len, len_sd] = mean_sd(lengths);
      row.mse = mse;
      row.mse_se = mse_sd / std::sqrt(static_cast<double>(ok));
      row.avg_length = len;
      row.avg_length_se = len_sd / std::sqrt(static_cast<double>(ok));
      row.coverage = static_cast<double>(covered) / static_cast<double>(ok);
      row.coverage_se = std::sqrt(row.coverage * (1.0 - row.coverage) / static_cast<double>(ok));
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace hetprobit
