#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hetprobit/normal.hpp"
#include "hetprobit/posterior.hpp"
#include "hetprobit/rng.hpp"
#include "test_oracles.hpp"

using namespace hetprobit;

namespace {

// Hand-assembled draws with one prediction point.
PosteriorDraws synthetic_draws(const Eigen::MatrixXd& thetas, const Eigen::MatrixXd& g_star,
                               const Eigen::MatrixXd& points) {
  PosteriorDraws draws;
  draws.thetas = thetas;
  draws.g_draws = Eigen::MatrixXd::Zero(thetas.rows(), 1);
  draws.g_star_draws = g_star;
  draws.prediction_points = points;
  draws.retained = static_cast<int>(thetas.rows());
  draws.theta_names = {"c1"};
  return draws;
}

}  // namespace

TEST_CASE("empirical quantiles use order-statistic interpolation") {
  CHECK(empirical_quantile({1.0, 2.0, 3.0}, 0.5) == 2.0);
  CHECK(empirical_quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(empirical_quantile({3.0, 1.0, 2.0}, 0.0) == 1.0);
  CHECK(empirical_quantile({3.0, 1.0, 2.0}, 1.0) == 3.0);
  CHECK(empirical_quantile({0.0, 10.0}, 0.75) == 7.5);
  CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::domain_error);
  CHECK_THROWS_AS(empirical_quantile({1.0}, 1.5), std::domain_error);
}

TEST_CASE("summarize_theta medians and intervals") {
  SUBCASE("median of three") {
    Eigen::MatrixXd thetas(3, 1);
    thetas << 1.0, 2.0, 3.0;
    const auto s = summarize_theta(synthetic_draws(thetas, {}, {}), 0.5);
    CHECK(s.medians(0) == 2.0);
  }
  SUBCASE("symmetric draws give a symmetric interval") {
    Eigen::MatrixXd thetas(101, 1);
    for (int i = 0; i <= 100; ++i) thetas(i, 0) = (i - 50) / 10.0;
    const auto s = summarize_theta(synthetic_draws(thetas, {}, {}), 0.9);
    CHECK(s.medians(0) == 0.0);
    CHECK(s.intervals[0].lower == doctest::Approx(-s.intervals[0].upper).epsilon(1e-12));
  }
  SUBCASE("normal pseudo-draws recover the normal quantiles") {
    RngStream rng(40, 0);
    Eigen::MatrixXd thetas(100000, 1);
    for (int i = 0; i < thetas.rows(); ++i) thetas(i, 0) = rng.normal();
    const auto s = summarize_theta(synthetic_draws(thetas, {}, {}), 0.95);
    CHECK(s.intervals[0].lower == doctest::Approx(-1.959964).epsilon(0.02 / 1.96));
    CHECK(s.intervals[0].upper == doctest::Approx(1.959964).epsilon(0.02 / 1.96));
    // The median sits inside every interval.
    for (double level : {0.5, 0.8, 0.99}) {
      const auto t = summarize_theta(synthetic_draws(thetas, {}, {}), level);
      CHECK(t.intervals[0].lower <= t.medians(0));
      CHECK(t.medians(0) <= t.intervals[0].upper);
    }
  }
  SUBCASE("needs at least two draws") {
    Eigen::MatrixXd one(1, 1);
    one << 1.0;
    CHECK_THROWS_AS(summarize_theta(synthetic_draws(one, {}, {}), 0.95), std::domain_error);
  }
}

TEST_CASE("posterior predictive probabilities") {
  Eigen::MatrixXd points(1, 2);
  points << 1.0, 0.0;  // index = theta

  SUBCASE("zero index gives one half exactly") {
    Eigen::MatrixXd thetas = Eigen::MatrixXd::Zero(5, 1);
    Eigen::MatrixXd g_star = Eigen::MatrixXd::Random(5, 1);
    const auto draws = synthetic_draws(thetas, g_star, points);
    CHECK(posterior_predictive(draws, 0) == 0.5);
  }
  SUBCASE("average of two draws") {
    // Choose thetas whose probabilities are 0.2 and 0.8 by symmetry.
    const double q = std_normal_quantile(0.8);
    Eigen::MatrixXd thetas(2, 1);
    thetas << -q, q;
    Eigen::MatrixXd g_star = Eigen::MatrixXd::Zero(2, 1);
    const auto draws = synthetic_draws(thetas, g_star, points);
    CHECK(posterior_predictive(draws, 0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("single draw recovers Phi(1)") {
    Eigen::MatrixXd thetas(1, 1);
    thetas << 1.0;
    Eigen::MatrixXd g_star = Eigen::MatrixXd::Zero(1, 1);
    const auto draws = synthetic_draws(thetas, g_star, points);
    CHECK(posterior_predictive(draws, 0) == doctest::Approx(0.84134).epsilon(1e-5));
  }
  SUBCASE("missing prediction point is a domain error") {
    Eigen::MatrixXd thetas(2, 1);
    thetas << 0.0, 0.0;
    const auto draws = synthetic_draws(thetas, Eigen::MatrixXd(2, 0), Eigen::MatrixXd(0, 2));
    CHECK_THROWS_AS(posterior_predictive(draws, 0), std::domain_error);
    Eigen::VectorXd miss(2);
    miss << 9.0, 9.0;
    CHECK_THROWS_AS(posterior_predictive(draws, miss), std::domain_error);
  }
  SUBCASE("lookup by exact point") {
    Eigen::MatrixXd thetas(2, 1);
    thetas << 0.3, -0.1;
    Eigen::MatrixXd g_star = Eigen::MatrixXd::Zero(2, 1);
    const auto draws = synthetic_draws(thetas, g_star, points);
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    CHECK(posterior_predictive(draws, x) == posterior_predictive(draws, 0));
  }
  SUBCASE("predictive is the mean of the per-draw probabilities") {
    RngStream rng(41, 0);
    Eigen::MatrixXd thetas(500, 1), g_star(500, 1);
    for (int i = 0; i < 500; ++i) {
      thetas(i, 0) = rng.normal();
      g_star(i, 0) = 0.5 * rng.normal();
    }
    const auto draws = synthetic_draws(thetas, g_star, points);
    const Eigen::VectorXd probs = predictive_prob_draws(draws, 0);
    CHECK(probs.minCoeff() >= 0.0);
    CHECK(probs.maxCoeff() <= 1.0);
    CHECK(std::fabs(posterior_predictive(draws, 0) - probs.mean()) <= 1e-15);
  }
}

TEST_CASE("bayes decision flips exactly at one half") {
  CHECK(bayes_decision(0.5) == 1);
  CHECK(bayes_decision(0.4999) == 0);
  CHECK(bayes_decision(1.0) == 1);
  CHECK(bayes_decision(0.0) == 0);
  CHECK(bayes_decision(std::nextafter(0.5, 0.0)) == 0);
  CHECK(bayes_decision(std::nextafter(0.5, 1.0)) == 1);
  int flips = 0;
  int prev = 0;
  for (double p = 0.0; p <= 1.0; p += 1.0 / 4096.0) {
    const int d = bayes_decision(p);
    if (d != prev) {
      ++flips;
      CHECK(p >= 0.5);
      CHECK(p - 1.0 / 4096.0 < 0.5);
    }
    prev = d;
  }
  CHECK(flips == 1);
  CHECK_THROWS_AS(bayes_decision(1.2), std::domain_error);
}

TEST_CASE("choice probability draws at a design point") {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, -0.5, 2.0, 0.0;
  Eigen::VectorXi y(2);
  y << 1, 0;
  const Dataset data(x, y, {"c1", "c2"});

  PosteriorDraws draws;
  draws.thetas = Eigen::MatrixXd(3, 1);
  draws.thetas << 0.5, -0.5, 2.0;
  draws.g_draws = Eigen::MatrixXd(3, 2);
  draws.g_draws << 0.0, 1.0, -1.0, 0.5, 2.0, 0.0;
  draws.retained = 3;
  draws.theta_names = {"c1"};

  SUBCASE("matches choice_probability per draw") {
    for (int i = 0; i < 2; ++i) {
      const Eigen::VectorXd probs = choice_prob_draws(draws, data, i);
      for (int s = 0; s < 3; ++s) {
        Coefficients coeff;
        coeff.theta = draws.thetas.row(s).transpose();
        const double direct = choice_probability(data.row(i), coeff, draws.g_draws(s, i));
        CHECK(std::fabs(probs(s) - direct) <= 1e-15);
      }
    }
  }
  SUBCASE("zero index gives a constant half") {
    Eigen::MatrixXd x0(1, 2);
    x0 << 5.0, 0.0;
    Eigen::VectorXi y0(1);
    y0 << 1;
    const Dataset zero_data(x0, y0, {"c1", "c2"});
    PosteriorDraws zdraws = draws;
    zdraws.thetas.setZero();
    zdraws.g_draws = Eigen::MatrixXd::Random(3, 1);
    const Eigen::VectorXd probs = choice_prob_draws(zdraws, zero_data, 0);
    for (int s = 0; s < 3; ++s) CHECK(probs(s) == 0.5);
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(choice_prob_draws(draws, data, 2), std::domain_error);
    CHECK_THROWS_AS(choice_prob_draws(draws, data, -1), std::domain_error);
  }
}

TEST_CASE("effective sample size") {
  SUBCASE("independent draws") {
    RngStream rng(42, 0);
    std::vector<double> series(10000);
    for (auto& v : series) v = rng.normal();
    const double ess = effective_sample_size(series);
    CHECK(ess > 0.9 * 10000);
    CHECK(ess <= 10000);
  }
  SUBCASE("AR(1) with coefficient 0.9") {
    RngStream rng(43, 0);
    const int n = 200000;
    std::vector<double> series(n);
    double x = 0.0;
    for (auto& v : series) {
      x = 0.9 * x + rng.normal();
      v = x;
    }
    const double expected = n * (1.0 - 0.9) / (1.0 + 0.9);
    const double ess = effective_sample_size(series);
    CHECK(ess > 0.8 * expected);
    CHECK(ess < 1.2 * expected);
  }
  SUBCASE("alternating series clips to the length") {
    std::vector<double> series(1000);
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = i % 2 == 0 ? 1.0 : -1.0;
    CHECK(effective_sample_size(series) == 1000.0);
  }
  SUBCASE("constant series reports the length") {
    std::vector<double> series(64, 3.14);
    CHECK(effective_sample_size(series) == 64.0);
  }
  SUBCASE("short series rejected") {
    std::vector<double> series(9, 0.0);
    CHECK_THROWS_AS(effective_sample_size(series), std::domain_error);
  }
}

TEST_CASE("summary assembles medians, intervals, predictions and ESS") {
  RngStream rng(44, 0);
  Eigen::MatrixXd thetas(5000, 1), g_star(5000, 1);
  for (int i = 0; i < 5000; ++i) {
    thetas(i, 0) = 1.0 + 0.1 * rng.normal();
    g_star(i, 0) = 0.2 * rng.normal();
  }
  Eigen::MatrixXd points(1, 2);
  points << 1.0, 0.5;
  const auto draws = synthetic_draws(thetas, g_star, points);
  const Summary s = build_summary(draws, 0.95);
  CHECK(s.theta_medians(0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s.theta_intervals[0].lower < 1.0);
  CHECK(s.theta_intervals[0].upper > 1.0);
  CHECK(s.predictive_probs.size() == 1);
  CHECK(s.decisions[0] == bayes_decision(s.predictive_probs[0]));
  CHECK(s.ess.size() == 1);
  CHECK(s.ess[0] > 0.0);
}
