#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hetprobit/distributions.hpp"
#include "hetprobit/normal.hpp"
#include "hetprobit/rng.hpp"
#include "test_oracles.hpp"

using namespace hetprobit;

TEST_CASE("standard normal cdf basics") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(8.0) > 1.0 - 1e-14);
  CHECK(std_normal_cdf(8.0) <= 1.0);
  CHECK(std_normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
  // Reference values accurate to machine precision.
  CHECK(std_normal_cdf(1.0) == doctest::Approx(0.84134474606854293).epsilon(1e-14));
  CHECK(std_normal_cdf(-2.0) == doctest::Approx(0.022750131948179195).epsilon(1e-13));
  CHECK(std_normal_cdf(-8.0) == doctest::Approx(6.2209605742717405e-16).epsilon(1e-10));
  CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("standard normal cdf is monotone") {
  double prev = 0.0;
  for (double z = -10.0; z <= 10.0; z += 0.01) {
    const double p = std_normal_cdf(z);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("quantile/cdf round trip within 1e-8 on [-6, 6]") {
  for (double z = -6.0; z <= 6.0; z += 0.01) {
    const double back = std_normal_quantile(std_normal_cdf(z));
    CHECK(std::fabs(back - z) <= 1e-8);
  }
  CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
}

TEST_CASE("log cdf stays finite and accurate in the tails") {
  CHECK(std_normal_logcdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  for (double z : {-5.0, -20.0, -35.0, -50.0, -300.0}) {
    const double lp = std_normal_logcdf(z);
    CHECK(std::isfinite(lp));
    // Against the asymptotic bound phi(z)/|z| >= Phi(z) >= phi(z)|z|/(1+z^2).
    const double log_phi = -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
    CHECK(lp <= log_phi - std::log(-z) + 1e-12);
    CHECK(lp >= log_phi + std::log(-z / (1.0 + z * z)) - 1e-12);
  }
  // 50-digit reference values on both sides of the erfc/asymptotic switch.
  CHECK(std_normal_logcdf(-35.999999) == doctest::Approx(-652.50319156606382).epsilon(1e-14));
  CHECK(std_normal_logcdf(-36.000001) == doctest::Approx(-652.50326362153397).epsilon(1e-14));
  CHECK(std_normal_logcdf(-10.0) == doctest::Approx(-53.231285150512471).epsilon(1e-14));
  CHECK(std_normal_logcdf(-50.0) == doctest::Approx(-1254.8313611394199).epsilon(1e-14));
}

TEST_CASE("rng reproducibility and stream independence") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true;
  bool any_diff_stream = false;
  for (int i = 0; i < 1000; ++i) {
    const double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
    all_equal = all_equal && (ua == ub);
    any_diff_stream = any_diff_stream || (ua != uc);
  }
  CHECK(all_equal);
  CHECK(any_diff_stream);
}

TEST_CASE("matched seeds reproduce every sampler bit for bit") {
  RngStream a(9, 1), b(9, 1);
  const Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd w(3);
  w << 1.0, 2.0, 7.0;
  for (int i = 0; i < 200; ++i) {
    CHECK(sample_truncated_normal(a, 1.0, 2.0, TruncationRegion::nonnegative) ==
          sample_truncated_normal(b, 1.0, 2.0, TruncationRegion::nonnegative));
    CHECK(sample_mvn(a, mean, cov) == sample_mvn(b, mean, cov));
    CHECK(sample_categorical(a, w) == sample_categorical(b, w));
    CHECK(sample_logistic(a, 0.0, 1.0) == sample_logistic(b, 0.0, 1.0));
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("truncated normal moments") {
  RngStream rng(123, 0);
  SUBCASE("half-normal mean sqrt(2/pi)") {
    double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      acc += sample_truncated_normal(rng, 0.0, 1.0, TruncationRegion::nonnegative);
    }
    CHECK(acc / n == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.003 / 0.8));
  }
  SUBCASE("inactive truncation keeps the plain mean") {
    double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      acc += sample_truncated_normal(rng, 5.0, 1.0, TruncationRegion::nonnegative);
    }
    CHECK(std::fabs(acc / n - 5.0) < 0.01);
  }
  SUBCASE("extreme tail never leaves the region and never hangs") {
    for (int i = 0; i < 20000; ++i) {
      const double z = sample_truncated_normal(rng, 10.0, 1.0, TruncationRegion::negative);
      REQUIRE(z < 0.0);
    }
  }
  SUBCASE("variance must be positive") {
    CHECK_THROWS_AS(sample_truncated_normal(rng, 0.0, 0.0, TruncationRegion::negative),
                    std::domain_error);
    CHECK_THROWS_AS(sample_truncated_normal(rng, 0.0, -1.0, TruncationRegion::nonnegative),
                    std::domain_error);
  }
}

TEST_CASE("truncated normal passes KS against the analytic CDF") {
  struct Case {
    double mean, variance;
    TruncationRegion region;
  };
  const Case cases[] = {
      {0.0, 1.0, TruncationRegion::nonnegative},
      {2.0, 4.0, TruncationRegion::negative},
      {-1.0, 0.25, TruncationRegion::nonnegative},
      {10.0, 1.0, TruncationRegion::negative},  // rejection branch
      {-7.0, 2.0, TruncationRegion::nonnegative},
  };
  const std::size_t n = 100000;
  const double crit = oracle::ks_critical(1e-3, n);
  int case_id = 0;
  for (const auto& c : cases) {
    RngStream rng(56, static_cast<std::uint64_t>(case_id++));
    std::vector<double> sample(n);
    for (auto& s : sample) s = sample_truncated_normal(rng, c.mean, c.variance, c.region);
    const double d = oracle::ks_statistic(sample, [&](double x) {
      return oracle::truncated_normal_cdf(x, c.mean, c.variance,
                                          c.region == TruncationRegion::nonnegative);
    });
    CAPTURE(case_id);
    CHECK(d < crit);
  }
}

TEST_CASE("multivariate normal sampling") {
  SUBCASE("identity covariance moments") {
    RngStream rng(7, 0);
    const Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
    const int n = 100000;
    Eigen::MatrixXd draws(n, 2);
    for (int i = 0; i < n; ++i) draws.row(i) = sample_mvn(rng, mean, cov);
    const Eigen::RowVectorXd mu = draws.colwise().mean();
    const Eigen::MatrixXd centered = draws.rowwise() - mu;
    const Eigen::MatrixXd emp = centered.transpose() * centered / (n - 1.0);
    CHECK((emp - cov).cwiseAbs().maxCoeff() < 0.02);
  }
  SUBCASE("degenerate direction is exact") {
    RngStream rng(7, 1);
    Eigen::VectorXd mean(3);
    mean << 1.0, -2.0, 3.0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
    cov(0, 0) = 1.0;
    cov(2, 2) = 4.0;
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd draw = sample_mvn(rng, mean, cov);
      CHECK(draw(1) == -2.0);
    }
  }
  SUBCASE("correlated mean recovery") {
    RngStream rng(7, 2);
    Eigen::VectorXd mean(2);
    mean << 1.0, 2.0;
    Eigen::MatrixXd cov(2, 2);
    cov << 2.0, 1.0, 1.0, 2.0;
    const int n = 100000;
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; ++i) acc += sample_mvn(rng, mean, cov);
    acc /= n;
    CHECK(std::fabs(acc(0) - 1.0) < 0.02);
    CHECK(std::fabs(acc(1) - 2.0) < 0.02);
  }
  SUBCASE("asymmetric covariance rejected") {
    RngStream rng(7, 3);
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(sample_mvn(rng, Eigen::VectorXd::Zero(2), bad), std::domain_error);
  }
}

TEST_CASE("categorical sampling") {
  RngStream rng(3, 0);
  SUBCASE("degenerate weight") {
    Eigen::VectorXd w(3);
    w << 1.0, 0.0, 0.0;
    for (int i = 0; i < 100; ++i) CHECK(sample_categorical(rng, w) == 0);
  }
  SUBCASE("fair coin") {
    Eigen::VectorXd w(2);
    w << 1.0, 1.0;
    int ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ones += sample_categorical(rng, w) == 0 ? 1 : 0;
    CHECK(std::fabs(static_cast<double>(ones) / n - 0.5) < 0.005);
  }
  SUBCASE("weighted frequencies") {
    Eigen::VectorXd w(3);
    w << 1.0, 2.0, 7.0;
    Eigen::Vector3d counts = Eigen::Vector3d::Zero();
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts(sample_categorical(rng, w)) += 1.0;
    counts /= n;
    CHECK(std::fabs(counts(0) - 0.1) < 0.01);
    CHECK(std::fabs(counts(1) - 0.2) < 0.01);
    CHECK(std::fabs(counts(2) - 0.7) < 0.01);
  }
  SUBCASE("invalid weights") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(sample_categorical(rng, zero), std::domain_error);
    Eigen::VectorXd neg(2);
    neg << 1.0, -0.5;
    CHECK_THROWS_AS(sample_categorical(rng, neg), std::domain_error);
  }
  SUBCASE("scaling weights leaves the distribution unchanged") {
    Eigen::VectorXd w(4);
    w << 0.5, 1.5, 2.0, 4.0;
    RngStream r1(11, 0), r2(11, 1);
    const int n = 100000;
    Eigen::Vector4d c1 = Eigen::Vector4d::Zero(), c2 = Eigen::Vector4d::Zero();
    for (int i = 0; i < n; ++i) {
      c1(sample_categorical(r1, w)) += 1.0;
      c2(sample_categorical(r2, (w * 3.75).eval())) += 1.0;
    }
    // Two-sample chi-square over the 4 cells; 3 dof, reject above 16.27
    // (p = 0.001).
    double chi2 = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double pooled = (c1(j) + c2(j)) / (2.0 * n);
      chi2 += (c1(j) / n - pooled) * (c1(j) / n - pooled) / pooled * n;
      chi2 += (c2(j) / n - pooled) * (c2(j) / n - pooled) / pooled * n;
    }
    CHECK(chi2 < 16.27);
  }
}

TEST_CASE("logistic sampling") {
  RngStream rng(21, 0);
  const int n = 1000000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = sample_logistic(rng, 0.0, 1.0);
  const auto [mean, sd] = oracle::mean_sd(draws);
  CHECK(std::fabs(mean) < 0.005);
  CHECK(std::fabs(sd * sd - 1.0) < 0.01);
  std::nth_element(draws.begin(), draws.begin() + n / 2, draws.end());
  CHECK(std::fabs(draws[n / 2]) < 0.005);
  // 0.75 quantile is s*log(3) with s = sqrt(3)/pi.
  const double s = std::sqrt(3.0) / std::numbers::pi;
  CHECK(s == doctest::Approx(0.55133).epsilon(1e-4));
  std::nth_element(draws.begin(), draws.begin() + (3 * n) / 4, draws.end());
  CHECK(draws[(3 * n) / 4] == doctest::Approx(s * std::log(3.0)).epsilon(0.02));
  CHECK_THROWS_AS(sample_logistic(rng, 0.0, 0.0), std::domain_error);
}
