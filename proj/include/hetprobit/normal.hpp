#pragma once

namespace hetprobit {

/// Standard normal CDF, evaluated through the complementary error function.
/// Absolute error below 1e-12 over the whole real line; throws
/// std::domain_error on non-finite input.
double std_normal_cdf(double z);

/// log Phi(z), finite for every finite z (asymptotic expansion in the far
/// left tail where erfc underflows).
double std_normal_logcdf(double z);

/// Standard normal quantile (inverse CDF), Wichura's AS 241 algorithm.
/// Requires p in (0, 1).
double std_normal_quantile(double p);

/// Density of N(mean, variance) at x, in log space.
double normal_logpdf(double x, double mean, double variance);

}  // namespace hetprobit
