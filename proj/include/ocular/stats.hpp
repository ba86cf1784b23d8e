#pragma once

#include <span>

namespace ocular::stats {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

double chi_squared_cdf(double x, double dof);

// Inverse CDF of the chi-squared distribution. dof == 0 is the point mass
// at zero and returns 0 for every p.
double chi_squared_quantile(double p, double dof);

double mean(std::span<const double> values);

// Median; even-length inputs average the two central order statistics.
double median(std::span<const double> values);

// sqrt( sum (v - center)^2 / (n - 1) ). Needs n >= 2.
double sample_sd_about(std::span<const double> values, double center);

// Population standard deviation (n denominator).
double population_sd(std::span<const double> values);

// Closed-form least-squares slope of y on x. Throws DegenerateTimeAxis when
// all x coincide.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ocular::stats
