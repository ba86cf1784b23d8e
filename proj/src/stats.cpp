#include "ocular/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "ocular/error.hpp"

namespace ocular::stats {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 10000;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a,x) by modified Lentz evaluation of the Legendre continued fraction.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi_squared_pdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  const double k = dof / 2.0;
  return std::exp((k - 1.0) * std::log(x) - x / 2.0 - k * std::log(2.0) - std::lgamma(k));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw Error(ErrorCode::InvalidArgument, "gamma_p needs a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double chi_squared_cdf(double x, double dof) {
  if (dof == 0.0) return 1.0;
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(dof / 2.0, x / 2.0);
}

double chi_squared_quantile(double p, double dof) {
  if (!(p >= 0.0 && p <= 1.0) || dof < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "chi-squared quantile needs p in [0,1], dof >= 0");
  }
  if (dof == 0.0 || p == 0.0) return 0.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  // Bracket the root, then Newton steps that fall back to bisection whenever
  // they leave the bracket.
  double lo = 0.0, hi = std::max(1.0, dof);
  while (chi_squared_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
  }

  // Wilson-Hilferty start from the Abramowitz-Stegun 26.2.23 normal quantile.
  const double z = [&] {
    const double t = std::sqrt(-2.0 * std::log(p < 0.5 ? p : 1.0 - p));
    const double q = t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                             (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t);
    return p < 0.5 ? -q : q;
  }();
  const double c = 2.0 / (9.0 * dof);
  double x = dof * std::pow(std::max(1.0 - c + z * std::sqrt(c), 1e-3), 3.0);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = chi_squared_cdf(x, dof) - p;
    if (f < 0.0) lo = x; else hi = x;
    const double dens = chi_squared_pdf(x, dof);
    double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, x)) return next;
    x = next;
    if (hi - lo <= 1e-15 * std::max(1.0, x)) break;
  }
  return x;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "mean of empty sequence");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

double sample_sd_about(std::span<const double> values, double center) {
  if (values.size() < 2) throw Error(ErrorCode::InvalidArgument, "sample sd needs n >= 2");
  double ss = 0.0;
  for (double v : values) ss += (v - center) * (v - center);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double population_sd(std::span<const double> values) {
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "OLS needs two equal-length sequences of length >= 2");
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateTimeAxis, "all time coordinates coincide");
  return sxy / sxx;
}

}  // namespace ocular::stats
