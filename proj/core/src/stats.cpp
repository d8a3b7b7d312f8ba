#include "atrisk/stats.hpp"

#include <algorithm>
#include <cmath>

#include "atrisk/errors.hpp"

namespace atrisk {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;
}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_norm_cdf(double x) {
  if (x > -37.0) {
    return std::log(0.5 * std::erfc(-x / kSqrt2));
  }
  // Asymptotic expansion for the deep lower tail where erfc underflows:
  // Phi(x) ~ phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - ...)
  const double x2 = x * x;
  return -0.5 * x2 - kLogSqrt2Pi - std::log(-x) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ArgumentError("pearson_correlation: length mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

double median_lower(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("median_lower: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

double empirical_quantile(std::span<const double> sample, double tau) {
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  return empirical_quantile_sorted(v, tau);
}

double empirical_quantile_sorted(std::span<const double> sorted, double tau) {
  if (sorted.empty()) throw ArgumentError("empirical_quantile: empty sample");
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ArgumentError("empirical_quantile: tau must lie in (0,1)");
  }
  const double n = static_cast<double>(sorted.size());
  // Smallest k with (k+1)/n >= tau. The epsilon absorbs representation error
  // when tau*n is an exact integer (e.g. tau=0.30, n=10).
  auto k = static_cast<std::ptrdiff_t>(std::ceil(tau * n - 1e-9)) - 1;
  if (k < 0) k = 0;
  if (k >= static_cast<std::ptrdiff_t>(sorted.size())) k = static_cast<std::ptrdiff_t>(sorted.size()) - 1;
  return sorted[static_cast<std::size_t>(k)];
}

double empirical_cdf(std::span<const double> sample, double x) {
  if (sample.empty()) throw ArgumentError("empirical_cdf: empty sample");
  std::size_t count = 0;
  for (double s : sample) {
    if (s <= x) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace atrisk
