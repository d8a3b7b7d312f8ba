#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace atrisk {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF, accurate over the full double range.
double norm_cdf(double x);

/// log(norm_cdf(x)), stable deep into the lower tail.
double log_norm_cdf(double x);

/// Pearson correlation. Returns NaN when either input has zero variance.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Median using the lower-middle element for even-length inputs, so the
/// result is always an attained value. Input is copied and sorted.
double median_lower(std::span<const double> values);

/// Left-continuous empirical quantile: the smallest sample value v with
/// #{s <= v} / n >= tau. Requires a non-empty sample and tau in (0,1).
double empirical_quantile(std::span<const double> sample, double tau);

/// Same, over a pre-sorted ascending sample (no copy).
double empirical_quantile_sorted(std::span<const double> sorted, double tau);

/// Fraction of sample values <= x (empirical CDF evaluated at x).
double empirical_cdf(std::span<const double> sample, double x);

/// splitmix64 step; used to derive independent per-replication RNG seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace atrisk
