#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "atrisk/types.hpp"

namespace atrisk {

/// Mean block length L = max(h, round(T^(1/3))), rounding half to even.
int bootstrap_block_length(int t, int horizon);

/// One circular stationary-bootstrap index sequence of length t: blocks of
/// geometric length (mean mean_block, restart probability 1/mean_block)
/// wrapped modulo t. block_lengths, when given, receives the realized block
/// lengths (the final one truncated by the series end).
std::vector<int> stationary_bootstrap_indices(int t, int mean_block, std::mt19937_64& rng,
                                              std::vector<int>* block_lengths = nullptr);

/// Metric evaluated on a resampled (p, y) series. A NaN return (or a thrown
/// Error) marks the replication as undefined; it is discarded, never imputed.
using MetricFn = std::function<double(std::span<const double>, std::span<const int>)>;

struct BootstrapCi {
  double lo = 0.0;   // 2.5th percentile of the surviving replications
  double hi = 0.0;   // 97.5th percentile
  std::vector<double> replications;  // survivors, in replication order
  int discarded = 0;
};

/// Stationary bootstrap of a forecast-evaluation metric: (p, y) pairs are
/// resampled jointly. Replication r draws its RNG stream from (seed, r), so
/// results are identical regardless of execution schedule.
BootstrapCi stationary_bootstrap(std::span<const double> p, std::span<const int> y,
                                 const MetricFn& metric, int horizon, int replications,
                                 std::uint64_t seed, int threads = 1,
                                 Diagnostics* diag = nullptr);

struct PairedBootstrap {
  BootstrapCi proposed;
  BootstrapCi benchmark;
  /// Share of surviving replications where the benchmark strictly beats the
  /// proposed model.
  double benchmark_beat_share = 0.0;
  int discarded = 0;
};

/// Evaluates two models on identical resampled index sequences. A
/// replication undefined for either model is discarded for both.
PairedBootstrap stationary_bootstrap_paired(std::span<const double> p_proposed,
                                            std::span<const double> p_benchmark,
                                            std::span<const int> y, const MetricFn& metric,
                                            bool higher_is_better, int horizon, int replications,
                                            std::uint64_t seed, int threads = 1,
                                            Diagnostics* diag = nullptr);

}  // namespace atrisk
