#include "atrisk/bootstrap.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>

#include "atrisk/errors.hpp"
#include "atrisk/parallel.hpp"
#include "atrisk/stats.hpp"

namespace atrisk {

int bootstrap_block_length(int t, int horizon) {
  if (t < 1) throw ArgumentError("bootstrap_block_length: empty series");
  if (horizon < 1) throw ArgumentError("bootstrap_block_length: horizon must be >= 1");
  // nearbyint rounds half to even under the default FE_TONEAREST mode.
  const int rounded = static_cast<int>(std::nearbyint(std::cbrt(static_cast<double>(t))));
  return std::max(horizon, std::max(1, rounded));
}

std::vector<int> stationary_bootstrap_indices(int t, int mean_block, std::mt19937_64& rng,
                                              std::vector<int>* block_lengths) {
  if (t < 1) throw ArgumentError("stationary_bootstrap_indices: empty series");
  if (mean_block < 1) throw ArgumentError("stationary_bootstrap_indices: mean block must be >= 1");
  std::uniform_int_distribution<int> start(0, t - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double restart = 1.0 / static_cast<double>(mean_block);

  std::vector<int> indices(static_cast<std::size_t>(t));
  int pos = start(rng);
  indices[0] = pos;
  int current_block = 1;
  for (int i = 1; i < t; ++i) {
    if (unit(rng) < restart) {
      if (block_lengths) block_lengths->push_back(current_block);
      pos = start(rng);
      current_block = 1;
    } else {
      pos = (pos + 1) % t;
      ++current_block;
    }
    indices[static_cast<std::size_t>(i)] = pos;
  }
  if (block_lengths) block_lengths->push_back(current_block);
  return indices;
}

namespace {

struct Replication {
  double value = 0.0;
  bool defined = false;
};

std::vector<Replication> run_replications(std::span<const double> p, std::span<const int> y,
                                          const MetricFn& metric, int horizon, int replications,
                                          std::uint64_t seed, int threads) {
  if (p.size() != y.size() || p.empty()) {
    throw ArgumentError("stationary_bootstrap: probability/label length mismatch");
  }
  const int t = static_cast<int>(p.size());
  const int block = bootstrap_block_length(t, horizon);
  if (t < block) throw ArgumentError("stationary_bootstrap: series shorter than the block length");

  std::vector<Replication> reps(static_cast<std::size_t>(replications));
  parallel_for(static_cast<std::size_t>(replications), threads, [&](std::size_t r) {
    std::mt19937_64 rng(split_seed(seed, r));
    const auto idx = stationary_bootstrap_indices(t, block, rng);
    std::vector<double> pr(idx.size());
    std::vector<int> yr(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      pr[i] = p[static_cast<std::size_t>(idx[i])];
      yr[i] = y[static_cast<std::size_t>(idx[i])];
    }
    try {
      const double value = metric(pr, yr);
      reps[r] = {value, !std::isnan(value)};
    } catch (const Error&) {
      reps[r] = {0.0, false};
    }
  });
  return reps;
}

BootstrapCi summarize(std::vector<double> survivors, int discarded) {
  if (survivors.empty()) throw Error("stationary_bootstrap: every replication was degenerate");
  BootstrapCi ci;
  std::vector<double> sorted = survivors;
  std::sort(sorted.begin(), sorted.end());
  // Symmetric percentile interval: the upper bound mirrors the lower one
  // through negation so both tails use the same order-statistic rule.
  ci.lo = empirical_quantile_sorted(sorted, 0.025);
  std::vector<double> negated(sorted.rbegin(), sorted.rend());
  for (double& v : negated) v = -v;
  ci.hi = -empirical_quantile_sorted(negated, 0.025);
  ci.replications = std::move(survivors);
  ci.discarded = discarded;
  return ci;
}

void check_replication_count(int replications, Diagnostics* diag) {
  if (replications < 1) throw ArgumentError("stationary_bootstrap: need at least one replication");
  if (replications < 100 && diag) {
    diag->warn("stationary_bootstrap: fewer than 100 replications gives unstable intervals");
  }
}

}  // namespace

BootstrapCi stationary_bootstrap(std::span<const double> p, std::span<const int> y,
                                 const MetricFn& metric, int horizon, int replications,
                                 std::uint64_t seed, int threads, Diagnostics* diag) {
  check_replication_count(replications, diag);
  const auto reps = run_replications(p, y, metric, horizon, replications, seed, threads);
  std::vector<double> survivors;
  int discarded = 0;
  for (const auto& rep : reps) {
    if (rep.defined) survivors.push_back(rep.value);
    else ++discarded;
  }
  if (discarded > 0 && diag) {
    diag->warn("stationary_bootstrap: discarded " + std::to_string(discarded) +
               " degenerate replication(s)");
  }
  return summarize(std::move(survivors), discarded);
}

PairedBootstrap stationary_bootstrap_paired(std::span<const double> p_proposed,
                                            std::span<const double> p_benchmark,
                                            std::span<const int> y, const MetricFn& metric,
                                            bool higher_is_better, int horizon, int replications,
                                            std::uint64_t seed, int threads, Diagnostics* diag) {
  check_replication_count(replications, diag);
  if (p_proposed.size() != p_benchmark.size()) {
    throw ArgumentError("stationary_bootstrap_paired: forecast length mismatch");
  }
  // Identical streams: replication r uses the same index sequence for both
  // models because the seed derivation matches.
  const auto reps_a =
      run_replications(p_proposed, y, metric, horizon, replications, seed, threads);
  const auto reps_b =
      run_replications(p_benchmark, y, metric, horizon, replications, seed, threads);

  PairedBootstrap out;
  std::vector<double> surv_a, surv_b;
  int wins_b = 0, usable = 0;
  for (int r = 0; r < replications; ++r) {
    const auto& a = reps_a[static_cast<std::size_t>(r)];
    const auto& b = reps_b[static_cast<std::size_t>(r)];
    if (!a.defined || !b.defined) {
      ++out.discarded;
      continue;
    }
    surv_a.push_back(a.value);
    surv_b.push_back(b.value);
    ++usable;
    const bool benchmark_beats = higher_is_better ? b.value > a.value : b.value < a.value;
    if (benchmark_beats) ++wins_b;
  }
  if (out.discarded > 0 && diag) {
    diag->warn("stationary_bootstrap_paired: discarded " + std::to_string(out.discarded) +
               " degenerate replication(s)");
  }
  if (usable == 0) throw Error("stationary_bootstrap_paired: every replication was degenerate");
  out.proposed = summarize(std::move(surv_a), out.discarded);
  out.benchmark = summarize(std::move(surv_b), out.discarded);
  out.benchmark_beat_share = static_cast<double>(wins_b) / static_cast<double>(usable);
  return out;
}

}  // namespace atrisk
