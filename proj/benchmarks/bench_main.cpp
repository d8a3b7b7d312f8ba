#include <benchmark/benchmark.h>

#include <random>

#include "atrisk/at_risk.hpp"
#include "atrisk/bootstrap.hpp"
#include "atrisk/gbt.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/metrics.hpp"
#include "atrisk/panel.hpp"

namespace {

using namespace atrisk;

PanelMatrix make_panel(int rows, int cols) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  PanelMatrix panel;
  panel.values.resize(rows, cols);
  for (int t = 0; t < rows; ++t) {
    panel.dates.push_back(Month(1960, 1) + t);
    for (int i = 0; i < cols; ++i) panel.values(t, i) = normal(rng);
  }
  panel.target.assign(static_cast<std::size_t>(rows), 0);
  for (int t = 0; t < rows; t += 9) panel.target[static_cast<std::size_t>(t)] = 1;
  for (int i = 0; i < cols; ++i) {
    SeriesMeta meta;
    meta.id = "S" + std::to_string(i);
    panel.meta.push_back(meta);
  }
  return panel;
}

void BM_Binarize(benchmark::State& state) {
  const PanelMatrix panel = make_panel(static_cast<int>(state.range(0)), 122);
  AtRiskConfig config;
  config.tau = 0.25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(binarize(panel, config, panel.dates.back()));
  }
}
BENCHMARK(BM_Binarize)->Arg(360)->Arg(780);

void BM_SelectTau(benchmark::State& state) {
  const PanelMatrix panel = make_panel(360, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_tau(panel, 1, panel.dates.back(), TauScope::Global));
  }
}
BENCHMARK(BM_SelectTau)->Arg(32)->Arg(122);

void BM_FitLogistic(benchmark::State& state) {
  const int rows = 360;
  const int cols = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(rows, cols);
  std::vector<int> y;
  for (int t = 0; t < rows; ++t) {
    for (int j = 0; j < cols; ++j) x(t, j) = normal(rng);
    y.push_back(t % 7 == 0 ? 1 : 0);
  }
  LogisticFitOptions options;
  options.c = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_logistic(x, y, options));
  }
}
BENCHMARK(BM_FitLogistic)->Arg(32)->Arg(128)->Arg(488);

void BM_FitGbt(benchmark::State& state) {
  const int rows = 360;
  const int cols = static_cast<int>(state.range(0));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(rows, cols);
  std::vector<int> y;
  for (int t = 0; t < rows; ++t) {
    for (int j = 0; j < cols; ++j) x(t, j) = normal(rng);
    y.push_back(t % 7 == 0 ? 1 : 0);
  }
  GbtParams params;
  params.rounds = 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_gbt(x, y, params));
  }
}
BENCHMARK(BM_FitGbt)->Arg(32)->Arg(128);

void BM_PrAuc(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p;
  std::vector<int> y;
  for (int i = 0; i < n; ++i) {
    p.push_back(unit(rng));
    y.push_back(unit(rng) < 0.1 ? 1 : 0);
  }
  y[0] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pr_auc(p, y));
  }
}
BENCHMARK(BM_PrAuc)->Arg(420)->Arg(4200);

void BM_Bootstrap(benchmark::State& state) {
  const int n = 420;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p;
  std::vector<int> y;
  for (int i = 0; i < n; ++i) {
    p.push_back(unit(rng));
    y.push_back(unit(rng) < 0.1 ? 1 : 0);
  }
  y[0] = 1;
  const MetricFn metric = [](auto pp, auto yy) { return brier(pp, yy); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        stationary_bootstrap(p, y, metric, 3, static_cast<int>(state.range(0)), 42, 1));
  }
}
BENCHMARK(BM_Bootstrap)->Arg(200)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
