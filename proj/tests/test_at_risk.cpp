#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "atrisk/at_risk.hpp"
#include "atrisk/errors.hpp"
#include "atrisk/stats.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace atrisk;

namespace {

PanelMatrix random_panel(std::mt19937_64& rng, int rows, int cols, double recession_share = 0.25) {
  Eigen::MatrixXd values(rows, cols);
  for (int t = 0; t < rows; ++t) {
    for (int i = 0; i < cols; ++i) values(t, i) = testutil::randn(rng);
  }
  std::vector<int> y(static_cast<std::size_t>(rows), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& v : y) v = unit(rng) < recession_share ? 1 : 0;
  y[static_cast<std::size_t>(rows) / 2] = 1;  // guarantee a recession month
  PanelMatrix panel = testutil::make_panel(values, y);
  for (std::size_t i = 0; i < panel.meta.size(); ++i) {
    panel.meta[i].sign = (i % 3 == 1) ? -1 : +1;
  }
  return panel;
}

}  // namespace

TEST_CASE("moving_average") {
  SUBCASE("window of one is the identity") {
    const std::vector<double> x{2.0, -1.0, 5.0};
    CHECK(moving_average(x, 1) == x);
  }
  SUBCASE("pairwise means") {
    const auto out = moving_average({1.0, 2.0, 3.0, 4.0}, 2);
    CHECK(is_missing(out[0]));
    CHECK(out[1] == 1.5);
    CHECK(out[2] == 2.5);
    CHECK(out[3] == 3.5);
  }
  SUBCASE("random series matches the explicit-loop oracle to 1e-12") {
    std::mt19937_64 rng(5);
    std::vector<double> x(80);
    for (auto& v : x) v = testutil::randn(rng);
    const auto got = moving_average(x, 12);
    const auto want = oracle::moving_average(x, 12);
    for (std::size_t t = 11; t < x.size(); ++t) {
      CHECK(std::abs(got[t] - want[t]) < 1e-12);
    }
  }
  SUBCASE("window longer than the series is an error") {
    CHECK_THROWS_AS(moving_average({1.0, 2.0}, 3), ArgumentError);
  }
}

TEST_CASE("empirical_quantile uses the left-continuous inverse") {
  SUBCASE("deciles") {
    std::vector<double> sample;
    for (int v = 1; v <= 10; ++v) sample.push_back(v);
    CHECK(empirical_quantile(sample, 0.30) == 3.0);
    CHECK(empirical_quantile(sample, 0.30) == oracle::quantile_scan(sample, 0.30));
  }
  SUBCASE("degenerate distribution returns the common value") {
    CHECK(empirical_quantile(std::vector<double>{4.0, 4.0, 4.0}, 0.1) == 4.0);
    CHECK(empirical_quantile(std::vector<double>{4.0, 4.0, 4.0}, 0.9) == 4.0);
  }
  SUBCASE("tie and boundary convention") {
    CHECK(empirical_quantile(std::vector<double>{1.0, 2.0}, 0.5) == 1.0);
    CHECK(empirical_quantile(std::vector<double>{1.0, 2.0}, 0.5) == oracle::quantile_scan({1.0, 2.0}, 0.5));
  }
  SUBCASE("random samples agree with the sort-and-scan oracle") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> size(1, 60);
    const double taus[] = {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875};
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> sample(static_cast<std::size_t>(size(rng)));
      for (auto& v : sample) v = testutil::randn(rng);
      for (double tau : taus) {
        CHECK(empirical_quantile(sample, tau) == oracle::quantile_scan(sample, tau));
      }
    }
  }
  SUBCASE("empty sample and invalid tau are errors") {
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), ArgumentError);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{1.0}, 0.0), ArgumentError);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{1.0}, 1.0), ArgumentError);
  }
}

TEST_CASE("binarize marks extremes as at risk") {
  const int rows = 20;
  Eigen::MatrixXd values(rows, 2);
  for (int t = 0; t < rows; ++t) {
    values(t, 0) = std::sin(0.7 * t) + 0.01 * t;
    values(t, 1) = std::cos(0.9 * t) - 0.02 * t;
  }
  int argmin0 = 0, argmax1 = 0;
  for (int t = 0; t < rows; ++t) {
    if (values(t, 0) < values(argmin0, 0)) argmin0 = t;
    if (values(t, 1) > values(argmax1, 1)) argmax1 = t;
  }
  PanelMatrix panel = testutil::make_panel(values, std::vector<int>(rows, 0));
  panel.meta[0].sign = +1;
  panel.meta[1].sign = -1;

  AtRiskConfig config;
  config.tau = 0.25;
  config.threshold_policy = ThresholdPolicy::FrozenAtTrainEnd;
  const BinaryStateMatrix z = binarize(panel, config, panel.dates.back());
  CHECK(z.values(argmin0, 0) == 1.0);  // pro-cyclical minimum is at risk
  CHECK(z.values(argmax1, 1) == 1.0);  // counter-cyclical maximum is at risk
}

TEST_CASE("binarize matches the O(T^2 N) brute-force oracle under both policies") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> rows_dist(10, 60);
  std::uniform_int_distribution<int> cols_dist(1, 5);
  const double taus[] = {0.125, 0.25, 0.5, 0.75};
  for (int rep = 0; rep < 30; ++rep) {
    const int rows = rows_dist(rng);
    const int cols = cols_dist(rng);
    PanelMatrix panel = random_panel(rng, rows, cols);
    const int train_row = rows / 2;
    const double tau = taus[static_cast<std::size_t>(rep % 4)];

    for (ThresholdPolicy policy :
         {ThresholdPolicy::ExpandingHistory, ThresholdPolicy::FrozenAtTrainEnd}) {
      AtRiskConfig config;
      config.tau = tau;
      config.smoothing_window = 1 + rep % 3;
      config.threshold_policy = policy;
      if (config.smoothing_window - 1 > train_row) continue;

      const BinaryStateMatrix got =
          binarize(panel, config, panel.dates[static_cast<std::size_t>(train_row)]);
      const auto want = oracle::binarize(panel.values, testutil::signs_of(panel),
                                         std::vector<double>(static_cast<std::size_t>(cols), tau),
                                         config.smoothing_window, train_row,
                                         policy == ThresholdPolicy::ExpandingHistory);
      REQUIRE(got.values.rows() == want.z.rows());
      CHECK((got.values - want.z).cwiseAbs().maxCoeff() == 0.0);
      CHECK((got.thresholds - want.thresholds).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("binarize monotonicity in tau") {
  std::mt19937_64 rng(29);
  PanelMatrix panel = random_panel(rng, 40, 3);
  AtRiskConfig lo_cfg, hi_cfg;
  lo_cfg.tau = 0.25;
  hi_cfg.tau = 0.625;
  const auto lo = binarize(panel, lo_cfg, panel.dates[20]);
  const auto hi = binarize(panel, hi_cfg, panel.dates[20]);
  CHECK(((hi.values - lo.values).array() >= 0.0).all());
}

TEST_CASE("binarize is invariant to strictly increasing transforms when h_g = 1") {
  std::mt19937_64 rng(31);
  PanelMatrix panel = random_panel(rng, 50, 2);
  AtRiskConfig config;
  config.tau = 0.375;
  const auto base = binarize(panel, config, panel.dates[30]);

  PanelMatrix transformed = panel;
  for (int t = 0; t < transformed.values.rows(); ++t) {
    for (int i = 0; i < transformed.values.cols(); ++i) {
      const double v = transformed.values(t, i);
      transformed.values(t, i) = v * v * v + 2.0 * v;  // strictly increasing
    }
  }
  const auto mapped = binarize(transformed, config, panel.dates[30]);
  CHECK((base.values - mapped.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binarize look-ahead freedom") {
  std::mt19937_64 rng(37);
  PanelMatrix panel = random_panel(rng, 40, 2);
  AtRiskConfig config;
  config.tau = 0.25;

  SUBCASE("expanding: rows after t never change z_it") {
    const auto base = binarize(panel, config, panel.dates[25]);
    PanelMatrix poked = panel;
    const int cut = 30;
    for (int t = cut + 1; t < poked.values.rows(); ++t) {
      for (int i = 0; i < poked.values.cols(); ++i) {
        poked.values(t, i) += 100.0 * testutil::randn(rng);
      }
    }
    const auto poked_z = binarize(poked, config, panel.dates[25]);
    for (int t = 0; t <= cut; ++t) {
      for (int i = 0; i < base.values.cols(); ++i) {
        CHECK(base.values(t, i) == poked_z.values(t, i));
      }
    }
  }

  SUBCASE("frozen: rows after train_end never change any threshold") {
    config.threshold_policy = ThresholdPolicy::FrozenAtTrainEnd;
    const int train_row = 25;
    const auto base = binarize(panel, config, panel.dates[static_cast<std::size_t>(train_row)]);
    PanelMatrix poked = panel;
    for (int t = train_row + 1; t < poked.values.rows(); ++t) {
      for (int i = 0; i < poked.values.cols(); ++i) {
        poked.values(t, i) += 50.0 * testutil::randn(rng);
      }
    }
    const auto poked_z = binarize(poked, config, panel.dates[static_cast<std::size_t>(train_row)]);
    CHECK((base.thresholds - poked_z.thresholds).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("binarize sign symmetry: negating a series and flipping its sign is a no-op") {
  std::mt19937_64 rng(41);
  PanelMatrix panel = random_panel(rng, 45, 3);
  AtRiskConfig config;
  config.tau = 0.25;
  const auto base = binarize(panel, config, panel.dates[30]);

  PanelMatrix flipped = panel;
  flipped.values.col(1) = -flipped.values.col(1);
  flipped.meta[1].sign = -flipped.meta[1].sign;
  const auto mirrored = binarize(flipped, config, panel.dates[30]);
  CHECK((base.values - mirrored.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binarize error paths") {
  std::mt19937_64 rng(43);
  PanelMatrix panel = random_panel(rng, 20, 2);
  AtRiskConfig config;  // tau unset = auto
  CHECK_THROWS_AS(binarize(panel, config, panel.dates[10]), StateError);

  config.tau = 0.25;
  config.smoothing_window = 0;
  CHECK_THROWS_AS(binarize(panel, config, panel.dates[10]), ArgumentError);
}

TEST_CASE("select_tau implements the three-step selection") {
  SUBCASE("a series tracking -y is low in every recession, so tau is small") {
    const int rows = 36;
    Eigen::MatrixXd values(rows, 1);
    std::vector<int> y(static_cast<std::size_t>(rows), 0);
    for (int t = 0; t < rows; ++t) {
      y[static_cast<std::size_t>(t)] = (t % 9) < 2 ? 1 : 0;
      values(t, 0) = -static_cast<double>(y[static_cast<std::size_t>(t)]) + 0.01 * t;
    }
    PanelMatrix panel = testutil::make_panel(values, y);
    const TauSelection sel = select_tau(panel, 1, panel.dates.back(), TauScope::Global);
    const double recessions =
        static_cast<double>(std::count(y.begin(), y.end(), 1)) / static_cast<double>(rows);
    CHECK(sel.global <= recessions + 1e-12);
  }

  SUBCASE("handcrafted panels match the literal nested-loop oracle exactly") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 20; ++rep) {
      const int rows = 36;
      const int cols = 3;
      PanelMatrix panel = random_panel(rng, rows, cols);
      // Planted recessions: two episodes.
      std::fill(panel.target.begin(), panel.target.end(), 0);
      for (int t = 8; t < 12; ++t) panel.target[static_cast<std::size_t>(t)] = 1;
      for (int t = 22; t < 25; ++t) panel.target[static_cast<std::size_t>(t)] = 1;
      const int window = 1 + rep % 3;
      const int train_row = rows - 1;

      const auto want = oracle::select_tau(panel.values, testutil::signs_of(panel), panel.target,
                                           window, train_row);
      const TauSelection global = select_tau(panel, window, panel.dates.back(), TauScope::Global);
      CHECK(global.global == want.global);
      for (std::size_t i = 0; i < static_cast<std::size_t>(cols); ++i) {
        CHECK(global.tau_star[i] == want.tau_star[i]);
      }

      const TauSelection per_var =
          select_tau(panel, window, panel.dates.back(), TauScope::PerVariable);
      for (std::size_t i = 0; i < static_cast<std::size_t>(cols); ++i) {
        CHECK(per_var.per_series[i] == want.tau_star[i]);  // step 2, unreduced
      }
    }
  }

  SUBCASE("per-sector scope takes medians within sectors") {
    std::mt19937_64 rng(53);
    PanelMatrix panel = random_panel(rng, 30, 4);
    panel.meta[0].sector = Sector::LaborMarket;
    panel.meta[1].sector = Sector::LaborMarket;
    panel.meta[2].sector = Sector::Housing;
    panel.meta[3].sector = Sector::Housing;
    const TauSelection sel = select_tau(panel, 1, panel.dates.back(), TauScope::PerSector);
    // Lower-middle median of two values is the smaller one.
    CHECK(sel.per_sector.at(Sector::LaborMarket) == std::min(sel.tau_star[0], sel.tau_star[1]));
    CHECK(sel.per_sector.at(Sector::Housing) == std::min(sel.tau_star[2], sel.tau_star[3]));
    CHECK(sel.per_series[0] == sel.per_sector.at(Sector::LaborMarket));
    CHECK(sel.per_series[3] == sel.per_sector.at(Sector::Housing));
  }

  SUBCASE("global selection lies within the per-series range") {
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 10; ++rep) {
      PanelMatrix panel = random_panel(rng, 40, 5);
      const TauSelection sel = select_tau(panel, 1, panel.dates.back(), TauScope::Global);
      const auto [lo, hi] = std::minmax_element(sel.tau_star.begin(), sel.tau_star.end());
      CHECK(sel.global >= *lo);
      CHECK(sel.global <= *hi);
    }
  }

  SUBCASE("no recession months in the training window is an error") {
    std::mt19937_64 rng(61);
    PanelMatrix panel = random_panel(rng, 20, 2);
    std::fill(panel.target.begin(), panel.target.end(), 0);
    CHECK_THROWS_AS(select_tau(panel, 1, panel.dates.back(), TauScope::Global), ArgumentError);
  }
}

TEST_CASE("binarize with selected per-variable taus matches the piecewise application") {
  std::mt19937_64 rng(67);
  PanelMatrix panel = random_panel(rng, 40, 3);
  const TauSelection sel = select_tau(panel, 1, panel.dates[30], TauScope::PerVariable);
  AtRiskConfig config;  // tau auto
  const BinaryStateMatrix z = binarize(panel, config, panel.dates[30], &sel.per_series);
  CHECK(z.tau_used == sel.per_series);

  const auto want =
      oracle::binarize(panel.values, testutil::signs_of(panel), sel.per_series, 1, 30, true);
  CHECK((z.values - want.z).cwiseAbs().maxCoeff() == 0.0);
}
