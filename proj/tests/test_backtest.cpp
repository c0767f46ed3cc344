#include "btcmc/backtest.hpp"
#include "btcmc/error.hpp"
#include "btcmc/parallel.hpp"
#include "btcmc/pricing.hpp"
#include "btcmc/stats.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

using namespace btcmc;

namespace {

RatioStats stats_of(const std::vector<double>& ratios) {
    PairedSeries s;
    Date d = Date::parse("2016-01-01");
    for (double r : ratios) {
        s.dates.push_back(d);
        s.market_prices.push_back(r * 100.0);
        s.model_prices.push_back(100.0);
        d = Date(d.days() + std::chrono::days(14));
    }
    return ratio_series(s);
}

// Market = model * exp(eps) with randomly rising difficulty.
std::vector<ObservationRecord> synthetic_records(std::size_t n, double noise_sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, noise_sd);
    std::normal_distribution<double> growth(0.06, 0.04);
    const auto schedule = RewardSchedule::mainnet();
    std::vector<ObservationRecord> out;
    Date d = Date::parse("2017-01-01");
    double difficulty = 3e11;
    for (std::size_t i = 0; i < n; ++i) {
        const double eff = 0.2;
        const double model = pricing::model_price(pricing::CostParams(0.135, eff),
                                                  pricing::NetworkParams(difficulty, reward_at(d, schedule)));
        out.push_back({d, difficulty, model * std::exp(eps(rng)), eff});
        d = Date(d.days() + std::chrono::days(14));
        difficulty *= std::exp(growth(rng));
    }
    return out;
}

} // namespace

TEST(Ratio, SummaryStatistics) {
    const auto s = stats_of({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.stddev, std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_EQ(s.min, 1.0);
    EXPECT_EQ(s.max, 4.0);
    PairedSeries bad;
    bad.dates = {Date::parse("2016-01-01")};
    bad.market_prices = {1.0};
    bad.model_prices = {0.0};
    EXPECT_THROW(ratio_series(bad), Error);
    EXPECT_THROW(ratio_series(PairedSeries{}), Error);
}

TEST(Episodes, ConstantSeriesIsDegenerate) {
    const auto e = detect_episodes(stats_of(std::vector<double>(20, 1.3)));
    EXPECT_TRUE(e.degenerate);
    EXPECT_TRUE(e.episodes.empty());
}

TEST(Episodes, FiveHighPointsFormOneEpisode) {
    // 25 ones and 5 threes: mean 4/3, sample sd sqrt((50/3)/29) ~ 0.758,
    // threshold ~ 2.85 < 3.
    std::vector<double> r(30, 1.0);
    for (std::size_t i = 12; i < 17; ++i) r[i] = 3.0;
    const auto s = stats_of(r);
    EXPECT_NEAR(s.mean, 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.stddev, std::sqrt((50.0 / 3.0) / 29.0), 1e-15);
    const auto e = detect_episodes(s);
    EXPECT_NEAR(e.threshold, 4.0 / 3.0 + 2.0 * std::sqrt((50.0 / 3.0) / 29.0), 1e-14);
    ASSERT_EQ(e.episodes.size(), 1u);
    const auto& ep = e.episodes[0];
    EXPECT_EQ(ep.start_index, 12u);
    EXPECT_EQ(ep.end_index, 16u);
    EXPECT_EQ(ep.start, s.dates[12]);
    EXPECT_EQ(ep.end, s.dates[16]);
    EXPECT_EQ(ep.peak_ratio, 3.0);
    EXPECT_LE(ep.start, ep.peak_date);
    EXPECT_LE(ep.peak_date, ep.end);
}

TEST(Episodes, IsolatedSpikeIsIgnored) {
    std::vector<double> r(30, 1.0);
    r[10] = 10.0;
    EXPECT_TRUE(detect_episodes(stats_of(r), 2.0, 2).episodes.empty());
    EXPECT_EQ(detect_episodes(stats_of(r), 2.0, 1).episodes.size(), 1u);
}

TEST(Episodes, TwoSeparateRuns) {
    std::vector<double> r(60, 1.0);
    r[5] = r[6] = 5.0;
    r[40] = r[41] = r[42] = 6.0;
    r[41] = 7.0;
    const auto e = detect_episodes(stats_of(r));
    ASSERT_EQ(e.episodes.size(), 2u);
    EXPECT_EQ(e.episodes[1].peak_ratio, 7.0);
    EXPECT_EQ(e.episodes[1].peak_date, stats_of(r).dates[41]);
}

TEST(Episodes, RejectsBadParameters) {
    const auto s = stats_of({1, 2, 3});
    EXPECT_THROW(detect_episodes(s, 0.0, 2), Error);
    EXPECT_THROW(detect_episodes(s, 2.0, 0), Error);
}

TEST(EpisodesProperty, InvariantToCommonRescaling) {
    std::mt19937_64 rng(8);
    std::lognormal_distribution<double> ln(0.0, 0.5);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int trial = 0; trial < 50; ++trial) {
        PairedSeries base;
        Date d = Date::parse("2015-01-01");
        for (int i = 0; i < 80; ++i) {
            base.dates.push_back(d);
            base.model_prices.push_back(100.0 * ln(rng));
            base.market_prices.push_back(base.model_prices.back() * ln(rng) * (i >= 50 && i < 55 ? 6.0 : 1.0));
            d = Date(d.days() + std::chrono::days(14));
        }
        // Power-of-two factors keep the ratios bit-identical.
        const double c = std::exp2(std::round(u(rng)));
        PairedSeries scaled = base;
        for (auto& v : scaled.model_prices) v *= c;
        for (auto& v : scaled.market_prices) v *= c;
        const auto e0 = detect_episodes(ratio_series(base));
        const auto e1 = detect_episodes(ratio_series(scaled));
        ASSERT_EQ(e0.episodes.size(), e1.episodes.size());
        for (std::size_t k = 0; k < e0.episodes.size(); ++k) {
            EXPECT_EQ(e0.episodes[k].start, e1.episodes[k].start);
            EXPECT_EQ(e0.episodes[k].end, e1.episodes[k].end);
        }
        // Arbitrary factors move ratios by at most an ulp or two.
        const double g = std::pow(10.0, u(rng));
        PairedSeries approx = base;
        for (auto& v : approx.model_prices) v *= g;
        for (auto& v : approx.market_prices) v *= g;
        EXPECT_EQ(detect_episodes(ratio_series(approx)).episodes.size(), e0.episodes.size());
    }
}

TEST(RunBacktest, SyntheticProportionalMarket) {
    const auto recs = synthetic_records(40, 0.02, 42);
    const auto rep = run_backtest(recs, RewardSchedule::mainnet(), EfficiencyTable({}), BacktestConfig{});
    EXPECT_EQ(rep.series.size(), 40u);
    EXPECT_GT(rep.log_fit.r_squared, 0.99);
    EXPECT_NEAR(rep.log_fit.slope, 1.0, 0.05);
    EXPECT_NEAR(rep.ratio.mean, 1.0, 0.02);
    EXPECT_TRUE(rep.episodes.episodes.empty());
    EXPECT_EQ(rep.var.lag_order, 2);
    EXPECT_FALSE(rep.lags_from_selection);
    EXPECT_EQ(rep.market_to_model.df, 2);
    EXPECT_EQ(rep.market_to_model.cause, "market");
    EXPECT_EQ(rep.market_to_model.effect, "model");
    EXPECT_EQ(rep.model_to_market.cause, "model");
    EXPECT_EQ(rep.provenance.version, kVersion);
}

TEST(RunBacktest, AutoLagsUsesSelection) {
    const auto recs = synthetic_records(60, 0.05, 43);
    BacktestConfig cfg;
    cfg.lags = std::nullopt;
    cfg.max_lags = 3;
    const auto rep = run_backtest(recs, RewardSchedule::mainnet(), EfficiencyTable({}), cfg);
    EXPECT_TRUE(rep.lags_from_selection);
    EXPECT_EQ(rep.var.lag_order, rep.lag_selection.chosen);
    EXPECT_EQ(rep.lag_selection.table.size(), 3u);
}

TEST(RunBacktest, ReportedPValuesMatchChiSquareExactly) {
    const auto recs = synthetic_records(40, 0.05, 44);
    const auto rep = run_backtest(recs, RewardSchedule::mainnet(), EfficiencyTable({}), BacktestConfig{});
    for (const auto* g : {&rep.market_to_model, &rep.model_to_market}) {
        EXPECT_EQ(g->p_value, stats::chi2_sf(g->chi2, g->df));
    }
}

TEST(RunBacktest, TooShortForLagSelection) {
    const auto recs = synthetic_records(20, 0.05, 45);
    try {
        run_backtest(recs, RewardSchedule::mainnet(), EfficiencyTable({}), BacktestConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::insufficient_data);
    }
}

TEST(RunBacktest, GrangerDetectsCausalityAtDatasetLength) {
    // Model prices lead market prices by one epoch; n = 120.
    int detected = 0;
    const int reps = 100;
    const auto hits = parallel::rejection_rate(reps, 77, [](std::mt19937_64& rng) {
        const auto [m, mk] =
            testutil::simulate_var({{{{0.5, 0.0}, {0.5, 0.3}}}}, {0.0, 0.0}, 120, 0.1, rng);
        // Equation 1 explains m (cause), equation 2 mk (effect).
        const auto var = var_fit(mk, m, 2, {"market", "model"});
        return granger_wald(var, 1, 0).p_value < 0.05;
    });
    detected = static_cast<int>(hits.rejections);
    EXPECT_GE(detected, 95);
}

TEST(RunBacktest, BundledDataset) {
    std::ifstream obs(std::string(BTCMC_DATA_DIR) + "/observations.csv");
    std::ifstream eff(std::string(BTCMC_DATA_DIR) + "/efficiency.csv");
    std::ifstream rew(std::string(BTCMC_DATA_DIR) + "/rewards.csv");
    const auto recs = parse_observations(obs);
    const auto rep = run_backtest(recs, parse_rewards(rew), parse_efficiency(eff), BacktestConfig{});
    EXPECT_GE(rep.ratio.mean, 0.8);
    EXPECT_LE(rep.ratio.mean, 1.3);
    EXPECT_GT(rep.log_fit.r_squared, 0.9);
    EXPECT_EQ(rep.market_to_model.df, 2);
}
