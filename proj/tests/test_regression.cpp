#include "btcmc/error.hpp"
#include "btcmc/regression.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace btcmc;

namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

struct Dataset {
    std::vector<double> x, y;
};

Dataset random_dataset(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> un(3, 50);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::normal_distribution<double> z;
    const int n = un(rng);
    const double a = u(rng), b = u(rng), sd = std::abs(u(rng)) + 0.1;
    Dataset d;
    for (int i = 0; i < n; ++i) {
        d.x.push_back(u(rng));
        d.y.push_back(a + b * d.x.back() + sd * z(rng));
    }
    return d;
}

} // namespace

TEST(Ols, ExactLine) {
    const auto r = ols_fit(v({1, 2, 3}), v({2, 4, 6}));
    EXPECT_NEAR(r.slope, 2.0, 1e-14);
    EXPECT_NEAR(r.intercept, 0.0, 1e-14);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-14);
    EXPECT_EQ(r.n, 3u);
}

TEST(Ols, HandNormalEquations) {
    // Sxx = 5, Sxy = 7 -> slope 1.4, intercept 4 - 1.4 * 2.5 = 0.5;
    // SSE = 0.2, SST = 10 -> R^2 = 0.98.
    const auto r = ols_fit(v({1, 2, 3, 4}), v({2, 3, 5, 6}));
    EXPECT_NEAR(r.slope, 1.4, 1e-14);
    EXPECT_NEAR(r.intercept, 0.5, 1e-14);
    EXPECT_NEAR(r.r_squared, 0.98, 1e-14);
    // s^2 = 0.2 / 2; se(slope) = sqrt(0.1 / 5)
    EXPECT_NEAR(r.slope_se, std::sqrt(0.1 / 5.0), 1e-14);
    EXPECT_NEAR(r.intercept_se, std::sqrt(0.1 * (1.0 / 4.0 + 2.5 * 2.5 / 5.0)), 1e-14);
}

TEST(Ols, ConstantResponseIsDegenerate) {
    const auto r = ols_fit(v({1, 2, 3, 4}), v({5, 5, 5, 5}));
    EXPECT_NEAR(r.slope, 0.0, 1e-13);
    EXPECT_NEAR(r.intercept, 5.0, 1e-13);
    EXPECT_EQ(r.r_squared, 0.0);
    EXPECT_TRUE(r.degenerate);
}

TEST(Ols, Errors) {
    try {
        ols_fit(v({2, 2, 2}), v({1, 2, 3}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::singular);
    }
    try {
        ols_fit(v({1, 2}), v({1, 2}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::insufficient_data);
    }
    EXPECT_THROW(ols_fit(v({1, 2, 3}), v({1, 2})), Error);
}

TEST(OlsProperty, AgreesWithBruteForceNormalEquations) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto d = random_dataset(rng);
        const auto r = ols_fit(d.x, d.y);
        const auto b = testutil::brute_force_ols(d.x, d.y);
        ASSERT_LE(testutil::relative_error(r.slope, double(b.slope)), 1e-10) << i;
        ASSERT_LE(testutil::relative_error(r.intercept, double(b.intercept)), 1e-10) << i;
        ASSERT_LE(testutil::relative_error(r.r_squared, double(b.r_squared)), 1e-10) << i;
    }
}

TEST(OlsProperty, ResidualsOrthogonalAndRSquaredIsCorrelationSquared) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const auto d = random_dataset(rng);
        const auto r = ols_fit(d.x, d.y);
        double ex = 0, ee = 0, xx = 0, esum = 0, yabs = 0;
        for (std::size_t k = 0; k < d.x.size(); ++k) {
            ex += r.residuals[k] * d.x[k];
            ee += r.residuals[k] * r.residuals[k];
            xx += d.x[k] * d.x[k];
            esum += r.residuals[k];
            yabs += std::abs(d.y[k]);
        }
        ASSERT_LE(std::abs(ex), 1e-8 * std::sqrt(ee) * std::sqrt(xx) + 1e-300);
        ASSERT_LE(std::abs(esum), 1e-8 * yabs);
        const double rho = pearson(d.x, d.y);
        ASSERT_NEAR(r.r_squared, rho * rho, 1e-10);
        ASSERT_GE(r.r_squared, 0.0);
        ASSERT_LE(r.r_squared, 1.0);
    }
}

TEST(LogTransform, Basics) {
    const auto out = log_transform(v({1.0, std::exp(1.0), std::exp(2.0)}));
    EXPECT_NEAR(out[0], 0.0, 1e-15);
    EXPECT_NEAR(out[1], 1.0, 1e-15);
    EXPECT_NEAR(out[2], 2.0, 1e-15);
    const auto a = log_transform(v({2.0, 3.0, 7.0}));
    const auto b = log_transform(v({2.0 * 5.0, 3.0 * 5.0, 7.0 * 5.0}));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i] - a[i], std::log(5.0), 1e-14);
    try {
        log_transform(v({1.0, 0.0, 2.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::domain);
        EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
    }
}

TEST(LogRegressionProperty, ScalingResponseShiftsInterceptOnly) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    std::lognormal_distribution<double> noise(0.0, 0.2);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> x(40), y(40);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = u(rng);
            y[k] = 3.0 * x[k] * noise(rng);
        }
        const double c = u(rng) / 10.0;
        std::vector<double> yc(y);
        for (double& val : yc) val *= c;
        const auto lx = log_transform(x);
        const auto r1 = ols_fit(lx, log_transform(y));
        const auto r2 = ols_fit(lx, log_transform(yc));
        ASSERT_NEAR(r2.slope, r1.slope, 1e-10);
        ASSERT_NEAR(r2.r_squared, r1.r_squared, 1e-10);
        ASSERT_NEAR(r2.intercept - r1.intercept, std::log(c), 1e-10);
    }
}

TEST(LeastSquares, MultipleRegressionRecoversCoefficients) {
    linalg::Matrix x(6, 3);
    std::vector<double> y(6);
    for (std::size_t r = 0; r < 6; ++r) {
        x(r, 0) = 1.0;
        x(r, 1) = double(r);
        x(r, 2) = double(r * r % 5);
        y[r] = 1.5 - 2.0 * x(r, 1) + 0.25 * x(r, 2);
    }
    const auto fit = least_squares(x, y);
    EXPECT_NEAR(fit.coefficients[0], 1.5, 1e-12);
    EXPECT_NEAR(fit.coefficients[1], -2.0, 1e-12);
    EXPECT_NEAR(fit.coefficients[2], 0.25, 1e-12);
    EXPECT_NEAR(fit.sse, 0.0, 1e-20);
}
