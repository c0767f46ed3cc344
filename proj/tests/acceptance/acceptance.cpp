// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "btcmc/backtest.hpp"
#include "btcmc/error.hpp"
#include "btcmc/parallel.hpp"
#include "btcmc/pricing.hpp"
#include "btcmc/regression.hpp"
#include "btcmc/report.hpp"
#include "btcmc/stats.hpp"
#include "btcmc/var.hpp"
#include "test_support.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sys/wait.h>

namespace {

using namespace btcmc;
namespace fs = std::filesystem;

struct Outcome {
    bool pass;
    std::string detail;
};

// Exact rational value of the worked example, from the pricing oracle script.
constexpr double kExamplePrice = 3221.225472;

Outcome pricing_identities() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const pricing::CostParams c(0.01 + 0.5 * u(rng), std::pow(10.0, -3.0 + 4.0 * u(rng)));
        const pricing::NetworkParams n(std::pow(10.0, 3.0 + 12.0 * u(rng)), 50.0 / std::exp2(std::floor(4 * u(rng))));
        const double closed = pricing::model_price(c, n);
        for (int k = 0; k < 5; ++k) {
            const double h = std::pow(10.0, 9.0 * u(rng));
            worst = std::max(worst, testutil::relative_error(pricing::model_price_at_hashrate(h, c, n), closed));
        }
        worst = std::max(worst, testutil::relative_error(pricing::model_price_at_hashrate(1.0, c, n), closed));
        worst = std::max(worst, testutil::relative_error(pricing::model_price_at_hashrate(1e9, c, n), closed));
    }
    const double example = pricing::model_price(pricing::CostParams(0.135, 0.25), pricing::NetworkParams(1e12, 12.5));
    const double example_err = testutil::relative_error(example, kExamplePrice);
    return {worst <= 1e-12 && example_err <= 1e-9,
            fmt::format("max hashrate deviation {:.2e}; example {:.6f} (rel err {:.2e})", worst, example, example_err)};
}

Outcome table_tail_probabilities() {
    const double p1 = stats::chi2_sf(4.579, 2);
    const double p2 = stats::chi2_sf(13.301, 2);
    const auto d1 = report::format_fixed(p1, 3);
    const auto d2 = report::format_fixed(p2, 3);
    const bool ok = std::abs(p1 - 0.1013) <= 0.0005 && std::abs(p2 - 0.00129) <= 0.0001 && d1 == "0.101" && d2 == "0.001";
    return {ok, fmt::format("chi2_sf(4.579,2)={:.6f} -> {}; chi2_sf(13.301,2)={:.6f} -> {}", p1, d1, p2, d2)};
}

Outcome ols_oracle() {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> un(3, 50);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    std::normal_distribution<double> z;
    double worst = 0.0;
    for (int d = 0; d < 100; ++d) {
        const int n = un(rng);
        const double a = u(rng), b = u(rng) / 10.0, sd = std::abs(u(rng)) / 10.0 + 0.1;
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = u(rng);
            y[i] = a + b * x[i] + sd * z(rng);
        }
        const auto fit = ols_fit(x, y);
        const auto ref = testutil::brute_force_ols(x, y);
        worst = std::max({worst, testutil::relative_error(fit.slope, double(ref.slope)),
                          testutil::relative_error(fit.intercept, double(ref.intercept)),
                          testutil::relative_error(fit.r_squared, double(ref.r_squared))});
    }
    return {worst <= 1e-10, fmt::format("max relative deviation over 100 datasets {:.2e}", worst)};
}

Outcome var_recovery() {
    // Noiseless: two undamped oscillators mixed by M give a VAR(2) whose
    // path never settles, so every lag regressor keeps full rank.
    const double w1 = 0.7, w2 = 1.9;
    const double m[2][2] = {{1.0, 0.5}, {-0.3, 1.0}};
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double mi[2][2] = {{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}};
    const double d1[2] = {2 * std::cos(w1), 2 * std::cos(w2)};
    double a1[2][2], a2[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            a1[i][j] = m[i][0] * d1[0] * mi[0][j] + m[i][1] * d1[1] * mi[1][j];
            a2[i][j] = -(i == j ? 1.0 : 0.0);
        }
    const double c[2] = {0.4, -0.2};
    const std::size_t n = 200;
    std::vector<double> y0(n), y1(n);
    y0[0] = 1.0, y1[0] = 0.0, y0[1] = 0.3, y1[1] = 0.8;
    for (std::size_t t = 2; t < n; ++t) {
        y0[t] = c[0] + a1[0][0] * y0[t - 1] + a1[0][1] * y1[t - 1] + a2[0][0] * y0[t - 2] + a2[0][1] * y1[t - 2];
        y1[t] = c[1] + a1[1][0] * y0[t - 1] + a1[1][1] * y1[t - 1] + a2[1][0] * y0[t - 2] + a2[1][1] * y1[t - 2];
    }
    const auto exact = var_fit(y0, y1, 2);
    double worst_exact = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        worst_exact = std::max(worst_exact, std::abs(exact.intercepts[i] - c[i]));
        for (std::size_t j = 0; j < 2; ++j) {
            worst_exact = std::max(worst_exact, std::abs(exact.lag_matrices[0](i, j) - a1[i][j]));
            worst_exact = std::max(worst_exact, std::abs(exact.lag_matrices[1](i, j) - a2[i][j]));
        }
    }

    // Noisy: n = 5000, fixed seed, each estimate within 3 standard errors.
    const std::vector<std::array<std::array<double, 2>, 2>> truth = {{{{0.5, 0.1}, {0.2, 0.3}}},
                                                                     {{{-0.2, 0.05}, {0.1, 0.1}}}};
    std::mt19937_64 rng(303);
    const auto [z0, z1] = testutil::simulate_var(truth, {0.3, -0.1}, 5000, 1.0, rng);
    const auto noisy = var_fit(z0, z1, 2);
    double worst_z = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (int l = 1; l <= 2; ++l)
            for (std::size_t j = 0; j < 2; ++j) {
                const auto k = VarModel::coefficient_index(j, l);
                const double se = std::sqrt(noisy.coefficient_covariance[i](k, k));
                worst_z = std::max(worst_z, std::abs(noisy.lag_matrices[l - 1](i, j) - truth[l - 1][i][j]) / se);
            }
    return {worst_exact <= 1e-8 && worst_z <= 3.0,
            fmt::format("noiseless max abs error {:.2e}; noisy max |z| {:.2f}", worst_exact, worst_z)};
}

Outcome granger_size_and_power() {
    const auto size = parallel::rejection_rate(1000, 404, [](std::mt19937_64& rng) {
        const auto [x, y] = testutil::simulate_var({{{{0.5, 0.0}, {0.0, 0.5}}}}, {0.0, 0.0}, 200, 1.0, rng);
        return granger_wald(var_fit(x, y, 2), 1, 0).p_value < 0.05;
    });
    // x_t = 0.5 y_{t-1} + e_t
    const auto power = parallel::rejection_rate(200, 405, [](std::mt19937_64& rng) {
        const auto [x, y] = testutil::simulate_var({{{{0.0, 0.5}, {0.0, 0.5}}}}, {0.0, 0.0}, 200, 1.0, rng);
        return granger_wald(var_fit(x, y, 2), 1, 0).p_value < 0.05;
    });
    return {size.rate() >= 0.03 && size.rate() <= 0.07 && power.rate() >= 0.95,
            fmt::format("size {:.3f} over {} reps; power {:.3f} over {} reps", size.rate(), size.replications,
                        power.rate(), power.replications)};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + BTCMC_CLI_PATH + "' " + args + " > /dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string backtest_args(const fs::path& out) {
    const std::string data = BTCMC_DATA_DIR;
    return "backtest --observations " + data + "/observations.csv --efficiency-table " + data +
           "/efficiency.csv --rewards " + data + "/rewards.csv --no-provenance-timestamps --out-dir '" +
           out.string() + "'";
}

Outcome end_to_end() {
    const auto dir = testutil::temp_dir("acceptance_e2e");
    if (const int rc = run_cli(backtest_args(dir)); rc != 0) return {false, fmt::format("backtest exited {}", rc)};
    const auto doc = nlohmann::json::parse(testutil::read_file(dir / "report.json"));
    const double mean = doc["ratio"]["mean"];
    const double r2 = doc["log_regression"]["r_squared"];
    bool overlap = false;
    std::string episodes;
    for (const auto& e : doc["episodes"]["list"]) {
        const std::string s = e["start"], t = e["end"];
        episodes += fmt::format(" {}..{}", s, t);
        overlap = overlap || (s <= "2018-01-31" && t >= "2017-09-01");
    }
    bool df_ok = doc["granger"].size() == 2;
    for (const auto& g : doc["granger"]) df_ok = df_ok && g["df"] == 2;
    const auto& dir_json = doc["direction"];
    const std::string text = testutil::read_file(dir / "report.txt");
    const bool table = text.find("Granger Causality Wald Tests") != std::string::npos;
    return {mean >= 0.8 && mean <= 1.3 && r2 > 0.9 && overlap && df_ok && table,
            fmt::format("ratio mean {:.3f}; log R2 {:.3f}; episodes{}; df 2 both rows: {}; direction reported "
                        "(model->market {}, market->model {})",
                        mean, r2, episodes.empty() ? " none" : episodes, df_ok ? "yes" : "no",
                        dir_json["model_to_market_significant"].get<bool>() ? "significant" : "not significant",
                        dir_json["market_to_model_significant"].get<bool>() ? "significant" : "not significant")};
}

Outcome determinism() {
    const auto a = testutil::temp_dir("acceptance_det_a");
    const auto b = testutil::temp_dir("acceptance_det_b");
    if (run_cli(backtest_args(a)) != 0 || run_cli(backtest_args(b)) != 0) return {false, "backtest failed"};
    std::string differing;
    for (const char* f : {"report.txt", "report.json", "figure1.csv", "figure2.csv"}) {
        if (testutil::read_file(a / f) != testutil::read_file(b / f)) differing += std::string(" ") + f;
    }
    return {differing.empty(), differing.empty() ? "4 artifacts byte-identical across two runs"
                                                 : "differs:" + differing};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"pricing identities", pricing_identities},
        {"chi-square tail probabilities", table_tail_probabilities},
        {"OLS oracle equivalence", ols_oracle},
        {"VAR coefficient recovery", var_recovery},
        {"Granger test size and power", granger_size_and_power},
        {"end-to-end backtest on bundled data", end_to_end},
        {"deterministic reports", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
