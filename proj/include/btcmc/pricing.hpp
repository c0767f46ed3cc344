#pragma once

// Marginal cost of production model for proof-of-work mining.
//
// A producer running `hashrate` GH/s at `efficiency` W per GH/s spends
//
//     cost/day = hashrate * efficiency / 1000 * electricity_price * 24
//
// and expects to earn
//
//     BTC/day  = block_reward * hashrate * 1e9 * 86400 / (difficulty * 2^32)
//
// where difficulty is the dimensionless protocol difficulty (expected hashes
// per block = difficulty * 2^32) and 1e9 converts GH/s to hashes/s. The
// break-even price is their ratio, in which hashrate cancels:
//
//     P* = electricity_price * efficiency * difficulty * 2^32
//          / (block_reward * 3.6e15)

namespace btcmc::pricing {

inline constexpr double kHoursPerDay = 24.0;
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kHashesPerGigahash = 1e9;
inline constexpr double kWattsPerKilowatt = 1000.0;
inline constexpr double kHashesPerDifficulty = 4294967296.0; // 2^32
inline constexpr double kDefaultElectricityPrice = 0.135;    // USD/kWh

/// Operating-cost inputs. Both fields strictly positive and finite.
class CostParams {
public:
    CostParams(double electricity_price, double efficiency);

    double electricity_price() const noexcept { return electricity_price_; } // USD/kWh
    double efficiency() const noexcept { return efficiency_; }               // W per GH/s

private:
    double electricity_price_;
    double efficiency_;
};

/// Network state at a retarget. difficulty > 0, block_reward >= 0.
class NetworkParams {
public:
    NetworkParams(double difficulty, double block_reward);

    double difficulty() const noexcept { return difficulty_; }
    double block_reward() const noexcept { return block_reward_; } // BTC/block

private:
    double difficulty_;
    double block_reward_;
};

/// USD/day spent by a producer with the given hashrate (GH/s).
double energy_cost_per_day(double hashrate_ghs, const CostParams& cost);

/// Expected BTC/day mined by a producer with the given hashrate (GH/s).
double expected_btc_per_day(double hashrate_ghs, const NetworkParams& net);

/// Break-even price in USD/BTC, evaluated in the hashrate-free closed form.
/// Throws ErrorCode::undefined_price when block_reward is zero.
double model_price(const CostParams& cost, const NetworkParams& net);

/// The same price as the quotient energy_cost_per_day / expected_btc_per_day
/// at a chosen hashrate. Used to cross-check the closed form.
double model_price_at_hashrate(double hashrate_ghs, const CostParams& cost, const NetworkParams& net);

} // namespace btcmc::pricing
