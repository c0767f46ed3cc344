#include "btcmc/pricing.hpp"

#include "btcmc/error.hpp"

#include <cmath>
#include <string>

namespace btcmc::pricing {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw Error(ErrorCode::domain, std::string(name) + " must be finite and > 0, got " + std::to_string(value));
    }
}

// 3.6e15 = (W per kW) * (hashes per GH) * (seconds per hour).
constexpr double kClosedFormDenominator = kWattsPerKilowatt * kHashesPerGigahash * kSecondsPerHour;

} // namespace

CostParams::CostParams(double electricity_price, double efficiency)
    : electricity_price_(electricity_price), efficiency_(efficiency) {
    require_positive(electricity_price, "electricity_price");
    require_positive(efficiency, "efficiency");
}

NetworkParams::NetworkParams(double difficulty, double block_reward)
    : difficulty_(difficulty), block_reward_(block_reward) {
    require_positive(difficulty, "difficulty");
    if (!std::isfinite(block_reward) || block_reward < 0.0) {
        throw Error(ErrorCode::domain, "block_reward must be finite and >= 0, got " + std::to_string(block_reward));
    }
}

double energy_cost_per_day(double hashrate_ghs, const CostParams& cost) {
    require_positive(hashrate_ghs, "hashrate");
    const double kilowatts = hashrate_ghs * cost.efficiency() / kWattsPerKilowatt;
    return kilowatts * cost.electricity_price() * kHoursPerDay;
}

double expected_btc_per_day(double hashrate_ghs, const NetworkParams& net) {
    require_positive(hashrate_ghs, "hashrate");
    const double hashes_per_day = hashrate_ghs * kHashesPerGigahash * kSecondsPerHour * kHoursPerDay;
    const double hashes_per_block = net.difficulty() * kHashesPerDifficulty;
    return net.block_reward() * (hashes_per_day / hashes_per_block);
}

double model_price(const CostParams& cost, const NetworkParams& net) {
    if (net.block_reward() == 0.0) {
        throw Error(ErrorCode::undefined_price, "model price undefined: block reward is zero");
    }
    const double hashes_per_block = net.difficulty() * kHashesPerDifficulty;
    return cost.electricity_price() * cost.efficiency() * hashes_per_block /
           (net.block_reward() * kClosedFormDenominator);
}

double model_price_at_hashrate(double hashrate_ghs, const CostParams& cost, const NetworkParams& net) {
    if (net.block_reward() == 0.0) {
        throw Error(ErrorCode::undefined_price, "model price undefined: block reward is zero");
    }
    return energy_cost_per_day(hashrate_ghs, cost) / expected_btc_per_day(hashrate_ghs, net);
}

} // namespace btcmc::pricing
