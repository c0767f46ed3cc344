#include "btcmc/parallel.hpp"

#include "btcmc/error.hpp"

#include <cstdint>

namespace btcmc::parallel {

namespace {

void check_batch(std::span<const pricing::CostParams> costs, std::span<const pricing::NetworkParams> nets) {
    if (costs.size() != nets.size()) {
        throw Error(ErrorCode::domain, "cost and network parameter batches differ in length");
    }
    // model_price only rejects a zero reward; check up front so the
    // parallel loop never throws.
    for (const auto& n : nets) {
        if (n.block_reward() == 0.0) {
            throw Error(ErrorCode::undefined_price, "model price undefined: block reward is zero");
        }
    }
}

} // namespace

std::vector<double> model_prices_serial(std::span<const pricing::CostParams> costs,
                                        std::span<const pricing::NetworkParams> nets) {
    check_batch(costs, nets);
    std::vector<double> out(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i) out[i] = pricing::model_price(costs[i], nets[i]);
    return out;
}

std::vector<double> model_prices(std::span<const pricing::CostParams> costs,
                                 std::span<const pricing::NetworkParams> nets) {
    check_batch(costs, nets);
    std::vector<double> out(costs.size());
    const auto n = static_cast<std::int64_t>(costs.size());
#pragma omp parallel for schedule(static) if (n > 4096)
    for (std::int64_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = pricing::model_price(costs[static_cast<std::size_t>(i)],
                                                                nets[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace btcmc::parallel
