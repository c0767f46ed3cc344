#pragma once

// Data-parallel kernels. Each has a serial reference with identical
// per-element arithmetic; the OpenMP version must agree bit-for-bit.

#include "btcmc/pricing.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace btcmc::parallel {

std::vector<double> model_prices_serial(std::span<const pricing::CostParams> costs,
                                        std::span<const pricing::NetworkParams> nets);

/// OpenMP batch evaluation of pricing::model_price.
std::vector<double> model_prices(std::span<const pricing::CostParams> costs,
                                 std::span<const pricing::NetworkParams> nets);

/// Generator for replication `index` of a Monte Carlo run. Depends only on
/// (seed, index), so results do not depend on thread scheduling.
inline std::mt19937_64 replication_rng(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(std::uint64_t(index) >> 32)};
    return std::mt19937_64(seq);
}

struct RejectionTally {
    std::size_t rejections = 0;
    std::size_t replications = 0;

    double rate() const { return replications == 0 ? 0.0 : double(rejections) / double(replications); }
};

/// Counts replications for which `trial(rng)` returns true.
template <class Trial>
RejectionTally rejection_rate_serial(std::size_t replications, std::uint64_t seed, Trial&& trial) {
    RejectionTally tally{0, replications};
    for (std::size_t i = 0; i < replications; ++i) {
        auto rng = replication_rng(seed, i);
        if (trial(rng)) ++tally.rejections;
    }
    return tally;
}

/// OpenMP version of rejection_rate_serial. `trial` must be safe to call
/// concurrently and must not throw.
template <class Trial>
RejectionTally rejection_rate(std::size_t replications, std::uint64_t seed, Trial&& trial) {
    std::size_t rejections = 0;
    const auto n = static_cast<std::int64_t>(replications);
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : rejections)
    for (std::int64_t i = 0; i < n; ++i) {
        auto rng = replication_rng(seed, static_cast<std::size_t>(i));
        if (trial(rng)) ++rejections;
    }
    return {rejections, replications};
}

} // namespace btcmc::parallel
