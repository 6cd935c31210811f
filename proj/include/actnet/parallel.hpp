#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "actnet/rng.hpp"
#include "actnet/stats.hpp"

namespace actnet {

/// Process-wide worker count used by parallel_for. Results never depend on it:
/// work items write to slots keyed by index and are reduced in index order.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(i) for i in [0, count) on the worker pool. The first exception
/// thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Fixed block size for Monte-Carlo loops. Block b always draws from
/// seed.child(b), so estimates are independent of the worker count.
inline constexpr std::size_t kMonteCarloBlock = 8192;

/// Monte-Carlo mean of draw(engine) over `samples` draws.
RunningStats monte_carlo(std::size_t samples, const RngSeed& seed,
                         const std::function<double(Engine&)>& draw);

/// Block-structured driver for estimators that keep their own per-block
/// accumulators. body(block, first, count, engine) handles samples
/// [first, first + count) of the block.
void for_each_block(std::size_t samples, const RngSeed& seed,
                    const std::function<void(std::size_t, std::size_t, std::size_t, Engine&)>& body);

inline std::size_t block_count(std::size_t samples) {
    return (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
}

}  // namespace actnet
