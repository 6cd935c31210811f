#include "actnet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace actnet {

namespace {
std::atomic<unsigned> g_workers{0};
// Nested loops run inline on the calling worker.
thread_local bool t_inside_pool = false;
}

void set_worker_count(unsigned workers) { g_workers.store(workers); }

unsigned worker_count() {
    const unsigned w = g_workers.load();
    if (w != 0) return w;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = t_inside_pool ? 1 : std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        const bool outer = t_inside_pool;
        t_inside_pool = true;
        struct Restore {
            bool value;
            ~Restore() { t_inside_pool = value; }
        } restore{outer};
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

void for_each_block(std::size_t samples, const RngSeed& seed,
                    const std::function<void(std::size_t, std::size_t, std::size_t, Engine&)>& body) {
    parallel_for(block_count(samples), [&](std::size_t b) {
        const std::size_t first = b * kMonteCarloBlock;
        const std::size_t count = std::min(kMonteCarloBlock, samples - first);
        Engine engine = seed.child(b).engine();
        body(b, first, count, engine);
    });
}

RunningStats monte_carlo(std::size_t samples, const RngSeed& seed,
                         const std::function<double(Engine&)>& draw) {
    std::vector<RunningStats> blocks(block_count(samples));
    for_each_block(samples, seed, [&](std::size_t b, std::size_t, std::size_t count, Engine& engine) {
        RunningStats local;
        for (std::size_t i = 0; i < count; ++i) local.add(draw(engine));
        blocks[b] = local;
    });
    RunningStats total;
    for (const auto& b : blocks) total.merge(b);
    return total;
}

}  // namespace actnet
