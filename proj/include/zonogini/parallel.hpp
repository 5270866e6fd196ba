#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace zonogini {

/// 0 means "use whatever the machine offers".
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1u;
}

/// Runs fn(block_index) for every block in [0, n_blocks). Workers pull block
/// indices from a shared counter; the caller stores per-block results and
/// reduces them in block order, so the final result is independent of the
/// worker count. fn must not throw.
template <typename Fn>
void for_each_block(std::size_t n_blocks, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    if (threads > n_blocks) threads = static_cast<unsigned>(n_blocks);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            fn(b);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace zonogini
