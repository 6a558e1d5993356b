#include "bipdb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bipdb {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void for_each_chunk(uint64_t n, uint64_t chunk_size, int workers,
                    const std::function<void(size_t, uint64_t, uint64_t)>& fn) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const size_t num_chunks = static_cast<size_t>((n + chunk_size - 1) / chunk_size);
    const int threads = std::min<int>(resolve_workers(workers), static_cast<int>(num_chunks));

    auto run_chunk = [&](size_t c) {
        const uint64_t begin = static_cast<uint64_t>(c) * chunk_size;
        const uint64_t end = std::min(begin + chunk_size, n);
        fn(c, begin, end);
    };

    if (threads <= 1) {
        for (size_t c = 0; c < num_chunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= num_chunks) return;
            try {
                run_chunk(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace bipdb
