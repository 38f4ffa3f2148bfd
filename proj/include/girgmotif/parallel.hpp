#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace girgmotif {

/// Runs body(worker, begin, end) over `threads` contiguous-interleaved blocks of
/// [0, n). Block assignment is static: block b goes to worker b % threads.
template <class Body>
void parallel_blocks(std::size_t n, unsigned threads, std::size_t block, Body&& body) {
    threads = std::max(1u, threads);
    block = std::max<std::size_t>(1, block);
    const std::size_t blocks = (n + block - 1) / block;
    auto run = [&](unsigned worker) {
        for (std::size_t b = worker; b < blocks; b += threads)
            body(worker, b * block, std::min(n, (b + 1) * block));
    };
    if (threads == 1 || blocks <= 1) {
        run(0);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                run(t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace girgmotif
