#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace assure {

/// Counts indices in [0, count) satisfying pred, splitting the range into
/// contiguous chunks across at most `workers` threads. Each index must be
/// independently evaluable (the simulation loops key their random streams by
/// index), so the tally is identical for any worker count.
inline long parallel_count(long count, int workers, const std::function<bool(long)>& pred) {
    if (workers < 2 || count < 2) {
        long tally = 0;
        for (long i = 0; i < count; ++i) {
            if (pred(i)) ++tally;
        }
        return tally;
    }
    const long n_threads = std::min<long>(workers, count);
    std::vector<long> tallies(n_threads, 0);
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (long t = 0; t < n_threads; ++t) {
        threads.emplace_back([&, t] {
            const long lo = count * t / n_threads;
            const long hi = count * (t + 1) / n_threads;
            try {
                long tally = 0;
                for (long i = lo; i < hi; ++i) {
                    if (pred(i)) ++tally;
                }
                tallies[t] = tally;
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    long total = 0;
    for (long t : tallies) total += t;
    return total;
}

}  // namespace assure
