#pragma once

// Fixed-size worker pool for independent, indexed runs.

#include "hoeffmc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>
#include <vector>

namespace hoeffmc {

template <class Row>
struct PoolSlot {
    Row row{};
    std::string error;  // error name when the run threw hoeffmc::Error
};

/// Calls task(i) for i in [0, runs) on up to `jobs` threads. Results are indexed by run,
/// so the output does not depend on scheduling. A run that throws Error is recorded in its
/// slot; any other exception propagates after all threads join.
template <class Row, class Task>
std::vector<PoolSlot<Row>> run_indexed(int runs, int jobs, Task&& task) {
    if (runs < 0) fail(ErrorKind::InvalidInput, "run count must be non-negative");
    if (jobs < 1) fail(ErrorKind::InvalidInput, "jobs must be at least 1");
    std::vector<PoolSlot<Row>> slots(static_cast<std::size_t>(runs));
    std::atomic<int> next{0};
    std::exception_ptr unexpected;
    std::atomic<bool> stop{false};
    auto worker = [&] {
        for (int r = next++; r < runs && !stop; r = next++) {
            auto& slot = slots[static_cast<std::size_t>(r)];
            try {
                slot.row = task(r);
            } catch (const Error& e) {
                slot.error = std::string(e.name());
            } catch (...) {
                if (!stop.exchange(true)) unexpected = std::current_exception();
            }
        }
    };
    const int n_threads = std::max(1, std::min(jobs, runs));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (unexpected) std::rethrow_exception(unexpected);
    return slots;
}

}  // namespace hoeffmc
