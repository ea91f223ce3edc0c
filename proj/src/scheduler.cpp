#include "disambig/scheduler.hpp"

#include <atomic>
#include <exception>

#include "disambig/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace disambig {

std::vector<GroupStats> run_grouped(const std::vector<GroupSpec>& groups,
                                    const std::function<void(std::size_t, std::size_t)>& fn) {
    std::vector<GroupStats> stats(groups.size());
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> cancelled{false};

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& spec = groups[g];
        if (spec.cap < 1) throw UsageError("concurrency cap must be at least 1");
        stats[g].n_jobs = spec.n_jobs;
        stats[g].cap = spec.cap;
        if (cancelled.load()) continue;

        std::atomic<std::uint32_t> in_flight{0};
        std::atomic<std::uint32_t> high_water{0};
        const auto n_jobs = static_cast<std::int64_t>(spec.n_jobs);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(spec.cap))
#endif
        for (std::int64_t j = 0; j < n_jobs; ++j) {
            if (cancelled.load()) continue;
            const auto now = in_flight.fetch_add(1) + 1;
            auto seen = high_water.load();
            while (now > seen && !high_water.compare_exchange_weak(seen, now)) {
            }
            try {
                fn(g, static_cast<std::size_t>(j));
            } catch (...) {
                bool expected = false;
                if (cancelled.compare_exchange_strong(expected, true))
                    first_error = std::current_exception();
            }
            in_flight.fetch_sub(1);
        }
        stats[g].max_in_flight = high_water.load();
    }
    if (first_error) std::rethrow_exception(first_error);
    return stats;
}

}  // namespace disambig
