#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace disambig {

struct GroupSpec {
    std::size_t n_jobs = 0;
    std::uint32_t cap = 1;  // max jobs of this group in flight at once
};

struct GroupStats {
    std::size_t n_jobs = 0;
    std::uint32_t cap = 1;
    // Highest instantaneous in-flight count observed; never exceeds cap.
    std::uint32_t max_in_flight = 0;
};

// Runs fn(group, job) for every job, one group at a time in the given order,
// holding each group to its concurrency cap. Jobs within a group run in any
// order and must not share mutable state. The first exception cancels the
// remaining jobs (best effort) and is rethrown after the pool drains.
std::vector<GroupStats> run_grouped(const std::vector<GroupSpec>& groups,
                                    const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace disambig
