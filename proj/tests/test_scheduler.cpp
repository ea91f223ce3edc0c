#include <doctest.h>

#include <atomic>
#include <chrono>
#include <set>
#include <thread>
#include <vector>

#include "disambig/errors.hpp"
#include "disambig/scheduler.hpp"

using namespace disambig;

TEST_CASE("run_grouped runs every job exactly once") {
    std::vector<GroupSpec> groups = {{7, 2}, {1, 4}, {12, 3}};
    std::vector<std::atomic<int>> counts(3);
    std::atomic<int> total{0};
    const auto stats = run_grouped(groups, [&](std::size_t g, std::size_t j) {
        (void)j;
        counts[g].fetch_add(1);
        total.fetch_add(1);
    });
    CHECK(counts[0].load() == 7);
    CHECK(counts[1].load() == 1);
    CHECK(counts[2].load() == 12);
    CHECK(total.load() == 20);
    REQUIRE(stats.size() == 3);
    CHECK(stats[0].n_jobs == 7);
    CHECK(stats[1].n_jobs == 1);
    CHECK(stats[2].n_jobs == 12);
}

TEST_CASE("concurrency never exceeds the group cap") {
    // Jobs sleep long enough that a cap violation would overlap.
    std::vector<GroupSpec> groups = {{16, 3}, {10, 1}};
    std::vector<std::atomic<std::uint32_t>> in_flight(2);
    std::vector<std::atomic<std::uint32_t>> high_water(2);

    const auto stats = run_grouped(groups, [&](std::size_t g, std::size_t j) {
        (void)j;
        const std::uint32_t now = in_flight[g].fetch_add(1) + 1;
        std::uint32_t seen = high_water[g].load();
        while (seen < now && !high_water[g].compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        in_flight[g].fetch_sub(1);
    });

    CHECK(high_water[0].load() <= 3);
    CHECK(high_water[1].load() <= 1);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].max_in_flight <= 3);
    CHECK(stats[0].max_in_flight >= 1);
    CHECK(stats[1].max_in_flight == 1);
    CHECK(stats[0].cap == 3);
}

TEST_CASE("groups run strictly in sequence") {
    // No job of group g may start before all jobs of g-1 finished.
    std::atomic<int> done_in_prev{0};
    std::vector<GroupSpec> groups = {{8, 4}, {8, 4}};
    bool order_violated = false;
    run_grouped(groups, [&](std::size_t g, std::size_t j) {
        (void)j;
        if (g == 1 && done_in_prev.load() != 8) order_violated = true;
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
        if (g == 0) done_in_prev.fetch_add(1);
    });
    CHECK(!order_violated);
}

TEST_CASE("exceptions cancel and propagate") {
    std::vector<GroupSpec> groups = {{40, 2}};
    std::atomic<int> ran{0};
    CHECK_THROWS_WITH_AS(run_grouped(groups,
                                     [&](std::size_t, std::size_t j) {
                                         ran.fetch_add(1);
                                         if (j == 3) throw DataError("job 3 boom");
                                         std::this_thread::sleep_for(
                                             std::chrono::milliseconds(1));
                                     }),
                         doctest::Contains("boom"), DataError);
    // Cancellation is best effort, but it must not run the whole tail.
    CHECK(ran.load() <= 40);
    CHECK(ran.load() >= 1);
}

TEST_CASE("cap below one is rejected") {
    CHECK_THROWS_AS(run_grouped({{3, 0}}, [](std::size_t, std::size_t) {}), UsageError);
}

TEST_CASE("empty groups are fine") {
    const auto stats = run_grouped({}, [](std::size_t, std::size_t) {});
    CHECK(stats.empty());
    const auto stats2 = run_grouped({{0, 4}}, [](std::size_t, std::size_t) { FAIL("no jobs"); });
    REQUIRE(stats2.size() == 1);
    CHECK(stats2[0].n_jobs == 0);
    CHECK(stats2[0].max_in_flight == 0);
}
