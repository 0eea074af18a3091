#include <doctest.h>

#include "aci/ao.hpp"
#include "aci/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aci;

namespace {

AoOptions quick() {
    AoOptions o;
    o.qga.population = 30;
    o.qga.generations = 30;
    return o;
}

}  // namespace

TEST_CASE("history is nondecreasing and rda is recomputable") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Scenario s = fixtures::default_scenario(seed, 6, 0.25 * seed);
        AoOptions o = quick();
        o.qga.seed = seed;
        const Solution sol = solve(s, o);
        REQUIRE(sol.history.size() == static_cast<std::size_t>(sol.iterations) + 1);
        for (std::size_t i = 1; i < sol.history.size(); ++i) CHECK(sol.history[i] >= sol.history[i - 1]);
        CHECK(sol.objective == sol.history.back());
        const SystemMetrics m = system_rda(s, make_decisions(sol.partitions, sol.powers, sol.allocations));
        CHECK(std::abs(m.rda - sol.rda) <= 1e-12);
        CHECK(m.feasible == sol.feasible);
        // All-local is the starting point, so the result is at least as good.
        CHECK(sol.history.front() <= sol.objective);
    }
}

TEST_CASE("single device reaches the exhaustive optimum") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Scenario s = fixtures::default_scenario(40 + seed, 1, 0.02 * seed);
        AoOptions o = quick();
        o.qga.seed = seed;
        const Solution sol = solve(s, o);
        const auto best = oracle::single_device_optimum(s, 1e-4);
        CHECK(sol.feasible);
        CHECK(sol.rda >= best.rda - 1e-3);
    }
}

TEST_CASE("same options give the same solution") {
    const Scenario s = fixtures::default_scenario(3, 5, 0.1);
    AoOptions o = quick();
    o.qga.seed = 11;
    const Solution a = solve(s, o);
    const Solution b = solve(s, o);
    CHECK(a.partitions == b.partitions);
    CHECK(a.powers == b.powers);
    CHECK(a.history == b.history);
}

TEST_CASE("fixed modes hold their variables") {
    const Scenario s = fixtures::default_scenario(3, 4, 0.1);
    AoOptions o = quick();
    o.power_mode = PowerMode::fixed;
    o.fixed_power = 0.1;
    const Solution ftp = solve(s, o);
    for (double p : ftp.powers) CHECK(p == 0.1);

    o = quick();
    o.partition_mode = PartitionMode::fixed;
    o.fixed_partition = 2;
    const Solution esc = solve(s, o);
    for (int k : esc.partitions) CHECK(k == 2);

    o.fixed_partition = 9;
    CHECK_THROWS(solve(s, o));
}

TEST_CASE("a warm start is never worsened") {
    const Scenario s = fixtures::default_scenario(17, 4, 0.05);
    AoOptions o = quick();
    const Solution first = solve(s, o);
    o.qga.seed = 99;
    const Solution again = solve(s, o, &first);
    CHECK(again.objective >= first.objective);
}

TEST_CASE("iteration cap is honoured") {
    const Scenario s = fixtures::default_scenario(17, 4, 0.05);
    AoOptions o = quick();
    o.max_iters = 1;
    CHECK(solve(s, o).iterations == 1);
    o.max_iters = 0;
    CHECK_THROWS(solve(s, o));
}
