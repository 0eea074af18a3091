#include <doctest.h>

#include <cmath>
#include <random>

#include "aci/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aci;

TEST_CASE("split_workload follows the inclusive device-side sum") {
    const ModelProfile p = default_profile();
    for (int k = 0; k <= 5; ++k) {
        const auto [dev, edge] = split_workload(p, k);
        CHECK(dev == doctest::Approx(oracle::device_load(p, k)));
        CHECK(edge == doctest::Approx(oracle::edge_load(p, k)));
        CHECK(dev + edge == doctest::Approx(p.total_workload()));
    }
    // k = 0 still runs layer 0 on the device.
    CHECK(split_workload(p, 0).first == p.layer_workloads[0]);
    CHECK(split_workload(p, 5).second == 0.0);
    CHECK_THROWS_AS(split_workload(p, 6), std::out_of_range);
}

TEST_CASE("per-device metrics agree with the formula oracle (1e4 samples)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        Scenario s = fixtures::default_scenario(i % 50, 4, 2.0 * u(rng));
        const int n = static_cast<int>(rng() % 4);
        const int k = static_cast<int>(rng() % 6);
        const double p = 1e-4 + u(rng) * (s.constants.max_power - 1e-4);
        const double f = 1e8 + u(rng) * 2e10;
        const DeviceMetrics m = evaluate_device(s, n, {k, p, f});
        const auto o = oracle::eval_device(s, n, k, p, f);
        CHECK(m.total_delay() == doctest::Approx(o.delay).epsilon(1e-12));
        CHECK(m.total_energy() == doctest::Approx(o.energy).epsilon(1e-12));
        CHECK(m.accuracy == doctest::Approx(o.accuracy).epsilon(1e-12));
        CHECK(m.rda_term == doctest::Approx(o.term).epsilon(1e-12));
        CHECK((m.accuracy_ok && m.energy_ok) == o.feasible);
    }
}

TEST_CASE("local computing metrics") {
    const Scenario s = fixtures::default_scenario(5);
    const double total = s.profile.total_workload();
    for (int n = 0; n < 10; ++n) {
        const DeviceMetrics m = evaluate_device(s, n, {5, 0.0, 0.0});
        CHECK(m.total_delay() == doctest::Approx(total / 2e9));
        CHECK(m.t_tx == 0.0);
        CHECK(m.t_edge == 0.0);
        CHECK(m.accuracy == 0.95);
        CHECK(m.accuracy_revenue == doctest::Approx(1.0));
        CHECK(m.feasible());
    }
}

TEST_CASE("zero power or zero allocation cannot carry offloaded work") {
    const Scenario s = fixtures::default_scenario(5);
    const DeviceMetrics silent = evaluate_device(s, 0, {2, 0.0, 1e9});
    CHECK(std::isinf(silent.t_tx));
    CHECK_FALSE(silent.feasible());
    const DeviceMetrics starved = evaluate_device(s, 0, {2, 0.1, 0.0});
    CHECK(std::isinf(starved.t_edge));
    CHECK_FALSE(starved.alloc_ok);
    const DeviceMetrics loud = evaluate_device(s, 0, {2, 0.3, 1e9});
    CHECK_FALSE(loud.power_ok);
}

TEST_CASE("system RDA sums device terms and checks edge capacity") {
    const Scenario s = fixtures::default_scenario(11, 3, 0.0);
    std::vector<DeviceDecision> d{{0, 0.2, 5e9}, {5, 0.0, 0.0}, {3, 0.1, 15e9}};
    const SystemMetrics sys = system_rda(s, d);
    double sum = 0.0;
    for (int n = 0; n < 3; ++n) sum += oracle::eval_device(s, n, d[n].partition, d[n].power, d[n].edge_alloc).term;
    CHECK(sys.rda == doctest::Approx(sum).epsilon(1e-14));
    CHECK(sys.capacity_ok);

    d[0].edge_alloc = 6e9;
    const SystemMetrics over = system_rda(s, d);
    CHECK_FALSE(over.capacity_ok);
    CHECK_FALSE(over.feasible);

    CHECK_THROWS(system_rda(s, std::vector<DeviceDecision>(2)));
}

TEST_CASE("SINR expression") {
    CHECK(sinr(0.2, 1e-6, 1.0, 1e-8, 1e-14) == doctest::Approx(0.2 * 1e-6 / (1e-8 + 1e-14)));
    CHECK(sinr(0.2, 1e-6, 0.0, 1e-8, 1e-14) == doctest::Approx(0.2e-6 / 1e-14));
}
