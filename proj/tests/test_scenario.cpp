#include <doctest.h>

#include <cmath>

#include "aci/errors.hpp"
#include "aci/scenario.hpp"
#include "fixtures.hpp"

using namespace aci;

TEST_CASE("same seed gives an identical scenario") {
    const Scenario a = fixtures::default_scenario(42);
    const Scenario b = fixtures::default_scenario(42);
    CHECK(a == b);
    CHECK_FALSE(a == fixtures::default_scenario(43));
}

TEST_CASE("placement and gains follow the distance law") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scenario s = fixtures::default_scenario(seed);
        CHECK(s.edge_position.x == 50.0);
        CHECK(s.edge_position.y == 50.0);
        REQUIRE(s.devices.size() == 10);
        for (std::size_t n = 0; n < s.devices.size(); ++n) {
            const auto& p = s.devices[n].position;
            CHECK(p.x >= 0.0);
            CHECK(p.x <= 100.0);
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 100.0);
            const double d = std::hypot(p.x - 50.0, p.y - 50.0);
            CHECK(s.channel.device_gains[n] == doctest::Approx(1e-3 / (d * d * d)).epsilon(1e-12));
        }
        const double dj = std::hypot(s.jammer.position.x - 50.0, s.jammer.position.y - 50.0);
        CHECK(s.channel.jammer_gain == doctest::Approx(1e-3 / (dj * dj * dj)).epsilon(1e-12));
    }
}

TEST_CASE("-110 dBm is 1e-14 W") {
    CHECK(dbm_to_watts(-110.0) == doctest::Approx(1e-14).epsilon(1e-12));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default profile has six points and a sending-free tail") {
    const ModelProfile p = default_profile();
    CHECK(p.num_points() == 5);
    CHECK(p.layer_workloads.size() == 6);
    CHECK(p.ifd_sizes.size() == 6);
    CHECK(p.ifd_sizes.back() == 0.0);
    double total = 0.0;
    for (double l : p.layer_workloads) {
        CHECK(l > 0.0);
        total += l;
    }
    CHECK(p.total_workload() == doctest::Approx(total));
    CHECK(p.ifd_sizes[0] == 3 * 32 * 32 * 8);
    // Workload scales with cycles per MAC.
    CHECK(default_profile(4.0).total_workload() == doctest::Approx(4.0 * total));
}

TEST_CASE("local computing fits the default energy budget") {
    const Scenario s = fixtures::default_scenario(1);
    const double f = s.devices[0].local_compute;
    CHECK(s.constants.chip_coeff * s.profile.total_workload() * f * f < s.constants.energy_budget);
}

TEST_CASE("validation names the offending field") {
    Scenario s = fixtures::default_scenario(3);
    s.devices[2].local_compute = 0.0;
    try {
        s.validate();
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "devices[2].local_compute");
    }

    s = fixtures::default_scenario(3);
    s.channel.noise_power = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);

    s = fixtures::default_scenario(3);
    s.constants.acc_min = 0.96;
    CHECK_THROWS_AS(s.validate(), ValidationError);

    s = fixtures::default_scenario(3);
    s.accuracy_model.points.pop_back();
    CHECK_THROWS_AS(s.validate(), ValidationError);

    GenerationParams bad;
    bad.n_devices = 0;
    CHECK_THROWS_AS(generate_scenario(bad, {}, default_profile(), default_accuracy_model(), 0),
                    ValidationError);
}

TEST_CASE("refresh_gains recomputes from positions") {
    Scenario s = fixtures::default_scenario(9);
    s.devices[0].position = {50.0, 60.0};
    s.refresh_gains();
    CHECK(s.channel.device_gains[0] == doctest::Approx(1e-6));
}
