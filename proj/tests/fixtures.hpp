#pragma once

#include <cstdint>

#include "aci/accuracy.hpp"
#include "aci/scenario.hpp"

namespace fixtures {

inline aci::Scenario default_scenario(std::uint64_t seed, int n_devices = 10, double jammer_power = 1.0) {
    aci::GenerationParams params;
    params.n_devices = n_devices;
    params.jammer_power = jammer_power;
    return aci::generate_scenario(params, aci::SystemConstants{}, aci::default_profile(),
                                  aci::default_accuracy_model(), seed);
}

}  // namespace fixtures
