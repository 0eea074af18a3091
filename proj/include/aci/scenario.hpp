#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aci/accuracy.hpp"

namespace aci {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

double distance(Point2 a, Point2 b);

// Channel gain law h = 1e-3 * d^-3.
double path_gain(double distance_m);

// Per-segment workloads (cycles) and feature sizes (bits) of a partitioned
// DNN. Index k is the partition point: the device runs segments 0..k and
// sends ifd_sizes[k] bits; the edge runs k+1..K.
struct ModelProfile {
    std::vector<double> layer_workloads;
    std::vector<double> ifd_sizes;
    std::vector<std::string> labels;

    int num_points() const { return static_cast<int>(layer_workloads.size()) - 1; }
    double total_workload() const;
    void validate() const;

    bool operator==(const ModelProfile&) const = default;
};

// Representative ResNet-18 (CIFAR-10, 32x32x3 input) split into input stage,
// stem conv, and the four residual stages. Workloads are MAC counts times
// `cycles_per_mac`; features use 8-bit activations.
ModelProfile default_profile(double cycles_per_mac = 1.0);

struct Device {
    int id = 0;
    Point2 position;
    double local_compute = 0.0;  // cycles/s
    double bandwidth = 0.0;      // Hz

    bool operator==(const Device&) const = default;
};

struct Jammer {
    Point2 position;
    double power = 0.0;  // W

    bool operator==(const Jammer&) const = default;
};

struct Channel {
    std::vector<double> device_gains;
    double jammer_gain = 0.0;
    double noise_power = 0.0;  // W

    bool operator==(const Channel&) const = default;
};

struct SystemConstants {
    double chip_coeff = 1e-28;     // zeta
    double energy_budget = 1.0;    // J
    double max_power = 0.23;       // W
    double edge_capacity = 20e9;   // cycles/s
    double max_delay = 2.0;        // s
    double weight = 0.5;           // delay/accuracy trade-off
    double acc_min = 0.80;
    double acc_max = 0.95;

    void validate() const;

    bool operator==(const SystemConstants&) const = default;
};

struct Scenario {
    std::vector<Device> devices;
    Jammer jammer;
    Channel channel;
    SystemConstants constants;
    AccuracyModel accuracy_model;
    ModelProfile profile;
    Point2 edge_position{50.0, 50.0};
    std::uint64_t seed = 0;

    int num_devices() const { return static_cast<int>(devices.size()); }
    int num_points() const { return profile.num_points(); }

    // Interference-plus-noise floor p_j * h_j + sigma^2.
    double interference() const { return jammer.power * channel.jammer_gain + channel.noise_power; }

    // Throws ValidationError with a field path on the first violated invariant.
    void validate() const;

    // Recomputes every gain from positions with the path-gain law.
    void refresh_gains();

    bool operator==(const Scenario&) const = default;
};

// Knobs for random placement; everything else comes from the constants.
struct GenerationParams {
    int n_devices = 10;
    double region_side = 100.0;   // m
    double local_compute = 2e9;   // cycles/s
    double bandwidth = 1e6;       // Hz
    double jammer_power = 1.0;    // W
    double noise_power = 1e-14;   // W

    bool operator==(const GenerationParams&) const = default;
};

// Devices and jammer uniform over [0, side]^2 with the edge server at the
// center. A draw landing exactly on the server is redrawn (100 tries).
Scenario generate_scenario(const GenerationParams& params, const SystemConstants& constants,
                           const ModelProfile& profile, const AccuracyModel& accuracy,
                           std::uint64_t seed);

double dbm_to_watts(double dbm);

}  // namespace aci
