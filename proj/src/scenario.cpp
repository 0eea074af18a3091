#include "aci/scenario.hpp"

#include <cmath>
#include <numeric>

#include "aci/errors.hpp"
#include "aci/rng.hpp"

namespace aci {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_gain(double distance_m) { return 1e-3 / (distance_m * distance_m * distance_m); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double ModelProfile::total_workload() const {
    return std::accumulate(layer_workloads.begin(), layer_workloads.end(), 0.0);
}

void ModelProfile::validate() const {
    if (layer_workloads.size() < 2) {
        throw ValidationError("profile.layer_workloads", "need at least two segments (K >= 1)");
    }
    if (ifd_sizes.size() != layer_workloads.size()) {
        throw ValidationError("profile.ifd_sizes", "length must equal layer_workloads length");
    }
    for (std::size_t k = 0; k < layer_workloads.size(); ++k) {
        if (!(layer_workloads[k] >= 0.0) || !std::isfinite(layer_workloads[k])) {
            throw ValidationError("profile.layer_workloads[" + std::to_string(k) + "]",
                                  "must be finite and >= 0");
        }
        if (!(ifd_sizes[k] >= 0.0) || !std::isfinite(ifd_sizes[k])) {
            throw ValidationError("profile.ifd_sizes[" + std::to_string(k) + "]",
                                  "must be finite and >= 0");
        }
    }
    if (ifd_sizes.back() != 0.0) {
        throw ValidationError("profile.ifd_sizes[" + std::to_string(ifd_sizes.size() - 1) + "]",
                              "local inference transmits nothing; must be 0");
    }
    if (!labels.empty() && labels.size() != layer_workloads.size()) {
        throw ValidationError("profile.labels", "length must equal layer_workloads length");
    }
}

namespace {

struct FeatureMap {
    double channels;
    double height;
    double width;

    double elements() const { return channels * height * width; }
};

// MACs of a square-kernel convolution producing `out`.
double conv_macs(const FeatureMap& out, double in_channels, double kernel) {
    return out.elements() * in_channels * kernel * kernel;
}

// One ResNet stage of two basic blocks. The first block changes width and,
// when it does, carries a 1x1 projection shortcut.
double resnet_stage_macs(double in_channels, const FeatureMap& out) {
    double macs = conv_macs(out, in_channels, 3) + 3 * conv_macs(out, out.channels, 3);
    if (in_channels != out.channels) macs += conv_macs(out, in_channels, 1);
    return macs;
}

}  // namespace

ModelProfile default_profile(double cycles_per_mac) {
    constexpr double kBitsPerActivation = 8.0;
    const FeatureMap input{3, 32, 32};
    const FeatureMap stem{64, 32, 32};
    const FeatureMap s1{64, 32, 32};
    const FeatureMap s2{128, 16, 16};
    const FeatureMap s3{256, 8, 8};
    const FeatureMap s4{512, 4, 4};
    constexpr double kClasses = 10;

    // Input normalisation costs one operation per element.
    const double input_ops = input.elements();
    const double stem_macs = conv_macs(stem, input.channels, 3);
    const double head_macs = s4.elements() /* global average pool */ + s4.channels * kClasses;

    ModelProfile p;
    p.layer_workloads = {
        input_ops * cycles_per_mac,
        stem_macs * cycles_per_mac,
        resnet_stage_macs(stem.channels, s1) * cycles_per_mac,
        resnet_stage_macs(s1.channels, s2) * cycles_per_mac,
        resnet_stage_macs(s2.channels, s3) * cycles_per_mac,
        (resnet_stage_macs(s3.channels, s4) + head_macs) * cycles_per_mac,
    };
    p.ifd_sizes = {
        input.elements() * kBitsPerActivation,
        stem.elements() * kBitsPerActivation,
        s1.elements() * kBitsPerActivation,
        s2.elements() * kBitsPerActivation,
        s3.elements() * kBitsPerActivation,
        0.0,
    };
    p.labels = {"input", "conv1", "layer1", "layer2", "layer3", "layer4+fc"};
    return p;
}

void SystemConstants::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ValidationError(std::string("constants.") + name, "must be finite and > 0");
        }
    };
    positive(chip_coeff, "chip_coeff");
    positive(energy_budget, "energy_budget");
    positive(max_power, "max_power");
    positive(edge_capacity, "edge_capacity");
    positive(max_delay, "max_delay");
    if (!(weight >= 0.0 && weight <= 1.0)) throw ValidationError("constants.weight", "must lie in [0, 1]");
    if (!(acc_min >= 0.0 && acc_min <= 1.0)) throw ValidationError("constants.acc_min", "must lie in [0, 1]");
    if (!(acc_max >= 0.0 && acc_max <= 1.0)) throw ValidationError("constants.acc_max", "must lie in [0, 1]");
    if (!(acc_min < acc_max)) throw ValidationError("constants.acc_min", "must be < acc_max");
}

void Scenario::validate() const {
    if (devices.empty()) throw ValidationError("devices", "at least one device required");
    for (std::size_t n = 0; n < devices.size(); ++n) {
        const std::string at = "devices[" + std::to_string(n) + "]";
        if (!(devices[n].local_compute > 0.0) || !std::isfinite(devices[n].local_compute)) {
            throw ValidationError(at + ".local_compute", "must be finite and > 0");
        }
        if (!(devices[n].bandwidth > 0.0) || !std::isfinite(devices[n].bandwidth)) {
            throw ValidationError(at + ".bandwidth", "must be finite and > 0");
        }
    }
    if (!(jammer.power >= 0.0) || !std::isfinite(jammer.power)) {
        throw ValidationError("jammer.power", "must be finite and >= 0");
    }
    if (channel.device_gains.size() != devices.size()) {
        throw ValidationError("channel.device_gains", "one gain per device required");
    }
    for (std::size_t n = 0; n < channel.device_gains.size(); ++n) {
        if (!(channel.device_gains[n] > 0.0) || !std::isfinite(channel.device_gains[n])) {
            throw ValidationError("channel.device_gains[" + std::to_string(n) + "]",
                                  "must be finite and > 0");
        }
    }
    if (!(channel.jammer_gain > 0.0) || !std::isfinite(channel.jammer_gain)) {
        throw ValidationError("channel.jammer_gain", "must be finite and > 0");
    }
    if (!(channel.noise_power > 0.0) || !std::isfinite(channel.noise_power)) {
        throw ValidationError("channel.noise_power", "must be finite and > 0");
    }
    constants.validate();
    profile.validate();
    accuracy_model.validate();
    if (accuracy_model.num_points() != profile.num_points()) {
        throw ValidationError("accuracy_model",
                              "needs one parameter set per transmitting point (K = " +
                                  std::to_string(profile.num_points()) + ")");
    }
}

void Scenario::refresh_gains() {
    channel.device_gains.resize(devices.size());
    for (std::size_t n = 0; n < devices.size(); ++n) {
        channel.device_gains[n] = path_gain(distance(devices[n].position, edge_position));
    }
    channel.jammer_gain = path_gain(distance(jammer.position, edge_position));
}

Scenario generate_scenario(const GenerationParams& params, const SystemConstants& constants,
                           const ModelProfile& profile, const AccuracyModel& accuracy,
                           std::uint64_t seed) {
    if (params.n_devices < 1) throw ValidationError("n_devices", "must be >= 1");
    if (!(params.region_side > 0.0)) throw ValidationError("region_side", "must be > 0");

    Scenario s;
    s.seed = seed;
    s.constants = constants;
    s.profile = profile;
    s.accuracy_model = accuracy;
    s.edge_position = {params.region_side / 2.0, params.region_side / 2.0};
    s.channel.noise_power = params.noise_power;

    Rng rng(seed);
    auto draw = [&](const char* what) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            const Point2 p{uniform01(rng) * params.region_side, uniform01(rng) * params.region_side};
            if (distance(p, s.edge_position) > 0.0) return p;
        }
        throw ValidationError(what, "could not place away from the edge server in 100 attempts");
    };

    for (int n = 0; n < params.n_devices; ++n) {
        s.devices.push_back({n, draw("devices"), params.local_compute, params.bandwidth});
    }
    s.jammer = {draw("jammer"), params.jammer_power};
    s.refresh_gains();
    s.validate();
    return s;
}

}  // namespace aci
