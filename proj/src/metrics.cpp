#include "aci/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace aci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapacitySlack = 1e-9;
}  // namespace

std::pair<double, double> split_workload(const ModelProfile& profile, int k) {
    if (k < 0 || k > profile.num_points()) {
        throw std::out_of_range("partition point " + std::to_string(k) + " outside [0, " +
                                std::to_string(profile.num_points()) + "]");
    }
    double device = 0.0;
    double edge = 0.0;
    for (int j = 0; j <= profile.num_points(); ++j) {
        (j <= k ? device : edge) += profile.layer_workloads[static_cast<std::size_t>(j)];
    }
    return {device, edge};
}

double sinr(double power, double device_gain, double jammer_power, double jammer_gain, double noise) {
    return power * device_gain / (jammer_power * jammer_gain + noise);
}

DeviceMetrics evaluate_device(const Scenario& scenario, int n, const DeviceDecision& decision) {
    const Device& dev = scenario.devices.at(static_cast<std::size_t>(n));
    const SystemConstants& c = scenario.constants;
    const int k = decision.partition;
    const int K = scenario.num_points();

    DeviceMetrics m;
    std::tie(m.workload_device, m.workload_edge) = split_workload(scenario.profile, k);

    m.t_local = m.workload_device / dev.local_compute;
    m.e_local = c.chip_coeff * m.workload_device * dev.local_compute * dev.local_compute;

    m.alloc_ok = m.workload_edge == 0.0 || decision.edge_alloc > 0.0;
    if (m.workload_edge > 0.0) {
        m.t_edge = decision.edge_alloc > 0.0 ? m.workload_edge / decision.edge_alloc : kInf;
    }

    const double bits = scenario.profile.ifd_sizes[static_cast<std::size_t>(k)];
    if (k < K) {
        m.sinr = sinr(decision.power, scenario.channel.device_gains[static_cast<std::size_t>(n)],
                      scenario.jammer.power, scenario.channel.jammer_gain,
                      scenario.channel.noise_power);
        m.power_ok = decision.power > 0.0 && decision.power <= c.max_power;
    } else {
        m.power_ok = true;
    }
    if (bits > 0.0) {
        const double rate = m.sinr < 1e-300 ? 0.0 : dev.bandwidth * std::log2(1.0 + m.sinr);
        if (rate > 0.0) {
            m.t_tx = bits / rate;
            m.e_tx = decision.power * m.t_tx;
        } else {
            m.t_tx = kInf;
            m.e_tx = decision.power > 0.0 ? kInf : 0.0;
        }
    }

    m.accuracy = accuracy(scenario.accuracy_model, k, m.sinr);
    m.delay_revenue = (c.max_delay - m.total_delay()) / c.max_delay;
    m.accuracy_revenue = (m.accuracy - c.acc_min) / (c.acc_max - c.acc_min);
    m.rda_term = c.weight * m.delay_revenue + (1.0 - c.weight) * m.accuracy_revenue;
    m.accuracy_ok = m.accuracy >= c.acc_min;
    m.energy_ok = m.total_energy() <= c.energy_budget;
    return m;
}

SystemMetrics system_rda(const Scenario& scenario, std::span<const DeviceDecision> decisions) {
    if (decisions.size() != scenario.devices.size()) {
        throw std::invalid_argument("one decision per device required");
    }
    SystemMetrics out;
    out.per_device.reserve(decisions.size());
    double alloc_sum = 0.0;
    bool all_ok = true;
    for (std::size_t n = 0; n < decisions.size(); ++n) {
        DeviceMetrics m = evaluate_device(scenario, static_cast<int>(n), decisions[n]);
        out.rda += m.rda_term;
        all_ok = all_ok && m.feasible();
        alloc_sum += decisions[n].edge_alloc;
        out.per_device.push_back(m);
    }
    const double cap = scenario.constants.edge_capacity;
    out.capacity_ok = alloc_sum <= cap * (1.0 + kCapacitySlack);
    out.feasible = all_ok && out.capacity_ok;
    return out;
}

std::vector<DeviceDecision> make_decisions(std::span<const int> partitions,
                                           std::span<const double> powers,
                                           std::span<const double> allocs) {
    if (powers.size() != partitions.size() || allocs.size() != partitions.size()) {
        throw std::invalid_argument("partition, power and allocation vectors differ in length");
    }
    std::vector<DeviceDecision> out(partitions.size());
    for (std::size_t n = 0; n < partitions.size(); ++n) out[n] = {partitions[n], powers[n], allocs[n]};
    return out;
}

}  // namespace aci
