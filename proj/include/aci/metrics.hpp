#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aci/scenario.hpp"

namespace aci {

// Per-device decision: partition point, transmit power and edge compute share.
// When partition == K nothing is sent, so power and edge_alloc are ignored.
struct DeviceDecision {
    int partition = 0;
    double power = 0.0;       // W
    double edge_alloc = 0.0;  // cycles/s
};

struct DeviceMetrics {
    double workload_device = 0.0;
    double workload_edge = 0.0;
    double t_local = 0.0;
    double t_tx = 0.0;  // +inf when the link carries no rate but data must be sent
    double t_edge = 0.0;
    double e_local = 0.0;
    double e_tx = 0.0;
    double sinr = 0.0;
    double accuracy = 0.0;
    double delay_revenue = 0.0;     // may be negative past max_delay
    double accuracy_revenue = 0.0;  // may be negative below acc_min
    double rda_term = 0.0;
    bool accuracy_ok = false;  // accuracy >= acc_min
    bool energy_ok = false;    // e_local + e_tx <= energy_budget
    bool power_ok = false;     // 0 < p <= P_max when transmitting
    bool alloc_ok = false;     // edge_alloc > 0 when edge work remains

    double total_delay() const { return t_local + t_tx + t_edge; }
    double total_energy() const { return e_local + e_tx; }
    bool feasible() const { return accuracy_ok && energy_ok && power_ok && alloc_ok; }
};

// (device workload, edge workload) for partition point k.
std::pair<double, double> split_workload(const ModelProfile& profile, int k);

double sinr(double power, double device_gain, double jammer_power, double jammer_gain, double noise);

DeviceMetrics evaluate_device(const Scenario& scenario, int n, const DeviceDecision& decision);

struct SystemMetrics {
    double rda = 0.0;
    std::vector<DeviceMetrics> per_device;
    bool capacity_ok = false;
    bool feasible = false;
};

SystemMetrics system_rda(const Scenario& scenario, std::span<const DeviceDecision> decisions);

// Decisions assembled from parallel vectors.
std::vector<DeviceDecision> make_decisions(std::span<const int> partitions,
                                           std::span<const double> powers,
                                           std::span<const double> allocs);

}  // namespace aci
