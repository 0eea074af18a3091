#pragma once

#include <string>
#include <vector>

#include "aci/metrics.hpp"
#include "aci/qga.hpp"
#include "aci/subsolvers.hpp"

namespace aci {

struct Solution {
    std::string scheme;
    std::vector<int> partitions;
    std::vector<double> powers;
    std::vector<double> allocations;
    double rda = 0.0;        // unpenalised system objective
    double objective = 0.0;  // rda plus constraint penalties; what the blocks maximise
    std::vector<DeviceMetrics> per_device;
    bool feasible = false;
    int iterations = 0;
    // Objective at the start point followed by one entry per iteration.
    // Nondecreasing: a block result is only kept if it does not lower it.
    std::vector<double> history;
    std::vector<PowerSolveReport> power_reports;
    std::vector<std::string> diagnostics;
};

enum class PowerMode { optimize, fixed };
enum class PartitionMode { qga, ga, fixed };

struct AoOptions {
    int max_iters = 50;
    double rel_tol = 1e-4;
    QgaConfig qga;

    PowerMode power_mode = PowerMode::optimize;
    double fixed_power = 0.0;  // W; 0 means P_max
    PartitionMode partition_mode = PartitionMode::qga;
    int fixed_partition = 0;
};

// Fills rda, objective, per-device metrics, feasibility and diagnostics for
// the given decisions.
void finalize_solution(const Scenario& scenario, const Penalties& penalties, Solution& sol);

// Alternates edge allocation, transmit power and partitioning from the
// all-local start (or `warm_start`) until the relative objective gain of an
// iteration drops below rel_tol or max_iters is reached.
Solution solve(const Scenario& scenario, const AoOptions& options,
               const Solution* warm_start = nullptr);

}  // namespace aci
