#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "aci/scenario.hpp"

namespace aci {

// Edge compute split minimising sum_n L^E_n / f_n subject to sum_n f_n <= F_max:
// f_n = F_max * sqrt(L^E_n) / sum_m sqrt(L^E_m). Devices without edge work get 0.
std::vector<double> allocate_edge_compute(const Scenario& scenario, std::span<const int> partitions);

// Spread of the per-device stationarity multipliers xi * L^E_n / (T_max f_n^2),
// relative to the largest one. Zero exactly when all devices with edge work
// share a common multiplier. Throws if such a device has no allocation.
double kkt_residual(const Scenario& scenario, std::span<const int> partitions,
                    std::span<const double> allocs);

enum class PowerStatus {
    optimal,
    vacuous_accuracy,  // accuracy floor holds at any SINR; energy alone decides
    infeasible_accuracy,
    infeasible_energy,
    not_transmitting,
};

std::string_view to_string(PowerStatus s);

inline bool power_feasible(PowerStatus s) {
    return s == PowerStatus::optimal || s == PowerStatus::vacuous_accuracy ||
           s == PowerStatus::not_transmitting;
}

struct PowerSolveReport {
    double p_lo = 0.0;           // lowest power meeting the accuracy floor
    double p_energy_root = 0.0;  // positive root of the energy constraint, +inf if none found
    double p_star = 0.0;
    PowerStatus status = PowerStatus::not_transmitting;
};

// Energy-constraint slack (E_max - E^D) B log2(1 + p h / D) - p S; concave in p.
double energy_slack(const Scenario& scenario, int n, int k, double power);

struct PowerSolution {
    std::vector<double> powers;
    std::vector<PowerSolveReport> reports;
};

// Per-device maximal power subject to the accuracy floor, the energy budget
// and P_max. Devices that cannot meet both keep `previous[n]`.
PowerSolution solve_power(const Scenario& scenario, std::span<const int> partitions,
                          std::span<const double> previous);

}  // namespace aci
