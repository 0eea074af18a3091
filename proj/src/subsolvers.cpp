#include "aci/subsolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "aci/metrics.hpp"

namespace aci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPowerTol = 1e-9;      // W, bisection width
constexpr double kInitialBracket = 1e-6;  // W
constexpr double kBracketCeiling = 1e30;  // W, beyond this the root is reported as +inf
}  // namespace

std::vector<double> allocate_edge_compute(const Scenario& scenario, std::span<const int> partitions) {
    if (partitions.size() != scenario.devices.size()) {
        throw std::invalid_argument("one partition per device required");
    }
    std::vector<double> roots(partitions.size(), 0.0);
    double sum = 0.0;
    for (std::size_t n = 0; n < partitions.size(); ++n) {
        const double edge = split_workload(scenario.profile, partitions[n]).second;
        if (edge > 0.0) {
            roots[n] = std::sqrt(edge);
            sum += roots[n];
        }
    }
    std::vector<double> alloc(partitions.size(), 0.0);
    if (sum == 0.0) return alloc;
    const double cap = scenario.constants.edge_capacity;
    for (std::size_t n = 0; n < partitions.size(); ++n) alloc[n] = cap * (roots[n] / sum);
    return alloc;
}

double kkt_residual(const Scenario& scenario, std::span<const int> partitions,
                    std::span<const double> allocs) {
    if (partitions.size() != allocs.size()) throw std::invalid_argument("length mismatch");
    const double xi = scenario.constants.weight;
    const double tmax = scenario.constants.max_delay;
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t n = 0; n < partitions.size(); ++n) {
        const double edge = split_workload(scenario.profile, partitions[n]).second;
        if (edge == 0.0) continue;
        if (!(allocs[n] > 0.0)) {
            throw std::invalid_argument("device " + std::to_string(n) +
                                        " has edge work but no allocation");
        }
        const double multiplier = xi * edge / (tmax * allocs[n] * allocs[n]);
        lo = std::min(lo, multiplier);
        hi = std::max(hi, multiplier);
    }
    if (hi <= 0.0) return 0.0;  // no edge work, or xi = 0
    return (hi - lo) / hi;
}

std::string_view to_string(PowerStatus s) {
    switch (s) {
        case PowerStatus::optimal: return "optimal";
        case PowerStatus::vacuous_accuracy: return "vacuous-accuracy";
        case PowerStatus::infeasible_accuracy: return "infeasible-accuracy";
        case PowerStatus::infeasible_energy: return "infeasible-energy";
        case PowerStatus::not_transmitting: return "not-transmitting";
    }
    return "unknown";
}

double energy_slack(const Scenario& scenario, int n, int k, double power) {
    const auto idx = static_cast<std::size_t>(n);
    const Device& dev = scenario.devices.at(idx);
    const SystemConstants& c = scenario.constants;
    const double local_energy =
        c.chip_coeff * split_workload(scenario.profile, k).first * dev.local_compute * dev.local_compute;
    const double snr_per_watt = scenario.channel.device_gains[idx] / scenario.interference();
    return (c.energy_budget - local_energy) * dev.bandwidth * std::log2(1.0 + power * snr_per_watt) -
           power * scenario.profile.ifd_sizes[static_cast<std::size_t>(k)];
}

namespace {

PowerSolveReport solve_device(const Scenario& scenario, int n, int k) {
    const auto idx = static_cast<std::size_t>(n);
    const Device& dev = scenario.devices[idx];
    const SystemConstants& c = scenario.constants;
    const double bits = scenario.profile.ifd_sizes[static_cast<std::size_t>(k)];

    PowerSolveReport r;
    if (k == scenario.num_points() || bits == 0.0) {
        r.status = PowerStatus::not_transmitting;
        return r;
    }

    const double floor = scenario.interference();
    const double gain = scenario.channel.device_gains[idx];
    const double sinr_lo = min_sinr_for_accuracy(scenario.accuracy_model, k, c.acc_min);
    r.p_lo = std::max(0.0, sinr_lo * floor / gain);

    const double local_energy = c.chip_coeff * split_workload(scenario.profile, k).first *
                                dev.local_compute * dev.local_compute;
    const double spare = c.energy_budget - local_energy;
    // g'(0) = spare * B * (h / D) / ln 2 - S
    const double slope0 = spare * dev.bandwidth * (gain / floor) / std::log(2.0) - bits;
    if (spare < 0.0 || slope0 <= 0.0) {
        r.p_energy_root = 0.0;
        r.status = PowerStatus::infeasible_energy;
        return r;
    }

    // g is concave with g(0) = 0 and g'(0) > 0: grow the bracket until g < 0,
    // then bisect keeping `lo` on the feasible side.
    auto g = [&](double p) { return energy_slack(scenario, n, k, p); };
    double lo = 0.0;
    double hi = kInitialBracket;
    while (g(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kBracketCeiling) break;
    }
    if (hi > kBracketCeiling) {
        r.p_energy_root = kInf;
    } else {
        for (int it = 0; it < 400 && hi - lo > kPowerTol; ++it) {
            const double mid = lo + (hi - lo) / 2.0;
            if (mid <= lo || mid >= hi) break;
            (g(mid) >= 0.0 ? lo : hi) = mid;
        }
        r.p_energy_root = lo;
    }

    r.p_star = std::min(c.max_power, r.p_energy_root);
    if (r.p_star > 0.0 && r.p_lo <= r.p_star) {
        r.status = std::isinf(sinr_lo) ? PowerStatus::vacuous_accuracy : PowerStatus::optimal;
    } else {
        r.status = PowerStatus::infeasible_accuracy;
    }
    return r;
}

}  // namespace

PowerSolution solve_power(const Scenario& scenario, std::span<const int> partitions,
                          std::span<const double> previous) {
    if (partitions.size() != scenario.devices.size() || previous.size() != partitions.size()) {
        throw std::invalid_argument("one partition and one previous power per device required");
    }
    PowerSolution out;
    out.powers.assign(previous.begin(), previous.end());
    out.reports.reserve(partitions.size());
    for (std::size_t n = 0; n < partitions.size(); ++n) {
        PowerSolveReport r = solve_device(scenario, static_cast<int>(n), partitions[n]);
        if (r.status == PowerStatus::optimal || r.status == PowerStatus::vacuous_accuracy) {
            out.powers[n] = r.p_star;
        }
        out.reports.push_back(r);
    }
    return out;
}

}  // namespace aci
