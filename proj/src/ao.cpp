#include "aci/ao.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aci {

void finalize_solution(const Scenario& scenario, const Penalties& penalties, Solution& sol) {
    const auto decisions = make_decisions(sol.partitions, sol.powers, sol.allocations);
    SystemMetrics sys = system_rda(scenario, decisions);
    sol.rda = sys.rda;
    sol.objective = fitness(scenario, sol.partitions, sol.powers, sol.allocations, penalties);
    sol.feasible = sys.feasible;
    sol.per_device = std::move(sys.per_device);

    sol.diagnostics.clear();
    if (!sys.capacity_ok) sol.diagnostics.push_back("edge allocations exceed edge_capacity");
    for (std::size_t n = 0; n < sol.per_device.size(); ++n) {
        const DeviceMetrics& m = sol.per_device[n];
        const std::string who = "device " + std::to_string(n) + " (k=" +
                                std::to_string(sol.partitions[n]) + ")";
        if (!m.accuracy_ok) sol.diagnostics.push_back(who + ": accuracy below acc_min");
        if (!m.energy_ok) sol.diagnostics.push_back(who + ": energy budget exceeded");
        if (!m.power_ok) sol.diagnostics.push_back(who + ": transmit power outside (0, P_max]");
        if (!m.alloc_ok) sol.diagnostics.push_back(who + ": no edge compute allocated");
    }
}

namespace {

double objective(const Scenario& s, const Penalties& pen, const std::vector<int>& k,
                 const std::vector<double>& p, const std::vector<double>& f) {
    return fitness(s, k, p, f, pen);
}

}  // namespace

Solution solve(const Scenario& scenario, const AoOptions& options, const Solution* warm_start) {
    scenario.validate();
    options.qga.validate();
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    const std::size_t n = scenario.devices.size();
    const int K = scenario.num_points();
    const Penalties& pen = options.qga.penalties;
    const double start_power =
        options.power_mode == PowerMode::fixed && options.fixed_power > 0.0 ? options.fixed_power
                                                                            : scenario.constants.max_power;
    if (options.partition_mode == PartitionMode::fixed &&
        (options.fixed_partition < 0 || options.fixed_partition > K)) {
        throw std::invalid_argument("fixed_partition outside [0, K]");
    }

    Solution sol;
    if (warm_start != nullptr) {
        if (warm_start->partitions.size() != n || warm_start->powers.size() != n ||
            warm_start->allocations.size() != n) {
            throw std::invalid_argument("warm start does not match the scenario");
        }
        sol.partitions = warm_start->partitions;
        sol.powers = warm_start->powers;
        sol.allocations = warm_start->allocations;
    } else {
        const int k0 = options.partition_mode == PartitionMode::fixed ? options.fixed_partition : K;
        sol.partitions.assign(n, k0);
        sol.powers.assign(n, start_power);
        sol.allocations = allocate_edge_compute(scenario, sol.partitions);
    }
    if (options.power_mode == PowerMode::fixed) sol.powers.assign(n, start_power);

    auto& parts = sol.partitions;
    auto& P = sol.powers;
    auto& F = sol.allocations;
    double current = objective(scenario, pen, parts, P, F);
    sol.history.push_back(current);

    const AllocationProvider allocator = [&scenario](std::span<const int> candidate) {
        return allocate_edge_compute(scenario, candidate);
    };

    for (int it = 1; it <= options.max_iters; ++it) {
        const double before = current;

        // Edge compute allocation.
        {
            std::vector<double> candidate = allocate_edge_compute(scenario, parts);
            const double value = objective(scenario, pen, parts, P, candidate);
            if (value >= current) {
                F = std::move(candidate);
                current = value;
            }
        }

        // Transmit power.
        if (options.power_mode == PowerMode::optimize) {
            PowerSolution ps = solve_power(scenario, parts, P);
            const double value = objective(scenario, pen, parts, ps.powers, F);
            if (value >= current) {
                P = std::move(ps.powers);
                current = value;
            }
            sol.power_reports = std::move(ps.reports);
        }

        // Partitioning; the search sees the allocator's response to each candidate.
        if (options.partition_mode != PartitionMode::fixed) {
            QgaConfig cfg = options.qga;
            cfg.seed = derive_seed(options.qga.seed, {static_cast<std::uint64_t>(it)});
            const PartitionSearchResult found =
                options.partition_mode == PartitionMode::qga
                    ? run_qga(scenario, P, allocator, cfg, parts)
                    : run_ga(scenario, P, allocator, GaConfig::mirroring(cfg), parts);
            std::vector<double> alloc = allocate_edge_compute(scenario, found.partitions);
            const double value = objective(scenario, pen, found.partitions, P, alloc);
            if (value >= current) {
                parts = found.partitions;
                F = std::move(alloc);
                current = value;
            }
        }

        sol.history.push_back(current);
        sol.iterations = it;
        const double gain = (current - before) / std::max(std::abs(before), 1e-12);
        if (!(gain >= options.rel_tol)) break;
    }

    finalize_solution(scenario, pen, sol);
    return sol;
}

}  // namespace aci
