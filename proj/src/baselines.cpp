#include "aci/baselines.hpp"

#include "aci/subsolvers.hpp"

namespace aci {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::proposed: return "proposed";
        case Scheme::lc: return "lc";
        case Scheme::esc: return "esc";
        case Scheme::ftp: return "ftp";
        case Scheme::ga: return "ga";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (Scheme s : all_schemes()) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes{Scheme::proposed, Scheme::lc, Scheme::esc, Scheme::ftp,
                                             Scheme::ga};
    return schemes;
}

Solution solve_lc(const Scenario& scenario, const Penalties& penalties) {
    scenario.validate();
    const std::size_t n = scenario.devices.size();
    Solution sol;
    sol.scheme = "lc";
    sol.partitions.assign(n, scenario.num_points());
    sol.powers.assign(n, 0.0);
    sol.allocations.assign(n, 0.0);
    finalize_solution(scenario, penalties, sol);
    sol.history.push_back(sol.objective);
    return sol;
}

Solution solve_esc(const Scenario& scenario, const AoOptions& options) {
    AoOptions o = options;
    o.partition_mode = PartitionMode::fixed;
    o.fixed_partition = 0;
    Solution sol = solve(scenario, o);
    sol.scheme = "esc";
    return sol;
}

Solution solve_ftp(const Scenario& scenario, double fixed_power, const AoOptions& options) {
    AoOptions o = options;
    o.power_mode = PowerMode::fixed;
    o.fixed_power = fixed_power > 0.0 ? fixed_power : scenario.constants.max_power;
    Solution sol = solve(scenario, o);
    sol.scheme = "ftp";
    return sol;
}

Solution solve_ga(const Scenario& scenario, const AoOptions& options) {
    AoOptions o = options;
    o.partition_mode = PartitionMode::ga;
    Solution sol = solve(scenario, o);
    sol.scheme = "ga";
    return sol;
}

Solution solve_proposed(const Scenario& scenario, const AoOptions& options) {
    AoOptions o = options;
    o.power_mode = PowerMode::optimize;
    o.partition_mode = PartitionMode::qga;
    Solution sol = solve(scenario, o);
    sol.scheme = "proposed";
    return sol;
}

Solution solve_scheme(Scheme scheme, const Scenario& scenario, const AoOptions& options,
                      double ftp_power) {
    switch (scheme) {
        case Scheme::proposed: return solve_proposed(scenario, options);
        case Scheme::lc: return solve_lc(scenario, options.qga.penalties);
        case Scheme::esc: return solve_esc(scenario, options);
        case Scheme::ftp: return solve_ftp(scenario, ftp_power, options);
        case Scheme::ga: return solve_ga(scenario, options);
    }
    return {};
}

}  // namespace aci
