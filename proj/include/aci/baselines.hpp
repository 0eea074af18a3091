#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "aci/ao.hpp"

namespace aci {

enum class Scheme { proposed, lc, esc, ftp, ga };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

// Every device runs the whole model; no transmission, no edge compute.
Solution solve_lc(const Scenario& scenario, const Penalties& penalties = {});

// Everything offloaded (k = 0); edge allocation and power still optimised.
Solution solve_esc(const Scenario& scenario, const AoOptions& options);

// Power pinned to `fixed_power` (P_max when <= 0); allocation and
// partitioning optimised as in the proposed scheme.
Solution solve_ftp(const Scenario& scenario, double fixed_power, const AoOptions& options);

// Proposed loop with the partitioning block replaced by a classical GA.
Solution solve_ga(const Scenario& scenario, const AoOptions& options);

Solution solve_proposed(const Scenario& scenario, const AoOptions& options);

// Dispatch by scheme. `ftp_power` only applies to Scheme::ftp.
Solution solve_scheme(Scheme scheme, const Scenario& scenario, const AoOptions& options,
                      double ftp_power = 0.0);

}  // namespace aci
