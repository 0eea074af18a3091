#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aci/baselines.hpp"
#include "aci/config.hpp"

namespace aci {

enum class SweepParameter { device_compute, jammer_power };

std::string_view to_string(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

// f_n in {1.0, ..., 4.0} GHz or p_j in {0, 0.25, 0.5, 1, 1.5, 2} W.
std::vector<double> default_sweep_values(SweepParameter p);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::device_compute;
    std::vector<double> values;
    int n_scenarios = 10;
    std::vector<Scheme> schemes;
    ScenarioTemplate base;
    AoOptions ao;
    double ftp_power = 0.0;
    std::uint64_t master_seed = 0;
    bool record_wall_time = false;  // off keeps CSVs byte-reproducible
    int workers = 0;                // 0: ACI_WORKERS or hardware concurrency

    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    int scenario_id = 0;
    std::uint64_t seed = 0;
    std::string scheme;
    double rda = 0.0;
    double total_delay = 0.0;   // s, summed over devices
    double avg_accuracy = 0.0;  // mean over devices
    bool feasible = false;
    double wall_time = 0.0;  // s
    std::string error;       // non-empty when the solve threw; not written to CSV

    bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::device_compute;
    std::vector<SweepRow> rows;
};

// Placement seed of replicate r; shared by every sweep value so each
// replicate sees the same geometry at every point.
std::uint64_t replicate_seed(std::uint64_t master, int replicate);
// Solver seed for (replicate, value), keyed on the value itself so inserting
// sweep points leaves existing rows untouched.
std::uint64_t solver_seed(std::uint64_t master, int replicate, double value);

// Applies a sweep value to a scenario.
void apply_sweep_value(Scenario& scenario, SweepParameter parameter, double value);

// Rows ordered by (value, replicate, scheme) in spec order.
SweepResult run_sweep(const SweepSpec& spec);

struct Aggregate {
    std::string scheme;
    double value = 0.0;
    int count = 0;
    double mean_rda = 0.0, sd_rda = 0.0;
    double mean_delay = 0.0, sd_delay = 0.0;
    double mean_accuracy = 0.0, sd_accuracy = 0.0;
    double feasible_fraction = 0.0;
};

// One entry per (value, scheme); sd is the sample standard deviation.
std::vector<Aggregate> aggregate(const SweepResult& result);

// Header "value,scenario_id,seed,scheme,rda,total_delay,avg_accuracy,feasible,wall_time";
// reals printed with 17 significant digits.
void write_csv(const SweepResult& result, const std::string& path);
std::string to_csv(const SweepResult& result);
SweepResult read_csv(const std::string& path);

// rda.svg, total_delay.svg and avg_accuracy.svg in `dir`; returns the paths.
std::vector<std::string> render_plots(const SweepResult& result, const std::string& dir);

nlohmann::json sweep_manifest(const SweepSpec& spec);

}  // namespace aci
