#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "aci/ao.hpp"
#include "aci/scenario.hpp"

namespace aci {

// Everything needed to draw fresh random scenarios of one configuration.
struct ScenarioTemplate {
    GenerationParams params;
    SystemConstants constants;
    ModelProfile profile;
    AccuracyModel accuracy;

    Scenario generate(std::uint64_t seed) const {
        return generate_scenario(params, constants, profile, accuracy, seed);
    }
};

struct RunConfig {
    Scenario scenario;
    // Present when the file describes random placement rather than fixed devices.
    std::optional<ScenarioTemplate> generator;
    AoOptions ao;
    double ftp_power = 0.0;  // W; 0 means P_max
};

// Full default setup: 10 random devices in a 100 m square, f_n = 2 GHz,
// F_max = 20 GHz, B = 1 MHz, P_max = 0.23 W, p_j = 1 W, sigma^2 = -110 dBm,
// zeta = 1e-28, E_max = 1 J, xi = 0.5, Acc in [0.80, 0.95], T_max = 2 s.
nlohmann::json default_config_json();

// Parses a config document. `seed_override` replaces the document's seed
// (which otherwise defaults to 0) before any random placement.
RunConfig run_config_from_json(const nlohmann::json& doc,
                               std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig load_run_config(const std::string& path,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

Scenario load_scenario(const std::string& path);

// Explicit form: every position, gain and parameter written out.
nlohmann::json scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

nlohmann::json accuracy_model_to_json(const AccuracyModel& model);
nlohmann::json profile_to_json(const ModelProfile& profile);
nlohmann::json qga_config_to_json(const QgaConfig& config);
nlohmann::json solution_to_json(const Solution& solution);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& doc, const std::string& path);

}  // namespace aci
