// aci: solve, sweep, fit-accuracy and profile-info front end.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "aci/accuracy.hpp"
#include "aci/baselines.hpp"
#include "aci/config.hpp"
#include "aci/errors.hpp"
#include "aci/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInfeasible = 2;

std::vector<aci::Scheme> parse_scheme_list(const std::vector<std::string>& names) {
    std::vector<aci::Scheme> out;
    for (const auto& name : names) {
        auto s = aci::parse_scheme(name);
        if (!s) throw aci::ValidationError("schemes", "unknown scheme '" + name + "'");
        out.push_back(*s);
    }
    return out;
}

struct SolveArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string scheme = "proposed";
    std::string out;
};

int run_solve(const SolveArgs& a) {
    const auto scheme = aci::parse_scheme(a.scheme);
    if (!scheme) throw aci::ValidationError("scheme", "unknown scheme '" + a.scheme + "'");
    aci::RunConfig cfg = aci::load_run_config(a.config, a.seed);
    const aci::Solution sol = aci::solve_scheme(*scheme, cfg.scenario, cfg.ao, cfg.ftp_power);

    nlohmann::json doc = aci::solution_to_json(sol);
    doc["scenario"] = aci::scenario_to_json(cfg.scenario);
    if (!a.out.empty()) {
        aci::write_json_file(doc, a.out);
    }
    std::printf("scheme %s  rda %.6f  objective %.6f  feasible %s  iterations %d\n", sol.scheme.c_str(),
                sol.rda, sol.objective, sol.feasible ? "yes" : "no", sol.iterations);
    std::printf("%4s %4s %10s %12s %10s %10s %8s\n", "dev", "k", "power", "edge_alloc", "delay", "energy",
                "acc");
    for (std::size_t n = 0; n < sol.per_device.size(); ++n) {
        const auto& m = sol.per_device[n];
        std::printf("%4zu %4d %10.4g %12.4g %10.4g %10.4g %8.4f\n", n, sol.partitions[n], sol.powers[n],
                    sol.allocations[n], m.total_delay(), m.total_energy(), m.accuracy);
    }
    for (const auto& d : sol.diagnostics) std::fprintf(stderr, "note: %s\n", d.c_str());
    return sol.feasible ? kOk : kInfeasible;
}

struct SweepArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string param;
    std::vector<double> values;
    int reps = 10;
    std::vector<std::string> schemes;
    std::string out_dir;
    bool plots = false;
    bool timing = false;
    int workers = 0;
};

int run_sweep_cmd(const SweepArgs& a) {
    const auto param = aci::parse_sweep_parameter(a.param);
    if (!param) throw aci::ValidationError("param", "expected device_compute or jammer_power");
    const aci::RunConfig cfg = aci::load_run_config(a.config, a.seed);
    if (!cfg.generator) {
        throw aci::ValidationError("generate", "sweeps need a config with random placement");
    }
    aci::SweepSpec spec;
    spec.parameter = *param;
    spec.values = a.values.empty() ? aci::default_sweep_values(*param) : a.values;
    spec.n_scenarios = a.reps;
    spec.schemes = a.schemes.empty() ? aci::all_schemes() : parse_scheme_list(a.schemes);
    spec.base = *cfg.generator;
    spec.ao = cfg.ao;
    spec.ftp_power = cfg.ftp_power;
    spec.master_seed = cfg.scenario.seed;
    spec.record_wall_time = a.timing;
    spec.workers = a.workers;
    spec.validate();

    std::filesystem::create_directories(a.out_dir);
    const aci::SweepResult result = aci::run_sweep(spec);
    const auto dir = std::filesystem::path(a.out_dir);
    aci::write_csv(result, (dir / "results.csv").string());
    aci::write_json_file(aci::sweep_manifest(spec), (dir / "manifest.json").string());
    if (a.plots) aci::render_plots(result, a.out_dir);

    std::size_t failed = 0;
    for (const auto& r : result.rows) {
        if (!r.error.empty()) {
            ++failed;
            std::fprintf(stderr, "row value=%g replicate=%d scheme=%s failed: %s\n", r.value, r.scenario_id,
                         r.scheme.c_str(), r.error.c_str());
        }
    }
    std::printf("%-10s %12s %10s %12s %10s %9s\n", "scheme", "value", "mean_rda", "mean_delay", "mean_acc",
                "feasible");
    for (const auto& g : aci::aggregate(result)) {
        std::printf("%-10s %12.4g %10.5f %12.5f %10.5f %9.2f\n", g.scheme.c_str(), g.value, g.mean_rda,
                    g.mean_delay, g.mean_accuracy, g.feasible_fraction);
    }
    std::printf("%zu rows written to %s\n", result.rows.size(), (dir / "results.csv").c_str());
    return failed == 0 ? kOk : kInvalid;
}

struct FitArgs {
    std::string samples;
    int k = 0;
    std::string out;
};

int run_fit(const FitArgs& a) {
    const auto samples = aci::read_accuracy_samples(a.samples);
    const aci::FitResult fit = aci::fit_accuracy(samples, a.k);
    const nlohmann::json doc = {{"k", a.k},
                                {"A", fit.params.amplitude},
                                {"tau", fit.params.slope},
                                {"phi", fit.params.midpoint},
                                {"b", fit.params.offset},
                                {"rmse", fit.rmse},
                                {"iterations", fit.iterations}};
    if (!a.out.empty()) aci::write_json_file(doc, a.out);
    std::cout << doc.dump(2) << '\n';
    return kOk;
}

int run_profile_info(const std::string& config) {
    const aci::RunConfig cfg = aci::load_run_config(config);
    const aci::ModelProfile& p = cfg.scenario.profile;
    const double total = p.total_workload();
    std::printf("%3s  %-14s %14s %14s %14s %14s\n", "k", "layer", "workload", "device_load", "edge_load",
                "ifd_bits");
    double device = 0.0;
    for (int k = 0; k <= p.num_points(); ++k) {
        device += p.layer_workloads[k];
        const std::string label = k < static_cast<int>(p.labels.size()) ? p.labels[k] : "";
        std::printf("%3d  %-14s %14.6g %14.6g %14.6g %14.6g\n", k, label.c_str(), p.layer_workloads[k], device,
                    total - device, k < static_cast<int>(p.ifd_sizes.size()) ? p.ifd_sizes[k] : 0.0);
    }
    std::printf("total workload %.6g cycles, %d partition points\n", total, p.num_points() + 1);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anti-jamming device-edge collaborative inference optimizer"};
    app.set_version_flag("--version", std::string(ACI_VERSION));
    app.require_subcommand(1, 1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Optimize one scenario");
    solve_cmd->add_option("--config", solve.config, "Config JSON")->required();
    solve_cmd->add_option("--seed", solve.seed, "Seed overriding the config's");
    solve_cmd->add_option("--scheme", solve.scheme, "proposed, lc, esc, ftp or ga");
    solve_cmd->add_option("--out", solve.out, "Write solution JSON here");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Seeded parameter sweep over all schemes");
    sweep_cmd->add_option("--config", sweep.config, "Config JSON")->required();
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed overriding the config's");
    sweep_cmd->add_option("--param", sweep.param, "device_compute or jammer_power")->required();
    sweep_cmd->add_option("--values", sweep.values, "Sweep values (comma separated)")->delimiter(',');
    sweep_cmd->add_option("--reps", sweep.reps, "Scenario replicates per value");
    sweep_cmd->add_option("--schemes", sweep.schemes, "Schemes (comma separated)")->delimiter(',');
    sweep_cmd->add_option("--out-dir", sweep.out_dir, "Output directory")->required();
    sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (default ACI_WORKERS or all cores)");
    sweep_cmd->add_flag("--plots", sweep.plots, "Render SVG plots");
    sweep_cmd->add_flag("--timing", sweep.timing, "Record wall time per row");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit-accuracy", "Fit the logistic accuracy curve of one point");
    fit_cmd->add_option("--samples", fit.samples, "CSV with k,sinr,accuracy")->required();
    fit_cmd->add_option("--k", fit.k, "Partition point")->required();
    fit_cmd->add_option("--out", fit.out, "Write fitted parameters here");

    std::string profile_config;
    auto* profile_cmd = app.add_subcommand("profile-info", "Print the model profile table");
    profile_cmd->add_option("--config", profile_config, "Config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        CLI::App* culprit = &app;
        for (CLI::App* sub : app.get_subcommands()) culprit = sub;
        std::cerr << culprit->help();
        return kInvalid;
    }

    try {
        if (*solve_cmd) return run_solve(solve);
        if (*sweep_cmd) return run_sweep_cmd(sweep);
        if (*fit_cmd) return run_fit(fit);
        if (*profile_cmd) return run_profile_info(profile_config);
    } catch (const aci::ValidationError& e) {
        std::cerr << "invalid " << e.field() << ": " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}
