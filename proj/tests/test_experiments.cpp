#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aci/errors.hpp"
#include "aci/experiments.hpp"

using namespace aci;
namespace fs = std::filesystem;

namespace {

SweepSpec small_spec(SweepParameter param) {
    SweepSpec spec;
    spec.parameter = param;
    spec.values = param == SweepParameter::jammer_power ? std::vector<double>{0.0, 1.0, 2.0}
                                                        : std::vector<double>{1e9, 3e9};
    spec.n_scenarios = 2;
    spec.schemes = all_schemes();
    spec.base.params.n_devices = 4;
    spec.base.profile = default_profile();
    spec.base.accuracy = default_accuracy_model();
    spec.ao.qga.population = 20;
    spec.ao.qga.generations = 20;
    spec.master_seed = 5;
    return spec;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("aci_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("default grids") {
    CHECK(default_sweep_values(SweepParameter::device_compute).size() == 7);
    CHECK(default_sweep_values(SweepParameter::device_compute).front() == 1e9);
    CHECK(default_sweep_values(SweepParameter::jammer_power) ==
          std::vector<double>{0.0, 0.25, 0.5, 1.0, 1.5, 2.0});
    CHECK(parse_sweep_parameter("jammer_power") == SweepParameter::jammer_power);
    CHECK_FALSE(parse_sweep_parameter("bandwidth").has_value());
}

TEST_CASE("row layout and count") {
    const SweepSpec spec = small_spec(SweepParameter::jammer_power);
    const SweepResult r = run_sweep(spec);
    REQUIRE(r.rows.size() == 3 * 2 * 5);
    std::size_t i = 0;
    for (double v : spec.values) {
        for (int rep = 0; rep < 2; ++rep) {
            for (Scheme sc : spec.schemes) {
                CHECK(r.rows[i].value == v);
                CHECK(r.rows[i].scenario_id == rep);
                CHECK(r.rows[i].scheme == to_string(sc));
                CHECK(r.rows[i].seed == replicate_seed(5, rep));
                CHECK(r.rows[i].error.empty());
                ++i;
            }
        }
    }
}

TEST_CASE("local computing rows do not move with jamming power") {
    const SweepResult r = run_sweep(small_spec(SweepParameter::jammer_power));
    for (const auto& a : r.rows) {
        for (const auto& b : r.rows) {
            if (a.scheme == "lc" && b.scheme == "lc" && a.scenario_id == b.scenario_id) {
                CHECK(a.rda == b.rda);
                CHECK(a.total_delay == b.total_delay);
                CHECK(a.avg_accuracy == b.avg_accuracy);
            }
        }
    }
}

TEST_CASE("sweeps are byte-identical regardless of worker count") {
    SweepSpec spec = small_spec(SweepParameter::device_compute);
    spec.workers = 1;
    const std::string one = to_csv(run_sweep(spec));
    spec.workers = 3;
    const std::string three = to_csv(run_sweep(spec));
    CHECK(one == three);
}

TEST_CASE("adding a sweep point leaves existing rows alone") {
    SweepSpec spec = small_spec(SweepParameter::jammer_power);
    spec.schemes = {Scheme::proposed};
    const SweepResult base = run_sweep(spec);
    spec.values = {0.0, 0.5, 1.0, 2.0};
    const SweepResult more = run_sweep(spec);
    for (const auto& row : base.rows) {
        bool found = false;
        for (const auto& other : more.rows) found = found || other == row;
        CHECK(found);
    }
}

TEST_CASE("CSV round trip and aggregates") {
    const fs::path dir = scratch("csv");
    SweepResult r = run_sweep(small_spec(SweepParameter::device_compute));
    r.rows[0].scheme = "odd,\"name\"";
    write_csv(r, (dir / "out.csv").string());
    std::ifstream in(dir / "out.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "value,scenario_id,seed,scheme,rda,total_delay,avg_accuracy,feasible,wall_time\r");
    SweepResult back = read_csv((dir / "out.csv").string());
    back.parameter = r.parameter;
    REQUIRE(back.rows.size() == r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        SweepRow expected = r.rows[i];
        expected.error.clear();
        CHECK(back.rows[i] == expected);
    }
    const auto a = aggregate(r);
    const auto b = aggregate(back);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mean_rda == b[i].mean_rda);
        CHECK(a[i].sd_delay == b[i].sd_delay);
        CHECK(a[i].feasible_fraction == b[i].feasible_fraction);
    }
    fs::remove_all(dir);
}

TEST_CASE("aggregate means and deviations") {
    SweepResult r;
    for (int i = 0; i < 4; ++i) {
        SweepRow row;
        row.value = 1.0;
        row.scenario_id = i;
        row.scheme = "lc";
        row.rda = i;
        row.feasible = i % 2 == 0;
        r.rows.push_back(row);
    }
    const auto a = aggregate(r);
    REQUIRE(a.size() == 1);
    CHECK(a[0].count == 4);
    CHECK(a[0].mean_rda == 1.5);
    CHECK(a[0].sd_rda == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(a[0].feasible_fraction == 0.5);
}

TEST_CASE("plots: one SVG per metric") {
    const fs::path dir = scratch("plots");
    const auto paths = render_plots(run_sweep(small_spec(SweepParameter::jammer_power)), dir.string());
    CHECK(paths.size() == 3);
    for (const char* name : {"rda.svg", "total_delay.svg", "avg_accuracy.svg"}) {
        std::ifstream in(dir / name);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str().find("<svg") == 0);
        CHECK(ss.str().find("polyline") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("invalid specs fail before any work") {
    SweepSpec spec = small_spec(SweepParameter::jammer_power);
    spec.schemes.clear();
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    spec = small_spec(SweepParameter::jammer_power);
    spec.values = {2.0, 1.0};
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    spec.values.clear();
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    spec = small_spec(SweepParameter::jammer_power);
    spec.n_scenarios = 0;
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    CHECK_THROWS(write_csv(SweepResult{}, "/tmp/never.csv"));
    CHECK_FALSE(fs::exists("/tmp/never.csv"));
}

TEST_CASE("failed solves become NaN rows") {
    SweepSpec spec = small_spec(SweepParameter::jammer_power);
    spec.ao.max_iters = 0;  // rejected by the solver, not by the sweep
    spec.schemes = {Scheme::proposed, Scheme::lc};
    const SweepResult r = run_sweep(spec);
    for (const auto& row : r.rows) {
        if (row.scheme == "proposed") {
            CHECK(std::isnan(row.rda));
            CHECK_FALSE(row.error.empty());
        } else {
            CHECK(std::isfinite(row.rda));
        }
    }
}

TEST_CASE("manifest records the resolved spec") {
    const auto m = sweep_manifest(small_spec(SweepParameter::jammer_power));
    CHECK(m["parameter"] == "jammer_power");
    CHECK(m["n_scenarios"] == 2);
    CHECK(m["schemes"].size() == 5);
    CHECK(m.contains("version"));
    CHECK(m["qga"]["population"] == 20);
}
