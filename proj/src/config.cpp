#include "aci/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "aci/errors.hpp"

namespace aci {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Typed field access with dotted paths in every error.

const json* find(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : obj.items()) {
        if (!allowed.contains(k)) {
            throw ValidationError(path.empty() ? k : path + "." + k, "unknown key");
        }
    }
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "expected a number");
    return j.get<double>();
}

void read_number(const json& obj, const char* key, const std::string& path, double& out) {
    if (const json* v = find(obj, key)) out = number_at(*v, path + "." + key);
}

void read_int(const json& obj, const char* key, const std::string& path, int& out) {
    if (const json* v = find(obj, key)) {
        if (!v->is_number_integer()) throw ValidationError(path + "." + key, "expected an integer");
        out = v->get<int>();
    }
}

void read_bool(const json& obj, const char* key, const std::string& path, bool& out) {
    if (const json* v = find(obj, key)) {
        if (!v->is_boolean()) throw ValidationError(path + "." + key, "expected true or false");
        out = v->get<bool>();
    }
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Point2 point_at(const json& j, const std::string& path) {
    const auto xy = number_list(j, path);
    if (xy.size() != 2) throw ValidationError(path, "expected [x, y]");
    return {xy[0], xy[1]};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

// ---------------------------------------------------------------------------

SystemConstants constants_from(const json* j) {
    SystemConstants c;
    if (j == nullptr) return c;
    const std::string path = "constants";
    require_object(*j, path);
    reject_unknown(*j, path, {"chip_coeff", "energy_budget", "max_power", "edge_capacity", "max_delay",
                              "weight", "acc_min", "acc_max"});
    read_number(*j, "chip_coeff", path, c.chip_coeff);
    read_number(*j, "energy_budget", path, c.energy_budget);
    read_number(*j, "max_power", path, c.max_power);
    read_number(*j, "edge_capacity", path, c.edge_capacity);
    read_number(*j, "max_delay", path, c.max_delay);
    read_number(*j, "weight", path, c.weight);
    read_number(*j, "acc_min", path, c.acc_min);
    read_number(*j, "acc_max", path, c.acc_max);
    return c;
}

json constants_json(const SystemConstants& c) {
    return {{"chip_coeff", c.chip_coeff},       {"energy_budget", c.energy_budget},
            {"max_power", c.max_power},         {"edge_capacity", c.edge_capacity},
            {"max_delay", c.max_delay},         {"weight", c.weight},
            {"acc_min", c.acc_min},             {"acc_max", c.acc_max}};
}

AccuracyModel accuracy_from(const json* j) {
    if (j == nullptr) return default_accuracy_model();
    const std::string path = "accuracy_model";
    if (j->is_string() && j->get<std::string>() == "default") return default_accuracy_model();
    require_object(*j, path);
    reject_unknown(*j, path, {"A", "tau", "phi", "b", "local_accuracy"});
    AccuracyModel m = default_accuracy_model();
    if (find(*j, "A") || find(*j, "tau") || find(*j, "phi") || find(*j, "b")) {
        for (const char* key : {"A", "tau", "phi", "b"}) {
            if (!find(*j, key)) throw ValidationError(path + "." + key, "required with the other curve parameters");
        }
        const auto a = number_list((*j)["A"], path + ".A");
        const auto tau = number_list((*j)["tau"], path + ".tau");
        const auto phi = number_list((*j)["phi"], path + ".phi");
        const auto b = number_list((*j)["b"], path + ".b");
        if (tau.size() != a.size() || phi.size() != a.size() || b.size() != a.size()) {
            throw ValidationError(path, "A, tau, phi and b must have equal length");
        }
        m.points.clear();
        for (std::size_t k = 0; k < a.size(); ++k) m.points.push_back({a[k], tau[k], phi[k], b[k]});
    }
    read_number(*j, "local_accuracy", path, m.local_accuracy);
    return m;
}

ModelProfile profile_from(const json* j) {
    if (j == nullptr) return default_profile();
    const std::string path = "profile";
    if (j->is_string() && j->get<std::string>() == "default") return default_profile();
    require_object(*j, path);
    reject_unknown(*j, path, {"default", "cycles_per_mac", "layer_workloads", "ifd_sizes", "labels"});
    const json* explicit_loads = find(*j, "layer_workloads");
    if (explicit_loads == nullptr) {
        double cycles_per_mac = 1.0;
        read_number(*j, "cycles_per_mac", path, cycles_per_mac);
        if (!(cycles_per_mac > 0.0)) throw ValidationError(path + ".cycles_per_mac", "must be > 0");
        return default_profile(cycles_per_mac);
    }
    ModelProfile p;
    p.layer_workloads = number_list(*explicit_loads, path + ".layer_workloads");
    const json* sizes = find(*j, "ifd_sizes");
    if (sizes == nullptr) throw ValidationError(path + ".ifd_sizes", "required with layer_workloads");
    p.ifd_sizes = number_list(*sizes, path + ".ifd_sizes");
    if (const json* labels = find(*j, "labels")) {
        if (!labels->is_array()) throw ValidationError(path + ".labels", "expected an array of strings");
        for (const auto& l : *labels) {
            if (!l.is_string()) throw ValidationError(path + ".labels", "expected an array of strings");
            p.labels.push_back(l.get<std::string>());
        }
    }
    return p;
}

QgaConfig qga_from(const json* j, std::uint64_t seed) {
    QgaConfig q;
    q.seed = seed;
    if (j == nullptr) return q;
    const std::string path = "qga";
    require_object(*j, path);
    reject_unknown(*j, path, {"population", "generations", "crossover_prob", "mutation_prob",
                              "penalty_accuracy", "penalty_energy", "theta_same_pi", "theta_diff_pi",
                              "quadrant_sign"});
    read_int(*j, "population", path, q.population);
    read_int(*j, "generations", path, q.generations);
    read_number(*j, "crossover_prob", path, q.crossover_prob);
    read_number(*j, "mutation_prob", path, q.mutation_prob);
    read_number(*j, "penalty_accuracy", path, q.penalties.accuracy);
    read_number(*j, "penalty_energy", path, q.penalties.energy);
    double same = q.theta_same / std::numbers::pi;
    double diff = q.theta_diff / std::numbers::pi;
    read_number(*j, "theta_same_pi", path, same);
    read_number(*j, "theta_diff_pi", path, diff);
    q.theta_same = same * std::numbers::pi;
    q.theta_diff = diff * std::numbers::pi;
    read_bool(*j, "quadrant_sign", path, q.quadrant_sign);
    return q;
}

double noise_from(const json* channel) {
    double noise = dbm_to_watts(-110.0);
    if (channel == nullptr) return noise;
    const json* w = find(*channel, "noise_power");
    const json* dbm = find(*channel, "noise_power_dbm");
    if (w && dbm) throw ValidationError("channel", "give noise_power or noise_power_dbm, not both");
    if (w) noise = number_at(*w, "channel.noise_power");
    if (dbm) noise = dbm_to_watts(number_at(*dbm, "channel.noise_power_dbm"));
    return noise;
}

std::uint64_t seed_from(const json& doc) {
    const json* s = find(doc, "seed");
    if (s == nullptr) return 0;
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0)) {
        throw ValidationError("seed", "expected a nonnegative integer");
    }
    return s->get<std::uint64_t>();
}

}  // namespace

json default_config_json() {
    return {
        {"seed", 0},
        {"generate", {{"n_devices", 10}, {"region_side", 100.0}, {"local_compute", 2e9}, {"bandwidth", 1e6}}},
        {"jammer", {{"power", 1.0}}},
        {"channel", {{"noise_power_dbm", -110.0}}},
        {"constants", constants_json(SystemConstants{})},
        {"accuracy_model", accuracy_model_to_json(default_accuracy_model())},
        {"profile", {{"default", true}, {"cycles_per_mac", 1.0}}},
        {"qga", qga_config_to_json(QgaConfig{})},
        {"ao", {{"max_iters", 50}, {"rel_tol", 1e-4}}},
    };
}

RunConfig run_config_from_json(const json& doc, std::optional<std::uint64_t> seed_override) {
    require_object(doc, "<root>");
    reject_unknown(doc, "", {"seed", "generate", "devices", "edge_position", "jammer", "channel",
                             "constants", "accuracy_model", "profile", "qga", "ao", "ftp_power"});
    const std::uint64_t seed = seed_override.value_or(seed_from(doc));

    RunConfig rc;
    const SystemConstants constants = constants_from(find(doc, "constants"));
    const AccuracyModel accuracy = accuracy_from(find(doc, "accuracy_model"));
    const ModelProfile profile = profile_from(find(doc, "profile"));

    const json* channel = find(doc, "channel");
    if (channel) {
        require_object(*channel, "channel");
        reject_unknown(*channel, "channel", {"noise_power", "noise_power_dbm", "device_gains", "jammer_gain"});
    }
    const double noise = noise_from(channel);

    const json* jammer = find(doc, "jammer");
    double jammer_power = 1.0;
    if (jammer) {
        require_object(*jammer, "jammer");
        reject_unknown(*jammer, "jammer", {"power", "position"});
        read_number(*jammer, "power", "jammer", jammer_power);
    }

    const json* gen = find(doc, "generate");
    const json* devices = find(doc, "devices");
    if (gen && devices) throw ValidationError("devices", "give either devices or generate, not both");
    if (!gen && !devices) throw ValidationError("devices", "config needs devices[] or a generate block");

    if (gen) {
        require_object(*gen, "generate");
        reject_unknown(*gen, "generate", {"n_devices", "region_side", "local_compute", "bandwidth"});
        ScenarioTemplate t;
        read_int(*gen, "n_devices", "generate", t.params.n_devices);
        read_number(*gen, "region_side", "generate", t.params.region_side);
        read_number(*gen, "local_compute", "generate", t.params.local_compute);
        read_number(*gen, "bandwidth", "generate", t.params.bandwidth);
        t.params.jammer_power = jammer_power;
        t.params.noise_power = noise;
        t.constants = constants;
        t.profile = profile;
        t.accuracy = accuracy;
        if (t.params.n_devices < 1) throw ValidationError("generate.n_devices", "must be >= 1");
        if (!(t.params.region_side > 0.0)) throw ValidationError("generate.region_side", "must be > 0");
        if (channel && (find(*channel, "device_gains") || find(*channel, "jammer_gain"))) {
            throw ValidationError("channel", "gains are derived from positions when generating");
        }
        rc.scenario = t.generate(seed);
        rc.generator = t;
    } else {
        if (!devices->is_array()) throw ValidationError("devices", "expected an array");
        Scenario& s = rc.scenario;
        s.seed = seed;
        s.constants = constants;
        s.accuracy_model = accuracy;
        s.profile = profile;
        s.channel.noise_power = noise;
        if (const json* es = find(doc, "edge_position")) s.edge_position = point_at(*es, "edge_position");
        for (std::size_t n = 0; n < devices->size(); ++n) {
            const std::string at = "devices[" + std::to_string(n) + "]";
            const json& d = (*devices)[n];
            require_object(d, at);
            reject_unknown(d, at, {"position", "local_compute", "bandwidth"});
            Device dev;
            dev.id = static_cast<int>(n);
            dev.local_compute = 2e9;
            dev.bandwidth = 1e6;
            if (const json* p = find(d, "position")) dev.position = point_at(*p, at + ".position");
            read_number(d, "local_compute", at, dev.local_compute);
            read_number(d, "bandwidth", at, dev.bandwidth);
            s.devices.push_back(dev);
        }
        s.jammer.power = jammer_power;
        if (jammer && find(*jammer, "position")) s.jammer.position = point_at((*jammer)["position"], "jammer.position");

        const json* gains = channel ? find(*channel, "device_gains") : nullptr;
        const json* jgain = channel ? find(*channel, "jammer_gain") : nullptr;
        if (gains == nullptr || jgain == nullptr) {
            for (std::size_t n = 0; n < s.devices.size(); ++n) {
                if (distance(s.devices[n].position, s.edge_position) == 0.0) {
                    throw ValidationError("devices[" + std::to_string(n) + "].position",
                                          "coincides with the edge server; gain undefined");
                }
            }
            if (distance(s.jammer.position, s.edge_position) == 0.0) {
                throw ValidationError("jammer.position", "coincides with the edge server; gain undefined");
            }
            s.refresh_gains();
        }
        if (gains) s.channel.device_gains = number_list(*gains, "channel.device_gains");
        if (jgain) s.channel.jammer_gain = number_at(*jgain, "channel.jammer_gain");
        s.validate();
    }

    rc.ao.qga = qga_from(find(doc, "qga"), derive_seed(seed, {0x9a11ULL}));
    rc.ao.qga.validate();
    if (const json* ao = find(doc, "ao")) {
        require_object(*ao, "ao");
        reject_unknown(*ao, "ao", {"max_iters", "rel_tol"});
        read_int(*ao, "max_iters", "ao", rc.ao.max_iters);
        read_number(*ao, "rel_tol", "ao", rc.ao.rel_tol);
        if (rc.ao.max_iters < 1) throw ValidationError("ao.max_iters", "must be >= 1");
        if (!(rc.ao.rel_tol >= 0.0)) throw ValidationError("ao.rel_tol", "must be >= 0");
    }
    read_number(doc, "ftp_power", "", rc.ftp_power);
    if (rc.ftp_power < 0.0 || rc.ftp_power > rc.scenario.constants.max_power) {
        throw ValidationError("ftp_power", "must lie in (0, max_power], or 0 for max_power");
    }
    return rc;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("I/O error writing '" + path + "'");
}

RunConfig load_run_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
    return run_config_from_json(read_json_file(path), seed_override);
}

Scenario load_scenario(const std::string& path) { return load_run_config(path).scenario; }

json accuracy_model_to_json(const AccuracyModel& m) {
    json a = json::array(), tau = json::array(), phi = json::array(), b = json::array();
    for (const auto& p : m.points) {
        a.push_back(p.amplitude);
        tau.push_back(p.slope);
        phi.push_back(p.midpoint);
        b.push_back(p.offset);
    }
    return {{"A", a}, {"tau", tau}, {"phi", phi}, {"b", b}, {"local_accuracy", m.local_accuracy}};
}

json profile_to_json(const ModelProfile& p) {
    json j = {{"layer_workloads", p.layer_workloads}, {"ifd_sizes", p.ifd_sizes}};
    if (!p.labels.empty()) j["labels"] = p.labels;
    return j;
}

json qga_config_to_json(const QgaConfig& q) {
    return {{"population", q.population},
            {"generations", q.generations},
            {"crossover_prob", q.crossover_prob},
            {"mutation_prob", q.mutation_prob},
            {"penalty_accuracy", q.penalties.accuracy},
            {"penalty_energy", q.penalties.energy},
            {"theta_same_pi", q.theta_same / std::numbers::pi},
            {"theta_diff_pi", q.theta_diff / std::numbers::pi},
            {"quadrant_sign", q.quadrant_sign}};
}

json scenario_to_json(const Scenario& s) {
    json devices = json::array();
    for (const auto& d : s.devices) {
        devices.push_back({{"position", point_json(d.position)},
                           {"local_compute", d.local_compute},
                           {"bandwidth", d.bandwidth}});
    }
    return {
        {"seed", s.seed},
        {"edge_position", point_json(s.edge_position)},
        {"devices", devices},
        {"jammer", {{"position", point_json(s.jammer.position)}, {"power", s.jammer.power}}},
        {"channel",
         {{"device_gains", s.channel.device_gains},
          {"jammer_gain", s.channel.jammer_gain},
          {"noise_power", s.channel.noise_power}}},
        {"constants", constants_json(s.constants)},
        {"accuracy_model", accuracy_model_to_json(s.accuracy_model)},
        {"profile", profile_to_json(s.profile)},
    };
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    write_json_file(scenario_to_json(scenario), path);
}

json solution_to_json(const Solution& sol) {
    json devices = json::array();
    for (std::size_t n = 0; n < sol.per_device.size(); ++n) {
        const DeviceMetrics& m = sol.per_device[n];
        json d = {{"partition", sol.partitions[n]},
                  {"power", sol.powers[n]},
                  {"edge_alloc", sol.allocations[n]},
                  {"workload_device", m.workload_device},
                  {"workload_edge", m.workload_edge},
                  {"t_local", m.t_local},
                  {"t_tx", m.t_tx},
                  {"t_edge", m.t_edge},
                  {"e_local", m.e_local},
                  {"e_tx", m.e_tx},
                  {"sinr", m.sinr},
                  {"accuracy", m.accuracy},
                  {"delay_revenue", m.delay_revenue},
                  {"accuracy_revenue", m.accuracy_revenue},
                  {"rda_term", m.rda_term},
                  {"feasible", m.feasible()}};
        if (n < sol.power_reports.size()) {
            const auto& r = sol.power_reports[n];
            d["power_status"] = std::string(to_string(r.status));
            d["p_lo"] = r.p_lo;
            d["p_energy_root"] = r.p_energy_root;  // null when unbounded
        }
        devices.push_back(d);
    }
    return {{"scheme", sol.scheme},       {"rda", sol.rda},
            {"objective", sol.objective}, {"feasible", sol.feasible},
            {"iterations", sol.iterations}, {"history", sol.history},
            {"devices", devices},         {"diagnostics", sol.diagnostics}};
}

}  // namespace aci
