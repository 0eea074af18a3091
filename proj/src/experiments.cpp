#include "aci/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "aci/errors.hpp"

#ifndef ACI_VERSION
#define ACI_VERSION "dev"
#endif

namespace aci {

std::string_view to_string(SweepParameter p) {
    return p == SweepParameter::device_compute ? "device_compute" : "jammer_power";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
    if (name == "device_compute") return SweepParameter::device_compute;
    if (name == "jammer_power") return SweepParameter::jammer_power;
    return std::nullopt;
}

std::vector<double> default_sweep_values(SweepParameter p) {
    if (p == SweepParameter::device_compute) return {1.0e9, 1.5e9, 2.0e9, 2.5e9, 3.0e9, 3.5e9, 4.0e9};
    return {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
}

void SweepSpec::validate() const {
    if (values.empty()) throw ValidationError("sweep.values", "at least one value required");
    if (!std::is_sorted(values.begin(), values.end())) {
        throw ValidationError("sweep.values", "must be sorted ascending");
    }
    for (double v : values) {
        const bool ok = parameter == SweepParameter::device_compute ? v > 0.0 : v >= 0.0;
        if (!ok || !std::isfinite(v)) throw ValidationError("sweep.values", "value out of range");
    }
    if (n_scenarios < 1) throw ValidationError("sweep.n_scenarios", "must be >= 1");
    if (schemes.empty()) throw ValidationError("sweep.schemes", "at least one scheme required");
    ao.qga.validate();
}

std::uint64_t replicate_seed(std::uint64_t master, int replicate) {
    return derive_seed(master, {0x5ce7a410ULL, static_cast<std::uint64_t>(replicate)});
}

std::uint64_t solver_seed(std::uint64_t master, int replicate, double value) {
    return derive_seed(master, {0x501fe400ULL, static_cast<std::uint64_t>(replicate),
                                std::bit_cast<std::uint64_t>(value)});
}

void apply_sweep_value(Scenario& scenario, SweepParameter parameter, double value) {
    if (parameter == SweepParameter::device_compute) {
        for (auto& d : scenario.devices) d.local_compute = value;
    } else {
        scenario.jammer.power = value;
    }
}

namespace {

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ACI_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepRow solve_cell(const SweepSpec& spec, std::size_t value_index, int replicate, Scheme scheme) {
    const double value = spec.values[value_index];
    SweepRow row;
    row.value = value;
    row.scenario_id = replicate;
    row.seed = replicate_seed(spec.master_seed, replicate);
    row.scheme = std::string(to_string(scheme));
    const auto start = std::chrono::steady_clock::now();
    try {
        Scenario scenario = spec.base.generate(row.seed);
        apply_sweep_value(scenario, spec.parameter, value);
        AoOptions ao = spec.ao;
        ao.qga.seed = solver_seed(spec.master_seed, replicate, value);
        const Solution sol = solve_scheme(scheme, scenario, ao, spec.ftp_power);
        row.rda = sol.rda;
        row.feasible = sol.feasible;
        double delay = 0.0;
        double acc = 0.0;
        for (const auto& m : sol.per_device) {
            delay += m.total_delay();
            acc += m.accuracy;
        }
        row.total_delay = delay;
        row.avg_accuracy = acc / static_cast<double>(sol.per_device.size());
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.rda = row.total_delay = row.avg_accuracy = nan;
        row.feasible = false;
        row.error = e.what();
    }
    if (spec.record_wall_time) {
        row.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return row;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t per_value = static_cast<std::size_t>(spec.n_scenarios) * spec.schemes.size();
    const std::size_t total = spec.values.size() * per_value;

    SweepResult result;
    result.parameter = spec.parameter;
    result.rows.resize(total);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t cell = next++; cell < total; cell = next++) {
            const std::size_t v = cell / per_value;
            const std::size_t rest = cell % per_value;
            const int replicate = static_cast<int>(rest / spec.schemes.size());
            const Scheme scheme = spec.schemes[rest % spec.schemes.size()];
            result.rows[cell] = solve_cell(spec, v, replicate, scheme);
        }
    };
    const int workers = std::min<int>(worker_count(spec.workers), static_cast<int>(total));
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    return result;
}

std::vector<Aggregate> aggregate(const SweepResult& result) {
    struct Acc {
        std::vector<double> rda, delay, accuracy;
        int feasible = 0;
    };
    // Keyed by (value, first-seen scheme order) for a stable layout.
    std::vector<std::string> scheme_order;
    std::map<std::pair<double, std::size_t>, Acc> groups;
    for (const auto& r : result.rows) {
        auto it = std::find(scheme_order.begin(), scheme_order.end(), r.scheme);
        if (it == scheme_order.end()) it = scheme_order.insert(scheme_order.end(), r.scheme);
        Acc& a = groups[{r.value, static_cast<std::size_t>(it - scheme_order.begin())}];
        a.rda.push_back(r.rda);
        a.delay.push_back(r.total_delay);
        a.accuracy.push_back(r.avg_accuracy);
        a.feasible += r.feasible ? 1 : 0;
    }
    auto mean_sd = [](const std::vector<double>& xs) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        const double mean = sum / static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
        return std::pair{mean, sd};
    };
    std::vector<Aggregate> out;
    for (const auto& [key, a] : groups) {
        Aggregate g;
        g.value = key.first;
        g.scheme = scheme_order[key.second];
        g.count = static_cast<int>(a.rda.size());
        std::tie(g.mean_rda, g.sd_rda) = mean_sd(a.rda);
        std::tie(g.mean_delay, g.sd_delay) = mean_sd(a.delay);
        std::tie(g.mean_accuracy, g.sd_accuracy) = mean_sd(a.accuracy);
        g.feasible_fraction = static_cast<double>(a.feasible) / static_cast<double>(g.count);
        out.push_back(g);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr const char* kCsvHeader =
    "value,scenario_id,seed,scheme,rda,total_delay,avg_accuracy,feasible,wall_time";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Splits one RFC-4180 record.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

}  // namespace

std::string to_csv(const SweepResult& result) {
    std::string out = std::string(kCsvHeader) + "\r\n";
    for (const auto& r : result.rows) {
        out += real(r.value) + ',' + std::to_string(r.scenario_id) + ',' + std::to_string(r.seed) + ',' +
               csv_field(r.scheme) + ',' + real(r.rda) + ',' + real(r.total_delay) + ',' +
               real(r.avg_accuracy) + ',' + (r.feasible ? "1" : "0") + ',' + real(r.wall_time) + "\r\n";
    }
    return out;
}

void write_csv(const SweepResult& result, const std::string& path) {
    if (result.rows.empty()) throw std::invalid_argument("write_csv: empty sweep result");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CSV '" + path + "'");
    out << to_csv(result);
    if (!out) throw std::runtime_error("I/O error writing CSV '" + path + "'");
}

SweepResult read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open CSV '" + path + "'");
    SweepResult result;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != kCsvHeader) throw ParseError(path + ": unexpected header");
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_record(line);
        if (f.size() != 9) throw ParseError(path + ":" + std::to_string(line_no) + ": expected 9 fields");
        SweepRow r;
        try {
            r.value = std::stod(f[0]);
            r.scenario_id = std::stoi(f[1]);
            r.seed = std::stoull(f[2]);
            r.scheme = f[3];
            r.rda = std::stod(f[4]);
            r.total_delay = std::stod(f[5]);
            r.avg_accuracy = std::stod(f[6]);
            r.feasible = f[7] == "1";
            r.wall_time = std::stod(f[8]);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": malformed field");
        }
        result.rows.push_back(std::move(r));
    }
    return result;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct PlotMetric {
    const char* file;
    const char* title;
    double Aggregate::*mean;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string line_chart(const std::vector<Aggregate>& aggs, const PlotMetric& metric,
                       std::string_view x_label) {
    constexpr double W = 640, H = 420, L = 70, R = 130, T = 40, B = 55;
    std::vector<std::string> schemes;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& a : aggs) {
        if (std::find(schemes.begin(), schemes.end(), a.scheme) == schemes.end()) schemes.push_back(a.scheme);
        const double y = a.*metric.mean;
        xmin = std::min(xmin, a.value);
        xmax = std::max(xmax, a.value);
        if (std::isfinite(y)) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!std::isfinite(ymin)) { ymin = 0; ymax = 1; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double pad = (ymax - ymin) * 0.05;
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << metric.title
      << "</text>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        s << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
          << fmt_tick(xv) << "</text>\n";
        s << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt_tick(yv)
          << "</text>\n";
        s << "<line x1=\"" << L << "\" y1=\"" << py(yv) << "\" x2=\"" << W - R << "\" y2=\"" << py(yv)
          << "\" stroke=\"#ddd\"/>\n";
    }
    s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";

    for (std::size_t si = 0; si < schemes.size(); ++si) {
        const char* color = kPalette[si % std::size(kPalette)];
        std::ostringstream pts;
        for (const auto& a : aggs) {
            const double y = a.*metric.mean;
            if (a.scheme != schemes[si] || !std::isfinite(y)) continue;
            pts << px(a.value) << ',' << py(y) << ' ';
            s << "<circle cx=\"" << px(a.value) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
        }
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts.str()
          << "\"/>\n";
        const double ly = T + 10 + 18.0 * static_cast<double>(si);
        s << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 36 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << W - R + 42 << "\" y=\"" << ly + 4 << "\">" << schemes[si] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace

std::vector<std::string> render_plots(const SweepResult& result, const std::string& dir) {
    if (result.rows.empty()) throw std::invalid_argument("render_plots: empty sweep result");
    const auto aggs = aggregate(result);
    const std::string x_label = result.parameter == SweepParameter::device_compute
                                    ? "device computing capability (cycles/s)"
                                    : "jamming power (W)";
    const PlotMetric metrics[] = {
        {"rda.svg", "RDA", &Aggregate::mean_rda},
        {"total_delay.svg", "Total task inference delay (s)", &Aggregate::mean_delay},
        {"avg_accuracy.svg", "Average accuracy", &Aggregate::mean_accuracy},
    };
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    for (const auto& m : metrics) {
        const std::string path = (std::filesystem::path(dir) / m.file).string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write plot '" + path + "'");
        out << line_chart(aggs, m, x_label);
        if (!out) throw std::runtime_error("I/O error writing plot '" + path + "'");
        paths.push_back(path);
    }
    return paths;
}

nlohmann::json sweep_manifest(const SweepSpec& spec) {
    nlohmann::json schemes = nlohmann::json::array();
    for (Scheme s : spec.schemes) schemes.push_back(std::string(to_string(s)));
    return {
        {"version", ACI_VERSION},
        {"parameter", std::string(to_string(spec.parameter))},
        {"values", spec.values},
        {"n_scenarios", spec.n_scenarios},
        {"schemes", schemes},
        {"master_seed", spec.master_seed},
        {"ftp_power", spec.ftp_power},
        {"record_wall_time", spec.record_wall_time},
        {"generate",
         {{"n_devices", spec.base.params.n_devices},
          {"region_side", spec.base.params.region_side},
          {"local_compute", spec.base.params.local_compute},
          {"bandwidth", spec.base.params.bandwidth}}},
        {"jammer", {{"power", spec.base.params.jammer_power}}},
        {"channel", {{"noise_power", spec.base.params.noise_power}}},
        {"constants",
         {{"chip_coeff", spec.base.constants.chip_coeff},
          {"energy_budget", spec.base.constants.energy_budget},
          {"max_power", spec.base.constants.max_power},
          {"edge_capacity", spec.base.constants.edge_capacity},
          {"max_delay", spec.base.constants.max_delay},
          {"weight", spec.base.constants.weight},
          {"acc_min", spec.base.constants.acc_min},
          {"acc_max", spec.base.constants.acc_max}}},
        {"accuracy_model", accuracy_model_to_json(spec.base.accuracy)},
        {"profile", profile_to_json(spec.base.profile)},
        {"qga", qga_config_to_json(spec.ao.qga)},
        {"ao", {{"max_iters", spec.ao.max_iters}, {"rel_tol", spec.ao.rel_tol}}},
    };
}

}  // namespace aci
