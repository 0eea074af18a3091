#include "aci/qga.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "aci/errors.hpp"
#include "aci/metrics.hpp"
#include "fitness_cache.hpp"

namespace aci {

FitnessValue evaluate_fitness(const Scenario& scenario, std::span<const int> partitions,
                              std::span<const double> powers, std::span<const double> allocs,
                              const Penalties& penalties) {
    if (partitions.size() != scenario.devices.size() || powers.size() != partitions.size() ||
        allocs.size() != partitions.size()) {
        throw std::invalid_argument("fitness: one partition, power and allocation per device");
    }
    const SystemConstants& c = scenario.constants;
    FitnessValue out{0.0, true};
    for (std::size_t n = 0; n < partitions.size(); ++n) {
        const DeviceMetrics m =
            evaluate_device(scenario, static_cast<int>(n), {partitions[n], powers[n], allocs[n]});
        double term = m.rda_term;
        const double acc_gap = std::min(0.0, m.accuracy - c.acc_min);
        const double energy_gap = std::min(0.0, c.energy_budget - m.total_energy());
        if (acc_gap < 0.0 || energy_gap < 0.0) out.penalty_free = false;
        if (penalties.accuracy != 0.0) term += penalties.accuracy * acc_gap;
        if (penalties.energy != 0.0) term += penalties.energy * energy_gap;
        out.value += term;
    }
    return out;
}

void write_trace_csv(std::span<const GenerationStats> trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace to '" + path + "'");
    out << "generation,best_fitness,mean_fitness,feasible_fraction\n";
    char buf[128];
    for (const auto& g : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", g.generation, g.best_fitness,
                      g.mean_fitness, g.feasible_fraction);
        out << buf;
    }
    if (!out) throw std::runtime_error("I/O error writing '" + path + "'");
}

int bits_per_device(int num_points) {
    if (num_points < 1) throw std::invalid_argument("need K >= 1");
    int m = 0;
    while ((1 << m) < num_points + 1) ++m;
    return m;
}

std::vector<int> decode(std::span<const std::uint8_t> bits, int n_devices, int num_points) {
    const int m = bits_per_device(num_points);
    if (bits.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n_devices)) {
        throw std::invalid_argument("decode: bit string length must be m * N");
    }
    std::vector<int> out(static_cast<std::size_t>(n_devices));
    for (int n = 0; n < n_devices; ++n) {
        int v = 0;
        for (int j = 0; j < m; ++j) v = (v << 1) | bits[static_cast<std::size_t>(n * m + j)];
        out[static_cast<std::size_t>(n)] = v % (num_points + 1);
    }
    return out;
}

std::vector<std::uint8_t> encode(std::span<const int> partitions, int num_points) {
    const int m = bits_per_device(num_points);
    std::vector<std::uint8_t> bits(partitions.size() * static_cast<std::size_t>(m));
    for (std::size_t n = 0; n < partitions.size(); ++n) {
        const int v = partitions[n];
        if (v < 0 || v > num_points) throw std::invalid_argument("encode: partition outside [0, K]");
        for (int j = 0; j < m; ++j) {
            bits[n * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] =
                static_cast<std::uint8_t>((v >> (m - 1 - j)) & 1);
        }
    }
    return bits;
}

void QgaConfig::validate() const {
    if (population < 2) throw ValidationError("qga.population", "must be >= 2");
    if (generations < 1) throw ValidationError("qga.generations", "must be >= 1");
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
        throw ValidationError("qga.crossover_prob", "must lie in [0, 1]");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
        throw ValidationError("qga.mutation_prob", "must lie in [0, 1]");
    }
    if (!(penalties.accuracy >= 0.0)) throw ValidationError("qga.penalty_accuracy", "must be >= 0");
    if (!(penalties.energy >= 0.0)) throw ValidationError("qga.penalty_energy", "must be >= 0");
}

double QgaState::max_norm_error() const {
    double worst = 0.0;
    for (const auto& c : chromosomes) {
        for (const auto& q : c) worst = std::max(worst, q.norm_error());
    }
    return worst;
}

QgaState init_population(const QgaConfig& config, int n_devices, int num_points) {
    config.validate();
    if (n_devices < 1) throw std::invalid_argument("need at least one device");
    QgaState s;
    s.n_devices = n_devices;
    s.num_points = num_points;
    const auto qubits =
        static_cast<std::size_t>(bits_per_device(num_points)) * static_cast<std::size_t>(n_devices);
    s.chromosomes.assign(static_cast<std::size_t>(config.population), Chromosome(qubits));
    s.rng.seed(config.seed);
    return s;
}

std::vector<std::uint8_t> measure(const Chromosome& chromosome, Rng& rng) {
    std::vector<std::uint8_t> x(chromosome.size());
    for (std::size_t j = 0; j < chromosome.size(); ++j) {
        const double r = uniform01(rng);
        x[j] = r <= chromosome[j].beta * chromosome[j].beta ? 1 : 0;
    }
    return x;
}

void rotate_qubit(Qubit& q, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double a = q.alpha;
    const double b = q.beta;
    q.alpha = c * a - s * b;
    q.beta = s * a + c * b;
}

namespace {

// Sign that moves measurement probability toward `target` bit; the
// derivative of beta^2 along the rotation is 2 * alpha * beta.
double toward(const Qubit& q, std::uint8_t target) {
    const double ab = q.alpha * q.beta;
    if (target == 1) {
        if (q.alpha == 0.0) return 0.0;
        return ab >= 0.0 ? 1.0 : -1.0;
    }
    if (q.beta == 0.0) return 0.0;
    return ab >= 0.0 ? -1.0 : 1.0;
}

}  // namespace

void rotate(QgaState& state, std::span<const std::uint8_t> best_bits, const QgaConfig& config) {
    for (std::size_t i = 0; i < state.chromosomes.size(); ++i) {
        auto& chrom = state.chromosomes[i];
        const auto& x = state.observed[i];
        if (best_bits.size() != chrom.size()) throw std::invalid_argument("rotate: length mismatch");
        for (std::size_t j = 0; j < chrom.size(); ++j) {
            double theta = x[j] == best_bits[j] ? config.theta_same : config.theta_diff;
            if (config.quadrant_sign) theta = std::abs(theta) * toward(chrom[j], best_bits[j]);
            if (theta != 0.0) rotate_qubit(chrom[j], theta);
        }
    }
}

void crossover(QgaState& state, double crossover_prob, Rng& rng) {
    const std::size_t pop = state.chromosomes.size();
    const std::size_t qubits = state.qubits_per_chromosome();
    std::vector<std::size_t> order(pop);
    for (std::size_t i = 0; i < pop; ++i) order[i] = i;
    for (std::size_t i = pop; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (std::size_t p = 0; p + 1 < pop; p += 2) {
        if (uniform01(rng) >= crossover_prob || qubits < 2) continue;
        const std::size_t cut = 1 + uniform_index(rng, qubits - 1);
        auto& a = state.chromosomes[order[p]];
        auto& b = state.chromosomes[order[p + 1]];
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
                         b.begin() + static_cast<std::ptrdiff_t>(cut));
    }
}

void mutate(QgaState& state, double mutation_prob, Rng& rng) {
    for (auto& chrom : state.chromosomes) {
        for (auto& q : chrom) {
            if (uniform01(rng) < mutation_prob) std::swap(q.alpha, q.beta);
        }
    }
}

PartitionSearchResult run_qga(const Scenario& scenario, std::span<const double> powers,
                              const AllocationProvider& allocs, const QgaConfig& config,
                              std::span<const int> incumbent) {
    QgaState state = init_population(config, scenario.num_devices(), scenario.num_points());
    detail::CachedFitness eval(scenario, powers, allocs, config.penalties);
    PartitionSearchResult result;
    if (!incumbent.empty()) {
        state.best_bits = encode(incumbent, scenario.num_points());
        state.best_partitions.assign(incumbent.begin(), incumbent.end());
        state.best_fitness = eval(state.best_partitions).value;
    }
    const std::size_t pop = state.chromosomes.size();
    state.observed.resize(pop);
    state.partitions.resize(pop);
    state.fitness.resize(pop);

    for (int t = 0; t < config.generations; ++t) {
        state.generation = t;
        std::size_t penalty_free = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i < pop; ++i) {
            state.observed[i] = measure(state.chromosomes[i], state.rng);
            state.partitions[i] = decode(state.observed[i], state.n_devices, state.num_points);
            const FitnessValue f = eval(state.partitions[i]);
            state.fitness[i] = f.value;
            sum += f.value;
            if (f.penalty_free) ++penalty_free;
            if (state.best_bits.empty() || f.value > state.best_fitness) {
                state.best_fitness = f.value;
                state.best_bits = state.observed[i];
                state.best_partitions = state.partitions[i];
            }
        }
        result.trace.push_back({t, state.best_fitness, sum / static_cast<double>(pop),
                                static_cast<double>(penalty_free) / static_cast<double>(pop)});

        rotate(state, state.best_bits, config);
        crossover(state, config.crossover_prob, state.rng);
        mutate(state, config.mutation_prob, state.rng);
        result.max_norm_drift = std::max(result.max_norm_drift, state.max_norm_error());
    }
    state.generation = config.generations;
    result.partitions = state.best_partitions;
    result.fitness = state.best_fitness;
    return result;
}

}  // namespace aci
