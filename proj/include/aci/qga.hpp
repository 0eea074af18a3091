#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "aci/rng.hpp"
#include "aci/scenario.hpp"

namespace aci {

// ---------------------------------------------------------------------------
// Penalised partition fitness shared by the quantum and classical searches.

struct Penalties {
    double accuracy = 1e6;  // weight on min(0, acc - acc_min)
    double energy = 1e6;    // weight on min(0, E_max - E^D - E^T)
};

struct FitnessValue {
    double value = 0.0;
    bool penalty_free = false;
};

// sum_n [ rda_term_n + w1 min(0, acc_n - acc_min) + w2 min(0, E_max - E_n) ]
FitnessValue evaluate_fitness(const Scenario& scenario, std::span<const int> partitions,
                              std::span<const double> powers, std::span<const double> allocs,
                              const Penalties& penalties);

inline double fitness(const Scenario& scenario, std::span<const int> partitions,
                      std::span<const double> powers, std::span<const double> allocs,
                      const Penalties& penalties) {
    return evaluate_fitness(scenario, partitions, powers, allocs, penalties).value;
}

// Edge allocation for a candidate partition vector.
using AllocationProvider = std::function<std::vector<double>(std::span<const int>)>;

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double feasible_fraction = 0.0;
};

struct PartitionSearchResult {
    std::vector<int> partitions;
    double fitness = 0.0;
    std::vector<GenerationStats> trace;
    double max_norm_drift = 0.0;  // QGA only: worst |alpha^2 + beta^2 - 1| seen
};

void write_trace_csv(std::span<const GenerationStats> trace, const std::string& path);

// Bits per device: ceil(log2(K + 1)).
int bits_per_device(int num_points);

// MSB-first groups of `bits_per_device(K)` bits; values above K wrap modulo K + 1.
std::vector<int> decode(std::span<const std::uint8_t> bits, int n_devices, int num_points);
// Inverse of decode on [0, K].
std::vector<std::uint8_t> encode(std::span<const int> partitions, int num_points);

// ---------------------------------------------------------------------------
// Quantum genetic algorithm

struct Qubit {
    double alpha = std::numbers::sqrt2 / 2.0;
    double beta = std::numbers::sqrt2 / 2.0;

    double norm_error() const { return std::abs(alpha * alpha + beta * beta - 1.0); }
};

using Chromosome = std::vector<Qubit>;

struct QgaConfig {
    int population = 100;
    int generations = 100;
    double crossover_prob = 0.8;
    double mutation_prob = 0.02;
    Penalties penalties;
    double theta_same = -0.01 * std::numbers::pi;  // observed bit equals the best's
    double theta_diff = 0.05 * std::numbers::pi;
    // Classical variant: keep the magnitudes above but pick each sign so the
    // rotation moves probability toward the best individual's bit.
    bool quadrant_sign = false;
    std::uint64_t seed = 0;

    void validate() const;
};

struct QgaState {
    int n_devices = 0;
    int num_points = 0;
    std::vector<Chromosome> chromosomes;
    std::vector<std::vector<std::uint8_t>> observed;
    std::vector<std::vector<int>> partitions;
    std::vector<double> fitness;
    std::vector<std::uint8_t> best_bits;
    std::vector<int> best_partitions;
    double best_fitness = -std::numeric_limits<double>::infinity();
    int generation = 0;
    Rng rng;

    std::size_t qubits_per_chromosome() const {
        return chromosomes.empty() ? 0 : chromosomes.front().size();
    }
    double max_norm_error() const;
};

// Every qubit in equal superposition.
QgaState init_population(const QgaConfig& config, int n_devices, int num_points);

// Bit j is 1 when a uniform draw r_j in [0, 1) satisfies r_j <= beta_j^2.
std::vector<std::uint8_t> measure(const Chromosome& chromosome, Rng& rng);

void rotate_qubit(Qubit& q, double theta);

// Rotates every qubit of every individual by theta_same where the individual's
// observed bit matches `best_bits` and theta_diff elsewhere.
void rotate(QgaState& state, std::span<const std::uint8_t> best_bits, const QgaConfig& config);

// Random pairing; with probability p_c each pair swaps all qubits from a cut
// point in [1, J-1] onward.
void crossover(QgaState& state, double crossover_prob, Rng& rng);

// Each qubit independently, with probability p_m, swaps alpha and beta.
void mutate(QgaState& state, double mutation_prob, Rng& rng);

// measure -> decode -> evaluate -> keep global best -> rotate -> crossover ->
// mutate, for config.generations generations. A non-empty `incumbent` starts
// out as the global best, so the search never returns anything worse.
PartitionSearchResult run_qga(const Scenario& scenario, std::span<const double> powers,
                              const AllocationProvider& allocs, const QgaConfig& config,
                              std::span<const int> incumbent = {});

// ---------------------------------------------------------------------------
// Classical GA over the same encoding: roulette selection, single-point
// crossover, bit-flip mutation, one elite.

struct GaConfig {
    int population = 100;
    int generations = 100;
    double crossover_prob = 0.8;
    double mutation_prob = 0.02;
    Penalties penalties;
    std::uint64_t seed = 0;

    static GaConfig mirroring(const QgaConfig& q) {
        return {q.population, q.generations, q.crossover_prob, q.mutation_prob, q.penalties, q.seed};
    }
};

// A non-empty `incumbent` replaces the first individual of the initial population.
PartitionSearchResult run_ga(const Scenario& scenario, std::span<const double> powers,
                             const AllocationProvider& allocs, const GaConfig& config,
                             std::span<const int> incumbent = {});

}  // namespace aci
