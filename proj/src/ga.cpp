#include <algorithm>
#include <cmath>
#include <limits>

#include "aci/qga.hpp"
#include "fitness_cache.hpp"

namespace aci {

namespace {

using Bits = std::vector<std::uint8_t>;

// Roulette wheel over fitness shifted to be nonnegative. Non-finite
// individuals never get picked unless everyone is non-finite.
class Roulette {
public:
    explicit Roulette(std::span<const double> fitness) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (double f : fitness) {
            if (!std::isfinite(f)) continue;
            lo = std::min(lo, f);
            hi = std::max(hi, f);
        }
        cumulative_.reserve(fitness.size());
        // Small floor keeps the worst finite individual selectable.
        const double floor = hi > lo ? (hi - lo) * 1e-9 : 1.0;
        double total = 0.0;
        for (double f : fitness) {
            total += std::isfinite(f) ? (f - lo) + floor : 0.0;
            cumulative_.push_back(total);
        }
        if (total == 0.0) {
            for (std::size_t i = 0; i < cumulative_.size(); ++i) cumulative_[i] = static_cast<double>(i + 1);
        }
    }

    std::size_t pick(Rng& rng) const {
        const double r = uniform01(rng) * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
        return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    }

private:
    std::vector<double> cumulative_;
};

}  // namespace

PartitionSearchResult run_ga(const Scenario& scenario, std::span<const double> powers,
                             const AllocationProvider& allocs, const GaConfig& config,
                             std::span<const int> incumbent) {
    const int n = scenario.num_devices();
    const int k = scenario.num_points();
    const auto length = static_cast<std::size_t>(bits_per_device(k)) * static_cast<std::size_t>(n);
    const auto pop = static_cast<std::size_t>(std::max(config.population, 2));

    Rng rng(config.seed);
    detail::CachedFitness eval(scenario, powers, allocs, config.penalties);

    std::vector<Bits> population(pop, Bits(length));
    for (auto& ind : population) {
        for (auto& bit : ind) bit = uniform01(rng) < 0.5 ? 1 : 0;
    }
    if (!incumbent.empty()) population[0] = encode(incumbent, k);

    PartitionSearchResult result;
    Bits best_bits;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> fit(pop);

    for (int t = 0; t < config.generations; ++t) {
        std::size_t penalty_free = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i < pop; ++i) {
            const std::vector<int> parts = decode(population[i], n, k);
            const FitnessValue f = eval(parts);
            fit[i] = f.value;
            sum += f.value;
            if (f.penalty_free) ++penalty_free;
            if (best_bits.empty() || f.value > best) {
                best = f.value;
                best_bits = population[i];
            }
        }
        result.trace.push_back({t, best, sum / static_cast<double>(pop),
                                static_cast<double>(penalty_free) / static_cast<double>(pop)});

        const Roulette wheel(fit);
        std::vector<Bits> next;
        next.reserve(pop);
        next.push_back(best_bits);
        while (next.size() < pop) {
            Bits a = population[wheel.pick(rng)];
            Bits b = population[wheel.pick(rng)];
            if (length >= 2 && uniform01(rng) < config.crossover_prob) {
                const std::size_t cut = 1 + uniform_index(rng, length - 1);
                std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
                                 b.begin() + static_cast<std::ptrdiff_t>(cut));
            }
            for (Bits* child : {&a, &b}) {
                for (auto& bit : *child) {
                    if (uniform01(rng) < config.mutation_prob) bit ^= 1;
                }
                if (next.size() < pop) next.push_back(std::move(*child));
            }
        }
        population = std::move(next);
    }
    result.partitions = decode(best_bits, n, k);
    result.fitness = best;
    return result;
}

}  // namespace aci
