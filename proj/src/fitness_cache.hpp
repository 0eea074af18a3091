#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "aci/qga.hpp"

namespace aci::detail {

// Memoises fitness by partition vector. Searches revisit the same candidates
// constantly once the population concentrates; powers are fixed for a run.
class CachedFitness {
public:
    CachedFitness(const Scenario& scenario, std::span<const double> powers,
                  const AllocationProvider& allocs, const Penalties& penalties)
        : scenario_(scenario), powers_(powers), allocs_(allocs), penalties_(penalties) {
        const auto base = static_cast<double>(scenario.num_points() + 1);
        cacheable_ = std::pow(base, scenario.num_devices()) < 9.0e18;
    }

    FitnessValue operator()(std::span<const int> partitions) {
        if (!cacheable_) return compute(partitions);
        std::uint64_t key = 0;
        for (auto it = partitions.rbegin(); it != partitions.rend(); ++it) {
            key = key * static_cast<std::uint64_t>(scenario_.num_points() + 1) +
                  static_cast<std::uint64_t>(*it);
        }
        if (auto hit = cache_.find(key); hit != cache_.end()) return hit->second;
        const FitnessValue v = compute(partitions);
        cache_.emplace(key, v);
        return v;
    }

private:
    FitnessValue compute(std::span<const int> partitions) {
        const std::vector<double> alloc = allocs_(partitions);
        return evaluate_fitness(scenario_, partitions, powers_, alloc, penalties_);
    }

    const Scenario& scenario_;
    std::span<const double> powers_;
    const AllocationProvider& allocs_;
    Penalties penalties_;
    bool cacheable_ = false;
    std::unordered_map<std::uint64_t, FitnessValue> cache_;
};

}  // namespace aci::detail
