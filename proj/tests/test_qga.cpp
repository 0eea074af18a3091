#include <doctest.h>

#include <cmath>
#include <random>

#include "aci/qga.hpp"
#include "aci/subsolvers.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aci;

namespace {

AllocationProvider closed_form(const Scenario& s) {
    return [&s](std::span<const int> k) { return allocate_edge_compute(s, k); };
}

}  // namespace

TEST_CASE("bits per device") {
    CHECK(bits_per_device(1) == 1);
    CHECK(bits_per_device(3) == 2);
    CHECK(bits_per_device(5) == 3);
    CHECK(bits_per_device(7) == 3);
    CHECK(bits_per_device(8) == 4);
}

TEST_CASE("decode is MSB first and wraps modulo K + 1") {
    const std::vector<std::uint8_t> bits{1, 0, 1, 1, 1, 0, 1, 1, 1};
    const auto k = decode(bits, 3, 5);
    CHECK(k == std::vector<int>{5, 0, 1});  // 101, 110 -> 6 mod 6, 111 -> 7 mod 6
    CHECK_THROWS(decode(bits, 2, 5));
}

TEST_CASE("encode inverts decode on valid points") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        std::vector<int> k(7);
        for (auto& v : k) v = static_cast<int>(rng() % 6);
        CHECK(decode(encode(k, 5), 7, 5) == k);
    }
    CHECK_THROWS(encode(std::vector<int>{6}, 5));
}

TEST_CASE("fresh population is in equal superposition") {
    QgaConfig cfg;
    cfg.population = 4;
    const QgaState s = init_population(cfg, 3, 5);
    REQUIRE(s.chromosomes.size() == 4);
    CHECK(s.qubits_per_chromosome() == 9);
    for (const auto& c : s.chromosomes) {
        for (const auto& q : c) {
            CHECK(q.alpha == doctest::Approx(1 / std::sqrt(2.0)));
            CHECK(q.beta == doctest::Approx(1 / std::sqrt(2.0)));
        }
    }
}

TEST_CASE("measurement frequency follows beta squared") {
    Rng rng(3);
    Qubit q;
    rotate_qubit(q, 0.3);  // beta^2 = sin^2(pi/4 + 0.3)
    const double p1 = q.beta * q.beta;
    int ones = 0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ones += measure(Chromosome{q}, rng)[0];
    CHECK(static_cast<double>(ones) / draws == doctest::Approx(p1).epsilon(0.01));
}

TEST_CASE("rotation is orthogonal") {
    Qubit q;
    for (int i = 0; i < 100000; ++i) rotate_qubit(q, 0.05 * std::numbers::pi);
    CHECK(q.norm_error() <= 1e-10);
    Qubit r{0.6, 0.8};
    rotate_qubit(r, std::numbers::pi / 2);
    CHECK(r.alpha == doctest::Approx(-0.8));
    CHECK(r.beta == doctest::Approx(0.6));
}

TEST_CASE("rotate uses theta_same on agreeing bits and theta_diff elsewhere") {
    QgaConfig cfg;
    cfg.population = 2;
    QgaState s = init_population(cfg, 1, 1);
    s.observed = {{1}, {0}};
    rotate(s, std::vector<std::uint8_t>{1}, cfg);
    Qubit same, diff;
    rotate_qubit(same, cfg.theta_same);
    rotate_qubit(diff, cfg.theta_diff);
    CHECK(s.chromosomes[0][0].beta == doctest::Approx(same.beta));
    CHECK(s.chromosomes[1][0].beta == doctest::Approx(diff.beta));
}

TEST_CASE("quadrant sign rotates toward the best bit") {
    QgaConfig cfg;
    cfg.population = 2;
    cfg.quadrant_sign = true;
    QgaState s = init_population(cfg, 1, 1);
    s.observed = {{0}, {1}};
    for (int i = 0; i < 5; ++i) rotate(s, std::vector<std::uint8_t>{1}, cfg);
    CHECK(s.chromosomes[0][0].beta * s.chromosomes[0][0].beta > 0.9);
}

TEST_CASE("mutation swaps amplitudes and crossover swaps tails") {
    QgaConfig cfg;
    cfg.population = 2;
    QgaState s = init_population(cfg, 2, 5);
    for (auto& q : s.chromosomes[0]) q = {1.0, 0.0};
    for (auto& q : s.chromosomes[1]) q = {0.0, 1.0};
    Rng rng(1);
    crossover(s, 1.0, rng);
    // Each position still holds one of each kind, and the cut left a prefix intact.
    int swapped = 0;
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(s.chromosomes[0][j].alpha + s.chromosomes[1][j].alpha == 1.0);
        swapped += s.chromosomes[0][j].alpha == 0.0;
    }
    CHECK(swapped >= 1);
    CHECK(swapped <= 5);

    QgaState m = init_population(cfg, 2, 5);
    for (auto& c : m.chromosomes) for (auto& q : c) q = {0.6, 0.8};
    mutate(m, 1.0, rng);
    for (auto& c : m.chromosomes) for (auto& q : c) {
        CHECK(q.alpha == 0.8);
        CHECK(q.beta == 0.6);
    }
}

TEST_CASE("run_qga is deterministic, elitist and keeps unit norms") {
    const Scenario s = fixtures::default_scenario(12, 4, 0.1);
    const std::vector<double> p(4, s.constants.max_power);
    QgaConfig cfg;
    cfg.population = 30;
    cfg.generations = 40;
    cfg.seed = 77;
    const auto a = run_qga(s, p, closed_form(s), cfg);
    const auto b = run_qga(s, p, closed_form(s), cfg);
    CHECK(a.partitions == b.partitions);
    CHECK(a.fitness == b.fitness);
    REQUIRE(a.trace.size() == 40);
    for (std::size_t t = 1; t < a.trace.size(); ++t) CHECK(a.trace[t].best_fitness >= a.trace[t - 1].best_fitness);
    CHECK(a.max_norm_drift <= 1e-10);
    CHECK(fitness(s, a.partitions, p, allocate_edge_compute(s, a.partitions), cfg.penalties) == a.fitness);
}

TEST_CASE("an incumbent is never lost") {
    const Scenario s = fixtures::default_scenario(8, 6, 1.0);
    const std::vector<double> p(6, s.constants.max_power);
    const std::vector<int> local(6, 5);
    const double base = fitness(s, local, p, allocate_edge_compute(s, local), {});
    QgaConfig cfg;
    cfg.population = 10;
    cfg.generations = 5;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = seed;
        CHECK(run_qga(s, p, closed_form(s), cfg, local).fitness >= base);
        CHECK(run_ga(s, p, closed_form(s), GaConfig::mirroring(cfg), local).fitness >= base);
    }
}

TEST_CASE("QGA finds the exhaustive optimum for three devices") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Scenario s = fixtures::default_scenario(300 + seed, 3, 0.05);
        const std::vector<double> p(3, s.constants.max_power);
        const auto best = oracle::exhaustive_partitions(s, p, 1e6, 1e6);
        QgaConfig cfg;
        cfg.seed = seed;
        const auto r = run_qga(s, p, closed_form(s), cfg);
        CHECK(r.fitness <= best.fitness + 1e-6);
        if (r.fitness >= best.fitness - 1e-6) ++hits;
    }
    CHECK(hits >= 4);
}

TEST_CASE("GA matches the exhaustive optimum for one device") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Scenario s = fixtures::default_scenario(500 + seed, 1, 0.1 * seed);
        const std::vector<double> p(1, s.constants.max_power);
        const auto best = oracle::exhaustive_partitions(s, p, 1e6, 1e6);
        GaConfig cfg;
        cfg.population = 20;
        cfg.generations = 20;
        cfg.seed = seed;
        const auto r = run_ga(s, p, closed_form(s), cfg);
        CHECK(r.fitness == doctest::Approx(best.fitness).epsilon(1e-9));
        for (std::size_t t = 1; t < r.trace.size(); ++t) CHECK(r.trace[t].best_fitness >= r.trace[t - 1].best_fitness);
    }
}

TEST_CASE("penalised fitness matches the oracle") {
    const Scenario s = fixtures::default_scenario(21, 3, 0.5);
    const std::vector<double> p{0.23, 0.1, 0.05};
    const std::vector<int> k{0, 3, 5};
    const auto f = allocate_edge_compute(s, k);
    double expected = 0.0;
    for (int n = 0; n < 3; ++n) expected += oracle::penalized(s, oracle::eval_device(s, n, k[n], p[n], f[n]), 1e6, 1e6);
    CHECK(fitness(s, k, p, f, {}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("config validation") {
    QgaConfig cfg;
    cfg.population = 1;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.mutation_prob = 1.5;
    CHECK_THROWS(cfg.validate());
}
