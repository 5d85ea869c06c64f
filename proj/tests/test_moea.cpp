#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>
#include <set>

#include "oracles.hpp"
#include "vmp/instance.hpp"
#include "vmp/moea.hpp"

using namespace vmp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Individual synth(double c, double p, double w, double viol = 0.0) {
    Individual ind;
    ind.objectives = {c, p, w};
    ind.violation = viol;
    return ind;
}

std::vector<Individual> random_pool(int size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> obj(0.0, 10.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Individual> pool;
    pool.reserve(size);
    for (int i = 0; i < size; ++i) {
        // coarse grid values make dominance and ties common
        Individual ind = synth(std::floor(obj(rng)), std::floor(obj(rng)),
                               std::floor(obj(rng)));
        if (unit(rng) < 0.3) ind.violation = std::floor(obj(rng)) / 2.0 + 0.5;
        pool.push_back(ind);
    }
    return pool;
}

// 2 VMs / 2 PMs; colocation on PM 0 dominates everything else.
Instance tiny_instance() {
    Instance inst;
    inst.vms = {{0, 0.5, 0.3}, {1, 0.4, 0.6}};
    inst.pms = {{0, 1.0, 1.0, 160.0, 250.0}, {1, 1.0, 1.0, 120.0, 260.0}};
    inst.traffic = {{0.0, 5.0}, {5.0, 0.0}};
    inst.distance = {{0.0, 2.0}, {2.0, 0.0}};
    return inst;
}

}  // namespace

TEST_CASE("feasible beats infeasible") {
    CHECK(constrained_dominates(synth(9, 9, 9), synth(1, 1, 1, 0.5)));
    CHECK(!constrained_dominates(synth(1, 1, 1, 0.5), synth(9, 9, 9)));
}

TEST_CASE("infeasibles compare by violation") {
    CHECK(constrained_dominates(synth(9, 9, 9, 0.1), synth(1, 1, 1, 0.2)));
    CHECK(!constrained_dominates(synth(1, 1, 1, 0.2), synth(9, 9, 9, 0.1)));
}

TEST_CASE("equal objectives do not dominate") {
    CHECK(!constrained_dominates(synth(1, 1, 1), synth(1, 1, 1)));
}

TEST_CASE("componentwise improvement dominates") {
    CHECK(constrained_dominates(synth(1, 2, 3), synth(2, 2, 3)));
    CHECK(!constrained_dominates(synth(2, 2, 3), synth(1, 2, 3)));
}

TEST_CASE("sort puts a lone individual in front 1") {
    std::vector<Individual> pop = {synth(1, 1, 1)};
    auto fronts = fast_nondominated_sort(pop);
    REQUIRE(fronts.size() == 1);
    CHECK(fronts[0] == std::vector<int>{0});
    CHECK(pop[0].rank == 1);
}

TEST_CASE("mutually nondominated individuals share front 1") {
    std::vector<Individual> pop = {synth(1, 3, 2), synth(2, 1, 3), synth(3, 2, 1)};
    auto fronts = fast_nondominated_sort(pop);
    REQUIRE(fronts.size() == 1);
    CHECK(fronts[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("a dominance chain yields singleton fronts") {
    std::vector<Individual> pop = {synth(3, 3, 3), synth(1, 1, 1), synth(2, 2, 2)};
    auto fronts = fast_nondominated_sort(pop);
    REQUIRE(fronts.size() == 3);
    CHECK(fronts[0] == std::vector<int>{1});
    CHECK(fronts[1] == std::vector<int>{2});
    CHECK(fronts[2] == std::vector<int>{0});
    CHECK(pop[1].rank == 1);
    CHECK(pop[2].rank == 2);
    CHECK(pop[0].rank == 3);
}

TEST_CASE("sort matches brute-force front decomposition") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> size_dist(1, 64);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Individual> pop = random_pool(size_dist(rng), rng);
        std::vector<Individual> copy = pop;
        CHECK(fast_nondominated_sort(copy) == oracle::front_decomposition(pop));
    }
}

TEST_CASE("small fronts are all boundary") {
    std::vector<Individual> pop = {synth(1, 2, 3), synth(2, 1, 3)};
    auto dist = crowding_distance(pop);
    CHECK(dist == std::vector<double>{kInf, kInf});
}

TEST_CASE("crowding follows the normalized gap formula") {
    std::vector<Individual> pop = {synth(0, 7, 7), synth(5, 7, 7), synth(10, 7, 7)};
    auto dist = crowding_distance(pop);
    CHECK(dist[0] == kInf);
    CHECK(dist[2] == kInf);
    CHECK(dist[1] == doctest::Approx(1.0));
}

TEST_CASE("fully degenerate fronts give interior members zero") {
    std::vector<Individual> pop = {synth(4, 4, 4), synth(4, 4, 4), synth(4, 4, 4)};
    auto dist = crowding_distance(pop);
    CHECK(dist[0] == kInf);
    CHECK(dist[1] == 0.0);
    CHECK(dist[2] == kInf);
}

TEST_CASE("tournament prefers rank, then crowding, then index") {
    std::vector<Individual> pop(4);
    pop[0].rank = 1; pop[0].crowding = 0.3;
    pop[1].rank = 2; pop[1].crowding = kInf;
    pop[2].rank = 1; pop[2].crowding = kInf;
    pop[3].rank = 1; pop[3].crowding = kInf;
    CHECK(tournament_winner(pop, 0, 1) == 0);  // rank wins
    CHECK(tournament_winner(pop, 2, 0) == 2);  // crowding wins
    CHECK(tournament_winner(pop, 3, 2) == 2);  // index wins
    CHECK(tournament_winner(pop, 1, 1) == 1);
}

TEST_CASE("crossover is a copy when the gate stays closed") {
    Rng rng(1);
    Placement a{{0, 1, 0, 1}}, b{{1, 0, 1, 0}};
    auto [c1, c2] = uniform_crossover(a, b, 0.0, rng);
    CHECK(c1 == a);
    CHECK(c2 == b);
}

TEST_CASE("crossover of equal parents is the identity") {
    Rng rng(2);
    Placement a{{2, 2, 1, 0}};
    for (int t = 0; t < 20; ++t) {
        auto [c1, c2] = uniform_crossover(a, a, 1.0, rng);
        CHECK(c1 == a);
        CHECK(c2 == a);
    }
}

TEST_CASE("crossover swaps genes at the expected rate") {
    Rng rng(3);
    Placement a{{0, 0, 0, 0, 0, 0, 0, 0}}, b{{1, 1, 1, 1, 1, 1, 1, 1}};
    const int trials = 10000;
    long swapped = 0;
    for (int t = 0; t < trials; ++t) {
        auto [c1, c2] = uniform_crossover(a, b, 1.0, rng);
        for (int g = 0; g < 8; ++g) swapped += c1.assignment[g] == 1;
    }
    const double rate = static_cast<double>(swapped) / (8.0 * trials);
    CHECK(rate == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("mutation with zero probability is the identity") {
    Rng rng(4);
    Placement p{{0, 1, 2, 3}};
    CHECK(mutate(p, 0.0, 4, rng) == p);
}

TEST_CASE("forced mutation flips every gene with two PMs") {
    Rng rng(5);
    Placement p{{0, 1, 0, 1}};
    CHECK(mutate(p, 1.0, 2, rng) == Placement{{1, 0, 1, 0}});
}

TEST_CASE("mutation is a no-op with a single PM") {
    Rng rng(6);
    Placement p{{0, 0, 0}};
    CHECK(mutate(p, 1.0, 1, rng) == p);
}

TEST_CASE("mutation changes about one gene at rate 1/n") {
    Rng rng(7);
    const int n = 8, trials = 20000;
    Placement p{std::vector<int>(n, 0)};
    long changed = 0;
    for (int t = 0; t < trials; ++t) {
        Placement q = mutate(p, 1.0 / n, 6, rng);
        for (int g = 0; g < n; ++g) changed += q.assignment[g] != 0;
    }
    CHECK(static_cast<double>(changed) / trials == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("survivors are whole fronts when they fit exactly") {
    std::vector<Individual> combined = {synth(1, 2, 3), synth(2, 1, 3),
                                        synth(5, 5, 5), synth(6, 6, 6)};
    auto res = nsga2_survivor_selection(combined, 2);
    CHECK(res.log.slots == 0);
    CHECK(res.log.last_front_size == 0);
    REQUIRE(res.next.size() == 2);
    CHECK(res.next[0].objectives == ObjectiveVector{1, 2, 3});
    CHECK(res.next[1].objectives == ObjectiveVector{2, 1, 3});
}

TEST_CASE("an overflowing single front is truncated by crowding") {
    std::vector<Individual> combined;
    for (int i = 0; i <= 5; ++i)
        combined.push_back(synth(i, 5 - i, 7));  // one nondominated line
    auto res = nsga2_survivor_selection(combined, 3);
    CHECK(res.log.last_front_size == 6);
    CHECK(res.log.slots == 3);

    // oracle: order by (crowding desc, index asc), keep 3
    std::vector<Individual> sorted = combined;
    auto fronts = fast_nondominated_sort(sorted);
    assign_crowding(sorted, fronts);
    std::vector<int> idx = {0, 1, 2, 3, 4, 5};
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (sorted[i].crowding != sorted[j].crowding)
            return sorted[i].crowding > sorted[j].crowding;
        return i < j;
    });
    std::set<double> expect;
    for (int t = 0; t < 3; ++t) expect.insert(sorted[idx[t]].objectives.comm_cost);
    std::set<double> got;
    for (const auto& ind : res.next) got.insert(ind.objectives.comm_cost);
    CHECK(got == expect);
}

TEST_CASE("a single dominant individual survives N=1 selection") {
    std::vector<Individual> combined = {synth(5, 5, 5), synth(1, 1, 1),
                                        synth(3, 4, 5), synth(2, 3, 4)};
    auto res = nsga2_survivor_selection(combined, 1);
    REQUIRE(res.next.size() == 1);
    CHECK(res.next[0].objectives == ObjectiveVector{1, 1, 1});
}

TEST_CASE("selection is elitist on random pools") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Individual> pool = random_pool(12, rng);
        // find a member dominating all others, if any
        int boss = -1;
        for (int i = 0; i < 12 && boss < 0; ++i) {
            bool all = true;
            for (int j = 0; j < 12; ++j)
                if (j != i && !oracle::constrained_dominates(pool[i], pool[j])) {
                    all = false;
                    break;
                }
            if (all) boss = i;
        }
        if (boss < 0) continue;
        auto res = nsga2_survivor_selection(pool, 6);
        bool present = false;
        for (const auto& ind : res.next)
            present = present || testutil::individuals_equal(ind, [&] {
                          Individual x = pool[boss];
                          x.rank = 1;
                          x.crowding = kInf;
                          return x;
                      }());
        CHECK(present);
    }
}

TEST_CASE("runs are deterministic under a fixed seed") {
    Instance inst = generate_instance(8, 6, 0.5, 17);
    EvolutionConfig cfg = EvolutionConfig::defaults_for(inst);
    cfg.pop_size = 4;
    cfg.generations = 1;
    cfg.seed = 9;
    CHECK(testutil::records_equal(run_nsga2(inst, cfg), run_nsga2(inst, cfg)));

    cfg.pop_size = 20;
    cfg.generations = 5;
    CHECK(testutil::records_equal(run_nsga2(inst, cfg), run_nsga2(inst, cfg)));
}

TEST_CASE("the final population always has pop_size members") {
    Instance inst = generate_instance(6, 4, 0.5, 23);
    EvolutionConfig cfg = EvolutionConfig::defaults_for(inst);
    cfg.pop_size = 10;
    cfg.generations = 4;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        cfg.seed = seed;
        RunRecord rec = run_nsga2(inst, cfg);
        CHECK(rec.final_population.size() == 10);
        CHECK(rec.generations.size() == 4);
    }
}

TEST_CASE("invalid configurations are rejected") {
    Instance inst = tiny_instance();
    EvolutionConfig cfg = EvolutionConfig::defaults_for(inst);
    cfg.pop_size = 5;  // odd
    CHECK_THROWS_AS(run_nsga2(inst, cfg), std::invalid_argument);
    cfg.pop_size = 4;
    cfg.generations = 0;
    CHECK_THROWS_AS(run_nsga2(inst, cfg), std::invalid_argument);
    cfg.generations = 1;
    cfg.p_crossover = 1.5;
    CHECK_THROWS_AS(run_nsga2(inst, cfg), std::invalid_argument);
    cfg.p_crossover = 0.9;
    cfg.p_mutation_per_gene = -0.1;
    CHECK_THROWS_AS(run_nsga2(inst, cfg), std::invalid_argument);
}

TEST_CASE("front 1 of a converged tiny run lies on the true Pareto set") {
    Instance inst = tiny_instance();
    auto pareto = oracle::enumerate_feasible_pareto(inst);
    EvolutionConfig cfg = EvolutionConfig::defaults_for(inst);
    cfg.pop_size = 16;
    cfg.generations = 30;
    cfg.seed = 3;
    RunRecord rec = run_nsga2(inst, cfg);
    for (const Individual& ind : rec.final_population) {
        if (ind.rank != 1) continue;
        REQUIRE(ind.feasible());
        CHECK(std::find(pareto.begin(), pareto.end(), ind.objectives.as_array()) !=
              pareto.end());
    }
}
