#include "vmp/moea.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Individual make_individual(const Instance& inst, Placement p) {
    assert(placement_valid(inst, p));
    Individual ind;
    Evaluation ev = evaluate(inst, p);
    ind.placement = std::move(p);
    ind.objectives = ev.objectives;
    ind.violation = ev.violation;
    return ind;
}

EvolutionConfig EvolutionConfig::defaults_for(const Instance& inst) {
    EvolutionConfig cfg;
    cfg.p_mutation_per_gene = 1.0 / inst.n_vms();
    return cfg;
}

bool constrained_dominates(const Individual& a, const Individual& b) {
    const bool fa = a.feasible(), fb = b.feasible();
    if (fa != fb) return fa;
    if (!fa) return a.violation < b.violation;
    const auto oa = a.objectives.as_array();
    const auto ob = b.objectives.as_array();
    bool strict = false;
    for (int i = 0; i < 3; ++i) {
        if (oa[i] > ob[i]) return false;
        if (oa[i] < ob[i]) strict = true;
    }
    return strict;
}

std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop) {
    const int n = static_cast<int>(pop.size());
    if (n == 0) throw std::invalid_argument("fast_nondominated_sort: empty population");

    std::vector<std::vector<int>> dominated_by(n);  // S[p]: members p dominates
    std::vector<int> dom_count(n, 0);               // how many dominate p
    std::vector<std::vector<int>> fronts(1);

    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            if (constrained_dominates(pop[p], pop[q])) {
                dominated_by[p].push_back(q);
                ++dom_count[q];
            } else if (constrained_dominates(pop[q], pop[p])) {
                dominated_by[q].push_back(p);
                ++dom_count[p];
            }
        }
    }
    for (int p = 0; p < n; ++p) {
        if (dom_count[p] == 0) {
            pop[p].rank = 1;
            fronts[0].push_back(p);
        }
    }

    int r = 0;
    while (!fronts[r].empty()) {
        std::vector<int> next;
        for (int p : fronts[r]) {
            for (int q : dominated_by[p]) {
                if (--dom_count[q] == 0) {
                    pop[q].rank = r + 2;
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
        ++r;
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& pop,
                                      const std::vector<int>& front) {
    const int k = static_cast<int>(front.size());
    if (k == 0) throw std::invalid_argument("crowding_distance: empty front");
    std::vector<double> dist(k, 0.0);

    std::vector<int> order(k);
    for (int obj = 0; obj < 3; ++obj) {
        auto value = [&](int t) { return pop[front[t]].objectives.as_array()[obj]; };
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int s, int t) {
            double vs = value(s), vt = value(t);
            if (vs != vt) return vs < vt;
            return front[s] < front[t];
        });
        dist[order.front()] = kInf;
        dist[order.back()] = kInf;
        const double range = value(order.back()) - value(order.front());
        if (range <= 0.0) continue;
        for (int t = 1; t + 1 < k; ++t)
            dist[order[t]] += (value(order[t + 1]) - value(order[t - 1])) / range;
    }
    return dist;
}

std::vector<double> crowding_distance(const std::vector<Individual>& front) {
    std::vector<int> idx(front.size());
    std::iota(idx.begin(), idx.end(), 0);
    return crowding_distance(front, idx);
}

void assign_crowding(std::vector<Individual>& pop,
                     const std::vector<std::vector<int>>& fronts) {
    for (const auto& front : fronts) {
        const std::vector<double> dist = crowding_distance(pop, front);
        for (std::size_t t = 0; t < front.size(); ++t)
            pop[front[t]].crowding = dist[t];
    }
}

int tournament_winner(const std::vector<Individual>& pop, int i, int j) {
    const Individual& a = pop[i];
    const Individual& b = pop[j];
    if (a.rank != b.rank) return a.rank < b.rank ? i : j;
    if (a.crowding != b.crowding) return a.crowding > b.crowding ? i : j;
    return std::min(i, j);
}

int binary_tournament(const std::vector<Individual>& pop, Rng& rng) {
    std::uniform_int_distribution<int> draw(0, static_cast<int>(pop.size()) - 1);
    const int i = draw(rng);
    const int j = draw(rng);
    return tournament_winner(pop, i, j);
}

std::pair<Placement, Placement> uniform_crossover(const Placement& a,
                                                  const Placement& b,
                                                  double p_crossover, Rng& rng) {
    assert(a.assignment.size() == b.assignment.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Placement c1 = a, c2 = b;
    if (unit(rng) < p_crossover) {
        for (std::size_t g = 0; g < c1.assignment.size(); ++g)
            if (unit(rng) < 0.5) std::swap(c1.assignment[g], c2.assignment[g]);
    }
    return {std::move(c1), std::move(c2)};
}

Placement mutate(const Placement& p, double p_mutation_per_gene, int m_pms,
                 Rng& rng) {
    if (m_pms <= 1) return p;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Placement q = p;
    for (int& gene : q.assignment) {
        if (unit(rng) < p_mutation_per_gene) {
            std::uniform_int_distribution<int> pick(0, m_pms - 2);
            int r = pick(rng);
            if (r >= gene) ++r;  // uniform over the other m-1 PMs
            gene = r;
        }
    }
    return q;
}

namespace {

// Seats from the overflowing front, by largest crowding then lowest pool
// index; the admitted set is appended in ascending pool order.
std::vector<int> pick_by_crowding(const std::vector<Individual>& pool,
                                  std::vector<int> candidates, int seats) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](int i, int j) {
        if (pool[i].crowding != pool[j].crowding)
            return pool[i].crowding > pool[j].crowding;
        return i < j;
    });
    candidates.resize(seats);
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

}  // namespace

SurvivorResult nsga2_survivor_selection(std::vector<Individual> combined,
                                        int n_survivors) {
    const int total = static_cast<int>(combined.size());
    if (n_survivors <= 0 || n_survivors > total)
        throw std::invalid_argument("survivor selection: bad survivor count");

    const auto fronts = fast_nondominated_sort(combined);
    assign_crowding(combined, fronts);

    SurvivorResult res;
    res.next.reserve(n_survivors);
    int admitted = 0;
    for (const auto& front : fronts) {
        if (admitted == n_survivors) break;
        const int size = static_cast<int>(front.size());
        if (admitted + size <= n_survivors) {
            for (int i : front) res.next.push_back(combined[i]);
            admitted += size;
            continue;
        }
        const int slots = n_survivors - admitted;
        res.log.last_front_size = size;
        res.log.slots = slots;
        for (int i : pick_by_crowding(combined, front, slots))
            res.next.push_back(combined[i]);
        admitted = n_survivors;
        break;
    }
    return res;
}

double mean_weighted_flips(const ScpStructure& scp,
                           const std::vector<Individual>& pop) {
    if (scp.k() == 0 || pop.empty()) return 0.0;
    long long total = 0;
    for (const Individual& ind : pop) total += weighted_flips(scp, ind.placement);
    return static_cast<double>(total) / static_cast<double>(pop.size());
}

namespace detail {

RunRecord run_evolution(const Instance& inst, const EvolutionConfig& cfg,
                        const ScpStructure* scp, const SurvivorSelector& select) {
    if (cfg.pop_size <= 0 || cfg.pop_size % 2 != 0)
        throw std::invalid_argument("EvolutionConfig: pop_size must be a positive even integer");
    if (cfg.generations <= 0)
        throw std::invalid_argument("EvolutionConfig: generations must be positive");
    if (!(cfg.p_crossover >= 0.0 && cfg.p_crossover <= 1.0))
        throw std::invalid_argument("EvolutionConfig: p_crossover must be in [0,1]");
    if (!(cfg.p_mutation_per_gene >= 0.0 && cfg.p_mutation_per_gene <= 1.0))
        throw std::invalid_argument("EvolutionConfig: p_mutation_per_gene must be in [0,1]");
    if (inst.n_vms() < 1 || inst.m_pms() < 1)
        throw std::invalid_argument("run: instance must have at least one VM and one PM");

    const int n = inst.n_vms();
    const int m = inst.m_pms();
    const int pop_size = cfg.pop_size;
    const bool log_scores = scp != nullptr && scp->k() > 0;

    Rng rng(cfg.seed);
    const auto t_run = std::chrono::steady_clock::now();

    std::vector<Individual> pop;
    pop.reserve(pop_size);
    {
        std::uniform_int_distribution<int> gene(0, m - 1);
        for (int i = 0; i < pop_size; ++i) {
            Placement p;
            p.assignment.resize(n);
            for (int g = 0; g < n; ++g) p.assignment[g] = gene(rng);
            pop.push_back(make_individual(inst, std::move(p)));
        }
    }
    assign_crowding(pop, fast_nondominated_sort(pop));

    RunRecord rec;
    rec.generations.reserve(cfg.generations);
    for (int gen = 1; gen <= cfg.generations; ++gen) {
        const auto t_gen = std::chrono::steady_clock::now();

        std::vector<Individual> combined = pop;
        combined.reserve(2 * pop_size);
        for (int pair = 0; pair < pop_size / 2; ++pair) {
            const int ia = binary_tournament(pop, rng);
            const int ib = binary_tournament(pop, rng);
            auto children = uniform_crossover(pop[ia].placement, pop[ib].placement,
                                              cfg.p_crossover, rng);
            Placement c1 = mutate(children.first, cfg.p_mutation_per_gene, m, rng);
            Placement c2 = mutate(children.second, cfg.p_mutation_per_gene, m, rng);
            combined.push_back(make_individual(inst, std::move(c1)));
            combined.push_back(make_individual(inst, std::move(c2)));
        }

        SurvivorResult sel = select(std::move(combined), pop_size);
        pop = std::move(sel.next);
        const auto fronts = fast_nondominated_sort(pop);
        assign_crowding(pop, fronts);

        GenerationLog log;
        log.generation = gen;
        log.selection = sel.log;
        log.cpr = sel.cpr;
        if (log.cpr) log.cpr->generation = gen;
        if (log_scores) {
            log.scores.reserve(pop_size);
            log.weighted_flips.reserve(pop_size);
            for (const Individual& ind : pop) {
                log.scores.push_back(score(*scp, ind.placement));
                log.weighted_flips.push_back(weighted_flips_of_score(log.scores.back()));
            }
        }
        log.front1.reserve(fronts[0].size());
        for (int i : fronts[0]) {
            FrontMember fm;
            fm.individual_id = i;
            fm.objectives = pop[i].objectives;
            fm.violation = pop[i].violation;
            fm.rank = 1;
            fm.crowding = pop[i].crowding;
            if (log_scores) {
                fm.score = log.scores[i];
                fm.weighted_flips = log.weighted_flips[i];
            }
            log.front1.push_back(std::move(fm));
        }
        log.wall_time_s = seconds_since(t_gen);
        rec.generations.push_back(std::move(log));
    }

    rec.final_population = std::move(pop);
    rec.total_wall_time_s = seconds_since(t_run);
    return rec;
}

}  // namespace detail

RunRecord run_nsga2(const Instance& inst, const EvolutionConfig& cfg,
                    const ScpStructure* scp) {
    return detail::run_evolution(inst, cfg, scp,
                                 [](std::vector<Individual> combined, int n) {
                                     return nsga2_survivor_selection(std::move(combined), n);
                                 });
}

}  // namespace vmp
