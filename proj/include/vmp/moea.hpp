#ifndef VMP_MOEA_HPP
#define VMP_MOEA_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "vmp/objectives.hpp"
#include "vmp/scp.hpp"

namespace vmp {

using Rng = std::mt19937_64;

/// A placement with its cached evaluation and sorting state.
/// rank == 0 and crowding == kUnsetCrowding mean "not sorted yet".
struct Individual {
    Placement placement;
    ObjectiveVector objectives;
    double violation = 0.0;
    int rank = 0;           // 1-based front index once sorted
    double crowding = -1.0; // +inf on front boundaries

    bool feasible() const { return violation == 0.0; }
};

constexpr double kUnsetCrowding = -1.0;

Individual make_individual(const Instance& inst, Placement p);

struct EvolutionConfig {
    int pop_size = 100;           // even, > 0
    int generations = 100;        // > 0
    double p_crossover = 0.9;
    double p_mutation_per_gene = 0.1;
    std::uint64_t seed = 0;
    static constexpr int tournament_size = 2;

    /// Defaults used throughout: p_crossover 0.9, p_mutation 1/n.
    static EvolutionConfig defaults_for(const Instance& inst);
};

/// Feasibility-first domination: a feasible solution beats an infeasible
/// one; two infeasibles compare by violation; two feasibles by Pareto
/// dominance over the three objectives.
bool constrained_dominates(const Individual& a, const Individual& b);

/// Deb's fast nondominated sort under constrained_dominates. Sets rank on
/// every individual (1-based) and returns the fronts as ascending index
/// lists, best front first.
std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop);

/// Crowding distances for one front, aligned with the order of `front`.
/// Boundary members per objective get +inf; interior members sum the
/// normalized neighbor gaps, skipping objectives with zero range. Ties in
/// an objective are ordered by index.
std::vector<double> crowding_distance(const std::vector<Individual>& pop,
                                      const std::vector<int>& front);
std::vector<double> crowding_distance(const std::vector<Individual>& front);

/// Sets the crowding field per front.
void assign_crowding(std::vector<Individual>& pop,
                     const std::vector<std::vector<int>>& fronts);

/// Winner of a rank / crowding / index comparison between pop[i] and pop[j].
int tournament_winner(const std::vector<Individual>& pop, int i, int j);

/// Draws two indices uniformly and returns the tournament winner's index.
/// Requires rank and crowding to be set.
int binary_tournament(const std::vector<Individual>& pop, Rng& rng);

/// With probability 1-p_crossover, copies of the parents; otherwise each
/// gene swaps between the children with probability one half. The number
/// of draws depends only on the crossover gate, never on gene content.
std::pair<Placement, Placement> uniform_crossover(const Placement& a,
                                                  const Placement& b,
                                                  double p_crossover, Rng& rng);

/// Per gene, with probability p_mutation_per_gene, replaces the entry with
/// a uniform draw over the other m-1 PMs. No-op when m == 1.
Placement mutate(const Placement& p, double p_mutation_per_gene, int m_pms,
                 Rng& rng);

/// Truncation bookkeeping for one survivor-selection call.
/// slots == 0 means the fronts fit exactly and no truncation happened.
struct SelectionLog {
    int last_front_size = 0;  // size of the overflowing front
    int slots = 0;            // seats filled from it
};

/// CPR filter bookkeeping (CP-NSGA only). fraction = cpr_admitted / slots;
/// fraction_of_front = cpr_admitted / last_front_size. Both absent when the
/// fronts fit exactly and the filter never ran.
struct CprSelectionLog {
    int generation = 0;
    int last_front_size = 0;
    int slots = 0;
    int cpr_pareto_size = 0;
    int cpr_admitted = 0;
    std::optional<double> fraction;
    std::optional<double> fraction_of_front;
};

struct SurvivorResult {
    std::vector<Individual> next;
    SelectionLog log;
    std::optional<CprSelectionLog> cpr;
};

/// Standard NSGA-II survivor selection on a parents+offspring pool: admit
/// whole fronts while they fit, then fill the remaining seats from the
/// overflowing front by largest crowding distance (ties to lower index).
/// Selected members keep their pool order.
SurvivorResult nsga2_survivor_selection(std::vector<Individual> combined,
                                        int n_survivors);

/// One rank-1 member of a generation snapshot as logged.
struct FrontMember {
    int individual_id = 0;
    ObjectiveVector objectives;
    double violation = 0.0;
    int rank = 1;
    double crowding = 0.0;
    ScoreVector score;            // empty when no preferences were supplied
    long long weighted_flips = 0;
};

struct GenerationLog {
    int generation = 0;  // 1-based
    std::vector<FrontMember> front1;
    std::vector<ScoreVector> scores;        // per individual, ascending index
    std::vector<long long> weighted_flips;  // per individual, ascending index
    SelectionLog selection;
    std::optional<CprSelectionLog> cpr;
    double wall_time_s = 0.0;  // measurement only; excluded from determinism
};

struct RunRecord {
    std::vector<GenerationLog> generations;
    std::vector<Individual> final_population;  // sorted state (rank/crowding set)
    double total_wall_time_s = 0.0;
};

/// Mean weighted flips over a population; 0 when scp is empty.
double mean_weighted_flips(const ScpStructure& scp,
                           const std::vector<Individual>& pop);

/// The NSGA-II generational loop. scp, when given, is used for logging
/// score vectors and weighted flips only; it never influences selection.
///
/// Deterministic under a fixed seed. Single PRNG stream, draw order:
/// initialization consumes pop_size * n gene draws; every generation then
/// consumes, per offspring pair, 2 + 2 tournament draws, the crossover
/// draws, and the mutation draws for both children, in that order.
/// Evaluation and survivor selection consume no randomness.
RunRecord run_nsga2(const Instance& inst, const EvolutionConfig& cfg,
                    const ScpStructure* scp = nullptr);

namespace detail {

using SurvivorSelector =
    std::function<SurvivorResult(std::vector<Individual>, int)>;

/// Shared generational loop; the two algorithms differ only in `select`.
RunRecord run_evolution(const Instance& inst, const EvolutionConfig& cfg,
                        const ScpStructure* scp, const SurvivorSelector& select);

}  // namespace detail

}  // namespace vmp

#endif
