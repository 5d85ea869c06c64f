#ifndef VMP_CPNSGA_HPP
#define VMP_CPNSGA_HPP

#include "vmp/moea.hpp"
#include "vmp/scp.hpp"

namespace vmp {

/// NSGA-II survivor selection with the CPR filter applied to the
/// overflowing front before crowding-distance truncation.
///
/// Whole fronts are admitted exactly as in nsga2_survivor_selection. For
/// the overflowing front with `slots` free seats, let C be its CPR-Pareto
/// subset: if C fits, all of C is admitted and the rest of the seats are
/// filled from the remaining front members by crowding distance; if C
/// overfills, the `slots` members of C with the largest crowding distance
/// are admitted. Crowding distances are the ones computed over the whole
/// front. Index ties break low.
SurvivorResult cpr_survivor_selection(std::vector<Individual> combined,
                                      int n_survivors, const ScpStructure& scp);

/// CP-NSGA: the run_nsga2 loop with cpr_survivor_selection in place of the
/// plain survivor selection. The PRNG draw order is identical to
/// run_nsga2's (the CPR filter consumes no randomness), so runs with equal
/// seeds share initial populations and all variation draws.
///
/// Requires at least one annotated VM; throws std::invalid_argument when
/// scp is empty.
RunRecord run_cp_nsga(const Instance& inst, const EvolutionConfig& cfg,
                      const ScpStructure& scp);

}  // namespace vmp

#endif
