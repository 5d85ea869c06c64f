#ifndef VMP_SCP_HPP
#define VMP_SCP_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <vector>

#include "vmp/objectives.hpp"

namespace vmp {

/// Separable ceteris-paribus preferences: for each annotated VM, a total
/// order over the PMs stored as a permutation, most-preferred first.
///
/// Immutable after construction. rank lookups are O(1) via a precomputed
/// inverse so dominance checks stay linear in the number of annotated VMs.
class ScpStructure {
public:
    ScpStructure() = default;

    /// Builds from explicit most-preferred-first orders. Each order must be
    /// a permutation of {0..m_pms-1} and each key a VM id in [0, n_vms).
    /// Throws std::invalid_argument otherwise.
    static ScpStructure from_orders(std::map<int, std::vector<int>> orders,
                                    int m_pms, int n_vms);

    int k() const { return static_cast<int>(ids_.size()); }
    int pm_count() const { return m_; }
    bool annotated(int vm) const;

    /// Annotated VM ids in ascending order (the canonical score order).
    const std::vector<int>& annotated_ids() const { return ids_; }

    /// The preference permutation for an annotated VM, most-preferred first.
    const std::vector<int>& order(int vm) const;

    /// 1-based position of pm in vm's preference order (1 = most preferred).
    int rank_of(int vm, int pm) const;

private:
    int m_ = 0;
    std::vector<int> ids_;
    std::map<int, std::vector<int>> orders_;
    std::map<int, std::vector<int>> rank_by_pm_;  // vm -> (pm -> 1-based rank)
};

/// Preference ranks of a placement's annotated VMs, ascending VM id;
/// entry j = rank of the j-th annotated VM's assigned PM (1 = best).
using ScoreVector = std::vector<int>;

int rank_of(const ScpStructure& scp, int vm, int pm);

ScoreVector score(const ScpStructure& scp, const Placement& p);

/// Annotated VMs on which the two placements differ, ascending.
std::vector<int> diff(const Placement& a, const Placement& b,
                      const ScpStructure& scp);

/// Strict SCP dominance: a and b differ on at least one annotated VM and a
/// is strictly preferred on every annotated VM where they differ.
/// Single pass over the annotated VMs.
bool scp_dominates(const Placement& a, const Placement& b,
                   const ScpStructure& scp);

/// Indices (ascending) of the members not SCP-dominated by any other.
/// Nonempty for nonempty pop; throws std::invalid_argument on empty pop.
std::vector<int> cpr_pareto(const std::vector<Placement>& pop,
                            const ScpStructure& scp);

/// Same filter expressed on precomputed score vectors (all of equal size k).
std::vector<int> cpr_pareto_scores(const std::vector<ScoreVector>& scores);

/// Distance-to-ideal metric: sums rank r per annotated VM, counting 0 when
/// r == 1. Zero iff every annotated VM sits on its most-preferred PM.
long long weighted_flips(const ScpStructure& scp, const Placement& p);
long long weighted_flips_of_score(const ScoreVector& s);

/// One independent uniform random permutation per annotated VM.
/// Deterministic under fixed seed.
ScpStructure generate_preferences(const Instance& inst,
                                  const std::set<int>& annotated_vms,
                                  std::uint64_t seed);

/// Preference file: JSON object mapping VM id (as string) to a permutation
/// of PM ids, most-preferred first.
ScpStructure load_preferences(std::istream& in, const Instance& inst);
ScpStructure load_preferences_file(const std::string& path, const Instance& inst);
void save_preferences(const ScpStructure& scp, std::ostream& out);
void save_preferences_file(const ScpStructure& scp, const std::string& path);

}  // namespace vmp

#endif
