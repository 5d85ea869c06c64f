#ifndef VMP_OBJECTIVES_HPP
#define VMP_OBJECTIVES_HPP

#include <array>
#include <vector>

#include "vmp/instance.hpp"

namespace vmp {

/// A candidate solution: entry i is the PM hosting VM i.
struct Placement {
    std::vector<int> assignment;

    bool operator==(const Placement&) const = default;
};

/// True iff p has one in-range PM entry per VM of inst.
bool placement_valid(const Instance& inst, const Placement& p);

/// The three minimized objectives.
struct ObjectiveVector {
    double comm_cost = 0.0;  // traffic * hop units
    double power = 0.0;      // watts
    double wastage = 0.0;    // dimensionless imbalance index

    std::array<double, 3> as_array() const { return {comm_cost, power, wastage}; }
    bool operator==(const ObjectiveVector&) const = default;
};

/// Per-PM resource usage induced by a placement.
struct LoadProfile {
    std::vector<double> cpu_used;
    std::vector<double> mem_used;
    std::vector<int> vm_count;

    bool active(int pm) const { return vm_count[pm] > 0; }
};

LoadProfile server_loads(const Instance& inst, const Placement& p);

/// Sum over VM pairs of traffic[i][j] * distance between their hosts.
double communication_cost(const Instance& inst, const Placement& p);

/// Sum over active PMs of idle power plus the linear load-proportional term.
/// Inactive PMs draw nothing; utilization is clamped to [0,1] so overloaded
/// placements still get finite values.
double power_consumption(const Instance& inst, const Placement& p);

/// Sum over active PMs of (|remaining_cpu - remaining_mem| + eps) / used
/// resources, all normalized by capacity. Remaining is floored at 0.
double resource_wastage(const Instance& inst, const Placement& p);

constexpr double kWastageEpsilon = 1e-4;

/// Total normalized capacity overflow; exactly 0 iff the placement fits.
double constraint_violation(const Instance& inst, const Placement& p);

/// All three objectives plus the violation in one pass.
struct Evaluation {
    ObjectiveVector objectives;
    double violation = 0.0;
};

Evaluation evaluate(const Instance& inst, const Placement& p);

}  // namespace vmp

#endif
