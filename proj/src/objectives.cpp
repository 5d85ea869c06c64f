#include "vmp/objectives.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace vmp {

bool placement_valid(const Instance& inst, const Placement& p) {
    if (static_cast<int>(p.assignment.size()) != inst.n_vms()) return false;
    for (int pm : p.assignment)
        if (pm < 0 || pm >= inst.m_pms()) return false;
    return true;
}

LoadProfile server_loads(const Instance& inst, const Placement& p) {
    assert(placement_valid(inst, p));
    const int m = inst.m_pms();
    LoadProfile loads;
    loads.cpu_used.assign(m, 0.0);
    loads.mem_used.assign(m, 0.0);
    loads.vm_count.assign(m, 0);
    for (int i = 0; i < inst.n_vms(); ++i) {
        const int k = p.assignment[i];
        loads.cpu_used[k] += inst.vms[i].cpu_demand;
        loads.mem_used[k] += inst.vms[i].mem_demand;
        loads.vm_count[k] += 1;
    }
    return loads;
}

double communication_cost(const Instance& inst, const Placement& p) {
    assert(placement_valid(inst, p));
    const int n = inst.n_vms();
    double cost = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            cost += inst.traffic[i][j] * inst.distance[p.assignment[i]][p.assignment[j]];
    return cost;
}

namespace {

double power_of_loads(const Instance& inst, const LoadProfile& loads) {
    double total = 0.0;
    for (int k = 0; k < inst.m_pms(); ++k) {
        if (!loads.active(k)) continue;
        const auto& pm = inst.pms[k];
        double u = loads.cpu_used[k] / pm.cpu_capacity;
        u = std::clamp(u, 0.0, 1.0);
        total += pm.power_idle + (pm.power_max - pm.power_idle) * u;
    }
    return total;
}

double wastage_of_loads(const Instance& inst, const LoadProfile& loads) {
    double total = 0.0;
    for (int k = 0; k < inst.m_pms(); ++k) {
        if (!loads.active(k)) continue;
        const auto& pm = inst.pms[k];
        const double u_cpu = loads.cpu_used[k] / pm.cpu_capacity;
        const double u_mem = loads.mem_used[k] / pm.mem_capacity;
        const double r_cpu = std::max(0.0, 1.0 - u_cpu);
        const double r_mem = std::max(0.0, 1.0 - u_mem);
        total += (std::abs(r_cpu - r_mem) + kWastageEpsilon) / (u_cpu + u_mem);
    }
    return total;
}

double violation_of_loads(const Instance& inst, const LoadProfile& loads) {
    double total = 0.0;
    for (int k = 0; k < inst.m_pms(); ++k) {
        const auto& pm = inst.pms[k];
        total += std::max(0.0, loads.cpu_used[k] - pm.cpu_capacity) / pm.cpu_capacity;
        total += std::max(0.0, loads.mem_used[k] - pm.mem_capacity) / pm.mem_capacity;
    }
    return total;
}

}  // namespace

double power_consumption(const Instance& inst, const Placement& p) {
    return power_of_loads(inst, server_loads(inst, p));
}

double resource_wastage(const Instance& inst, const Placement& p) {
    return wastage_of_loads(inst, server_loads(inst, p));
}

double constraint_violation(const Instance& inst, const Placement& p) {
    return violation_of_loads(inst, server_loads(inst, p));
}

Evaluation evaluate(const Instance& inst, const Placement& p) {
    const LoadProfile loads = server_loads(inst, p);
    Evaluation ev;
    ev.objectives.comm_cost = communication_cost(inst, p);
    ev.objectives.power = power_of_loads(inst, loads);
    ev.objectives.wastage = wastage_of_loads(inst, loads);
    ev.violation = violation_of_loads(inst, loads);
    return ev;
}

}  // namespace vmp
