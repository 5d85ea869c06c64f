#ifndef VMP_INSTANCE_HPP
#define VMP_INSTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vmp {

/// A workload unit. Demands are fractions of a unit-capacity server.
struct VirtualMachine {
    int id = 0;
    double cpu_demand = 0.0;
    double mem_demand = 0.0;

    bool operator==(const VirtualMachine&) const = default;
};

/// A server. Capacities are positive; power draw is linear in CPU load.
struct PhysicalMachine {
    int id = 0;
    double cpu_capacity = 1.0;
    double mem_capacity = 1.0;
    double power_idle = 160.0;  // watts when active but unloaded
    double power_max = 250.0;   // watts at full CPU load

    bool operator==(const PhysicalMachine&) const = default;
};

/// The data center: machines plus pairwise traffic (VMs) and distance (PMs).
///
/// Immutable by convention once built; all solver code treats it as
/// shared read-only state.
struct Instance {
    std::vector<VirtualMachine> vms;
    std::vector<PhysicalMachine> pms;
    std::vector<std::vector<double>> traffic;   // n x n, symmetric, zero diagonal
    std::vector<std::vector<double>> distance;  // m x m, symmetric, zero diagonal
    nlohmann::json meta = nlohmann::json::object();

    int n_vms() const { return static_cast<int>(vms.size()); }
    int m_pms() const { return static_cast<int>(pms.size()); }

    bool operator==(const Instance&) const = default;
};

/// One violated invariant: a stable machine-readable code plus a message.
struct ValidationIssue {
    std::string code;
    std::string message;
};

using ValidationReport = std::vector<ValidationIssue>;

/// Every violated invariant of the instance and its members. Empty = valid.
ValidationReport validate_instance(const Instance& inst);

/// Thrown by load_instance on malformed input (bad JSON, wrong shapes/types).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by load_instance when the file is well-formed but the instance
/// breaks an invariant. Carries the full validation report.
class validation_error : public std::runtime_error {
public:
    validation_error(const std::string& what, ValidationReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Reads an instance from JSON text. Field order in the file is irrelevant.
/// Throws parse_error / validation_error.
Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);

/// Writes the instance as JSON; load_instance(save_instance(x)) == x exactly
/// (doubles are emitted in round-trip form).
void save_instance(const Instance& inst, std::ostream& out);
void save_instance_file(const Instance& inst, const std::string& path);

/// Deterministic random instance for experiments.
///
/// PM capacities are 1.0/1.0 with default power parameters. VM demands are
/// uniform draws rescaled so the totals hit load_factor * m_pms exactly;
/// a demand that would exceed 1.0 is clamped and meta["demand_clamped"]
/// is set. Traffic is zero for half the VM pairs, else uniform in (0,10].
/// Distance follows a two-level tree: PMs grouped into racks of 3,
/// distance 0 on the same PM, 2 within a rack, 4 across racks.
Instance generate_instance(int n_vms, int m_pms, double load_factor,
                           std::uint64_t seed);

}  // namespace vmp

#endif
