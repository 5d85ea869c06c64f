#ifndef VMP_HARNESS_HPP
#define VMP_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vmp/cpnsga.hpp"
#include "vmp/moea.hpp"

namespace vmp {

struct HypervolumeStats {
    int discarded_points = 0;     // points not componentwise <= ref
    bool empty_after_filter = false;
};

/// Exact 3-D hypervolume of the region between a minimization front and a
/// reference point: the measure of the union of boxes [point, ref].
/// Points not componentwise <= ref are discarded (counted in stats); an
/// empty front after filtering yields 0.
double hypervolume(const std::vector<ObjectiveVector>& front,
                   const ObjectiveVector& ref,
                   HypervolumeStats* stats = nullptr);

/// One experiment: a named instance/preference setup swept over several
/// generation counts with paired-seed repetitions.
struct ScenarioSpec {
    std::string name;
    int n_vms = 8;
    int m_pms = 6;
    int pref_count = 3;
    int pop_size = 100;
    std::vector<int> generation_settings;
    int repetitions = 5;
    std::uint64_t base_seed = 0;
};

/// Results of one paired run (same seed, both algorithms).
struct ComparisonCell {
    int generations = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    double flips_mean_nsga2 = 0.0;
    double flips_mean_cpnsga = 0.0;
    double hv_nsga2 = 0.0;
    double hv_cpnsga = 0.0;
    // mean CPR selection fractions over the generations where the filter
    // ran; absent when no generation overflowed
    std::optional<double> cpr_fraction_mean;
    std::optional<double> cpr_fraction_of_front_mean;
    int front1_size_nsga2 = 0;
    int front1_size_cpnsga = 0;
    double front1_max_violation_nsga2 = 0.0;
    double front1_max_violation_cpnsga = 0.0;
    // wall-clock measurement; reported separately from the deterministic
    // payload and never part of byte-compared outputs
    double wall_s_nsga2 = 0.0;
    double wall_s_cpnsga = 0.0;
};

struct ComparisonReport {
    std::string scenario;
    std::vector<ComparisonCell> cells;  // settings outer, repetitions inner
};

/// Runs both algorithms for every (generation setting, repetition) with
/// seed = base_seed + repetition, identical for the pair. The hypervolume
/// reference per cell is 1.1 x the componentwise maximum over the union of
/// both final feasible rank-1 fronts.
ComparisonReport run_comparison(const ScenarioSpec& spec, const Instance& inst,
                                const ScpStructure& scp);

/// A scenario bundled with its generated instance and preferences.
struct ScenarioSetup {
    ScenarioSpec spec;
    Instance instance;
    ScpStructure scp;
};

/// The two built-in experiment scenarios: 6 PMs, 8 VMs, preferences on the
/// first 3 (PRF1) or 6 (PRF2) VMs, population 100, generation settings
/// {8, 16, 24, 32, 40}, 5 repetitions.
std::vector<ScenarioSetup> built_in_scenarios();

/// Derived seeds for a scenario's generated inputs.
std::uint64_t scenario_instance_seed(std::uint64_t base_seed);
std::uint64_t scenario_preference_seed(std::uint64_t base_seed);

// --- serialization -------------------------------------------------------
// All writers are deterministic: fixed column orders, floats at 17
// significant digits. Wall-clock timings are only ever written by
// write_timings_csv.

/// Doubles formatted with %.17g (round-trip exact).
std::string format_double(double v);

/// Per-generation rank-1 front members of one run.
/// Columns: run_id,generation,individual_id,comm_cost,power,wastage,
/// violation,rank,crowding,weighted_flips,score (ranks ';'-joined).
void write_front_csv(std::ostream& out, const std::string& run_id,
                     const RunRecord& rec);

/// Per-generation statistics and logs of one run as JSON. Includes wall
/// times unless include_timings is false.
void write_metrics_json(std::ostream& out, const std::string& run_id,
                        const RunRecord& rec, bool include_timings = true);

/// Columns: scenario,generations,repetition,seed,flips_mean_nsga2,
/// flips_mean_cpnsga,hv_nsga2,hv_cpnsga,cpr_fraction_mean,
/// cpr_fraction_of_front_mean (empty fields when absent).
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

/// The same cells as a JSON document.
void write_comparison_json(std::ostream& out, const ComparisonReport& report);

/// Columns: scenario,generations,repetition,seed,wall_s_nsga2,wall_s_cpnsga.
void write_timings_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace vmp

#endif
