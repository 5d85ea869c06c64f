#include "vmp/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

using nlohmann::json;

namespace vmp {

namespace {

// 2-D staircase area of the union of boxes [(x,y), (rx,ry)] for
// minimization points. Points must already be <= ref componentwise.
double staircase_area(std::vector<std::pair<double, double>> pts, double rx,
                      double ry) {
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end());
    // keep the nondominated staircase: x ascending, y strictly descending
    std::vector<std::pair<double, double>> stair;
    for (const auto& p : pts) {
        if (!stair.empty() && p.second >= stair.back().second) continue;
        stair.push_back(p);
    }
    double area = 0.0;
    double prev_y = ry;
    for (const auto& [x, y] : stair) {
        area += (rx - x) * (prev_y - y);
        prev_y = y;
    }
    return area;
}

}  // namespace

double hypervolume(const std::vector<ObjectiveVector>& front,
                   const ObjectiveVector& ref, HypervolumeStats* stats) {
    const auto r = ref.as_array();
    std::vector<std::array<double, 3>> pts;
    pts.reserve(front.size());
    int discarded = 0;
    for (const ObjectiveVector& p : front) {
        const auto a = p.as_array();
        if (a[0] <= r[0] && a[1] <= r[1] && a[2] <= r[2])
            pts.push_back(a);
        else
            ++discarded;
    }
    if (stats) {
        stats->discarded_points = discarded;
        stats->empty_after_filter = pts.empty();
    }
    if (pts.empty()) return 0.0;

    // Sweep along the third objective: between consecutive levels the cross
    // section is the union of the rectangles of all points at or below the
    // level, whose area the staircase computes exactly.
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a[2] < b[2]; });
    double volume = 0.0;
    std::size_t i = 0;
    while (i < pts.size()) {
        const double z = pts[i][2];
        std::size_t j = i + 1;
        while (j < pts.size() && pts[j][2] == z) ++j;
        const double z_next = (j < pts.size()) ? pts[j][2] : r[2];
        if (z_next > z) {
            std::vector<std::pair<double, double>> slice;
            slice.reserve(j);
            for (std::size_t t = 0; t < j; ++t) slice.push_back({pts[t][0], pts[t][1]});
            volume += staircase_area(std::move(slice), r[0], r[1]) * (z_next - z);
        }
        i = j;
    }
    return volume;
}

std::uint64_t scenario_instance_seed(std::uint64_t base_seed) {
    return base_seed * 1000003ULL + 1;
}

std::uint64_t scenario_preference_seed(std::uint64_t base_seed) {
    return base_seed * 1000003ULL + 2;
}

std::vector<ScenarioSetup> built_in_scenarios() {
    std::vector<ScenarioSetup> setups;
    for (const auto& [name, prefs, base] :
         {std::tuple<std::string, int, std::uint64_t>{"PRF1", 3, 1001},
          std::tuple<std::string, int, std::uint64_t>{"PRF2", 6, 404}}) {
        ScenarioSetup s;
        s.spec.name = name;
        s.spec.n_vms = 8;
        s.spec.m_pms = 6;
        s.spec.pref_count = prefs;
        s.spec.pop_size = 100;
        s.spec.generation_settings = {8, 16, 24, 32, 40};
        s.spec.repetitions = 5;
        s.spec.base_seed = base;
        s.instance = generate_instance(s.spec.n_vms, s.spec.m_pms, 0.5,
                                       scenario_instance_seed(base));
        std::set<int> annotated;
        for (int i = 0; i < prefs; ++i) annotated.insert(i);
        s.scp = generate_preferences(s.instance, annotated,
                                     scenario_preference_seed(base));
        setups.push_back(std::move(s));
    }
    return setups;
}

namespace {

struct FrontSummary {
    std::vector<ObjectiveVector> feasible_front1;
    int front1_size = 0;
    double front1_max_violation = 0.0;
};

FrontSummary summarize_front(const RunRecord& rec) {
    FrontSummary s;
    for (const Individual& ind : rec.final_population) {
        if (ind.rank != 1) continue;
        ++s.front1_size;
        s.front1_max_violation = std::max(s.front1_max_violation, ind.violation);
        if (ind.feasible()) s.feasible_front1.push_back(ind.objectives);
    }
    return s;
}

std::optional<double> mean_cpr_fraction(const RunRecord& rec, bool of_front) {
    double sum = 0.0;
    int count = 0;
    for (const GenerationLog& g : rec.generations) {
        if (!g.cpr || g.cpr->slots == 0) continue;
        const auto& f = of_front ? g.cpr->fraction_of_front : g.cpr->fraction;
        if (!f) continue;
        sum += *f;
        ++count;
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

}  // namespace

ComparisonReport run_comparison(const ScenarioSpec& spec, const Instance& inst,
                                const ScpStructure& scp) {
    if (spec.generation_settings.empty())
        throw std::invalid_argument("run_comparison: no generation settings");
    if (spec.repetitions < 1)
        throw std::invalid_argument("run_comparison: repetitions must be >= 1");
    if (scp.k() < 1)
        throw std::invalid_argument("run_comparison: scenario needs a nonempty preference structure");

    ComparisonReport report;
    report.scenario = spec.name;
    EvolutionConfig cfg = EvolutionConfig::defaults_for(inst);
    cfg.pop_size = spec.pop_size;

    for (int generations : spec.generation_settings) {
        for (int rep = 0; rep < spec.repetitions; ++rep) {
            cfg.generations = generations;
            cfg.seed = spec.base_seed + static_cast<std::uint64_t>(rep);

            const RunRecord nsga = run_nsga2(inst, cfg, &scp);
            const RunRecord cp = run_cp_nsga(inst, cfg, scp);

            const FrontSummary fn = summarize_front(nsga);
            const FrontSummary fc = summarize_front(cp);

            // shared reference: 1.1 x nadir of the union of both feasible fronts
            ObjectiveVector ref{0.0, 0.0, 0.0};
            for (const auto* front : {&fn.feasible_front1, &fc.feasible_front1}) {
                for (const ObjectiveVector& p : *front) {
                    ref.comm_cost = std::max(ref.comm_cost, p.comm_cost);
                    ref.power = std::max(ref.power, p.power);
                    ref.wastage = std::max(ref.wastage, p.wastage);
                }
            }
            ref.comm_cost *= 1.1;
            ref.power *= 1.1;
            ref.wastage *= 1.1;

            ComparisonCell cell;
            cell.generations = generations;
            cell.repetition = rep;
            cell.seed = cfg.seed;
            cell.flips_mean_nsga2 = mean_weighted_flips(scp, nsga.final_population);
            cell.flips_mean_cpnsga = mean_weighted_flips(scp, cp.final_population);
            cell.hv_nsga2 = hypervolume(fn.feasible_front1, ref);
            cell.hv_cpnsga = hypervolume(fc.feasible_front1, ref);
            cell.cpr_fraction_mean = mean_cpr_fraction(cp, false);
            cell.cpr_fraction_of_front_mean = mean_cpr_fraction(cp, true);
            cell.front1_size_nsga2 = fn.front1_size;
            cell.front1_size_cpnsga = fc.front1_size;
            cell.front1_max_violation_nsga2 = fn.front1_max_violation;
            cell.front1_max_violation_cpnsga = fc.front1_max_violation;
            cell.wall_s_nsga2 = nsga.total_wall_time_s;
            cell.wall_s_cpnsga = cp.total_wall_time_s;
            report.cells.push_back(cell);
        }
    }
    return report;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string join_score(const ScoreVector& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(s[i]);
    }
    return out;
}

}  // namespace

void write_front_csv(std::ostream& out, const std::string& run_id,
                     const RunRecord& rec) {
    out << "run_id,generation,individual_id,comm_cost,power,wastage,violation,"
           "rank,crowding,weighted_flips,score\n";
    for (const GenerationLog& g : rec.generations) {
        for (const FrontMember& fm : g.front1) {
            out << run_id << ',' << g.generation << ',' << fm.individual_id << ','
                << format_double(fm.objectives.comm_cost) << ','
                << format_double(fm.objectives.power) << ','
                << format_double(fm.objectives.wastage) << ','
                << format_double(fm.violation) << ',' << fm.rank << ','
                << format_double(fm.crowding) << ',' << fm.weighted_flips << ','
                << join_score(fm.score) << '\n';
        }
    }
}

void write_metrics_json(std::ostream& out, const std::string& run_id,
                        const RunRecord& rec, bool include_timings) {
    json j;
    j["run_id"] = run_id;
    j["generations"] = json::array();
    for (const GenerationLog& g : rec.generations) {
        json jg;
        jg["generation"] = g.generation;
        jg["front1_size"] = g.front1.size();
        jg["selection"] = {{"last_front_size", g.selection.last_front_size},
                           {"slots", g.selection.slots}};
        if (!g.weighted_flips.empty()) {
            long long lo = g.weighted_flips.front(), hi = lo, sum = 0;
            for (long long f : g.weighted_flips) {
                lo = std::min(lo, f);
                hi = std::max(hi, f);
                sum += f;
            }
            jg["weighted_flips"] = {
                {"mean", static_cast<double>(sum) / g.weighted_flips.size()},
                {"min", lo},
                {"max", hi}};
        }
        if (g.cpr) {
            json jc;
            jc["last_front_size"] = g.cpr->last_front_size;
            jc["slots"] = g.cpr->slots;
            jc["cpr_pareto_size"] = g.cpr->cpr_pareto_size;
            jc["cpr_admitted"] = g.cpr->cpr_admitted;
            if (g.cpr->fraction) jc["fraction"] = *g.cpr->fraction;
            if (g.cpr->fraction_of_front)
                jc["fraction_of_front"] = *g.cpr->fraction_of_front;
            jg["cpr"] = jc;
        }
        if (include_timings) jg["wall_time_s"] = g.wall_time_s;
        j["generations"].push_back(jg);
    }
    json fp;
    fp["size"] = rec.final_population.size();
    int feasible = 0;
    for (const Individual& ind : rec.final_population)
        if (ind.feasible()) ++feasible;
    fp["feasible"] = feasible;
    j["final_population"] = fp;
    if (include_timings) j["total_wall_time_s"] = rec.total_wall_time_s;
    out << j.dump(2) << '\n';
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
    out << "scenario,generations,repetition,seed,flips_mean_nsga2,"
           "flips_mean_cpnsga,hv_nsga2,hv_cpnsga,cpr_fraction_mean,"
           "cpr_fraction_of_front_mean\n";
    for (const ComparisonCell& c : report.cells) {
        out << report.scenario << ',' << c.generations << ',' << c.repetition
            << ',' << c.seed << ',' << format_double(c.flips_mean_nsga2) << ','
            << format_double(c.flips_mean_cpnsga) << ','
            << format_double(c.hv_nsga2) << ',' << format_double(c.hv_cpnsga)
            << ','
            << (c.cpr_fraction_mean ? format_double(*c.cpr_fraction_mean) : "")
            << ','
            << (c.cpr_fraction_of_front_mean
                    ? format_double(*c.cpr_fraction_of_front_mean)
                    : "")
            << '\n';
    }
}

void write_comparison_json(std::ostream& out, const ComparisonReport& report) {
    json j;
    j["scenario"] = report.scenario;
    j["cells"] = json::array();
    for (const ComparisonCell& c : report.cells) {
        json jc;
        jc["generations"] = c.generations;
        jc["repetition"] = c.repetition;
        jc["seed"] = c.seed;
        jc["flips_mean_nsga2"] = c.flips_mean_nsga2;
        jc["flips_mean_cpnsga"] = c.flips_mean_cpnsga;
        jc["hv_nsga2"] = c.hv_nsga2;
        jc["hv_cpnsga"] = c.hv_cpnsga;
        if (c.cpr_fraction_mean) jc["cpr_fraction_mean"] = *c.cpr_fraction_mean;
        if (c.cpr_fraction_of_front_mean)
            jc["cpr_fraction_of_front_mean"] = *c.cpr_fraction_of_front_mean;
        j["cells"].push_back(jc);
    }
    out << j.dump(2) << '\n';
}

void write_timings_csv(std::ostream& out, const ComparisonReport& report) {
    out << "scenario,generations,repetition,seed,wall_s_nsga2,wall_s_cpnsga\n";
    for (const ComparisonCell& c : report.cells) {
        out << report.scenario << ',' << c.generations << ',' << c.repetition
            << ',' << c.seed << ',' << format_double(c.wall_s_nsga2) << ','
            << format_double(c.wall_s_cpnsga) << '\n';
    }
}

}  // namespace vmp
