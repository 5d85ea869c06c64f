// Command-line front end: instance generation, single runs, paired
// comparisons, and the built-in experiment scenarios.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmp/cpnsga.hpp"
#include "vmp/harness.hpp"
#include "vmp/instance.hpp"
#include "vmp/moea.hpp"
#include "vmp/scp.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

void cmd_generate(int n_vms, int m_pms, int prefs, double load_factor,
                  std::uint64_t seed, const std::string& out_dir) {
    if (prefs < 0 || prefs > n_vms)
        throw std::runtime_error("--prefs must be between 0 and --vms");
    fs::create_directories(out_dir);

    vmp::Instance inst = vmp::generate_instance(n_vms, m_pms, load_factor, seed);
    std::set<int> annotated;
    for (int i = 0; i < prefs; ++i) annotated.insert(i);
    vmp::ScpStructure scp = vmp::generate_preferences(inst, annotated, seed + 1);

    const fs::path inst_path = fs::path(out_dir) / "instance.json";
    const fs::path pref_path = fs::path(out_dir) / "preferences.json";
    vmp::save_instance_file(inst, inst_path.string());
    vmp::save_preferences_file(scp, pref_path.string());
    std::cout << "wrote " << inst_path.string() << "\n";
    std::cout << "wrote " << pref_path.string() << "\n";
}

vmp::EvolutionConfig make_config(const vmp::Instance& inst, int pop_size,
                                 int generations, std::uint64_t seed,
                                 double p_crossover,
                                 std::optional<double> p_mutation) {
    vmp::EvolutionConfig cfg = vmp::EvolutionConfig::defaults_for(inst);
    cfg.pop_size = pop_size;
    cfg.generations = generations;
    cfg.seed = seed;
    cfg.p_crossover = p_crossover;
    if (p_mutation) cfg.p_mutation_per_gene = *p_mutation;
    return cfg;
}

void cmd_run(const std::string& instance_path, const std::string& prefs_path,
             const std::string& algorithm, int pop_size, int generations,
             std::uint64_t seed, double p_crossover,
             std::optional<double> p_mutation, const std::string& out_dir) {
    const vmp::Instance inst = vmp::load_instance_file(instance_path);
    vmp::ScpStructure scp;
    if (!prefs_path.empty()) scp = vmp::load_preferences_file(prefs_path, inst);

    const vmp::EvolutionConfig cfg =
        make_config(inst, pop_size, generations, seed, p_crossover, p_mutation);

    vmp::RunRecord rec;
    if (algorithm == "nsga2") {
        rec = vmp::run_nsga2(inst, cfg, scp.k() > 0 ? &scp : nullptr);
    } else {
        rec = vmp::run_cp_nsga(inst, cfg, scp);
    }

    fs::create_directories(out_dir);
    const std::string run_id = algorithm + "-" + std::to_string(seed);
    {
        auto out = open_out(fs::path(out_dir) / "front.csv");
        vmp::write_front_csv(out, run_id, rec);
    }
    {
        auto out = open_out(fs::path(out_dir) / "metrics.json");
        vmp::write_metrics_json(out, run_id, rec);
    }
    std::cout << "run " << run_id << ": " << rec.generations.size()
              << " generations, final population " << rec.final_population.size()
              << ", total " << rec.total_wall_time_s << " s\n";
    std::cout << "wrote " << (fs::path(out_dir) / "front.csv").string() << " and "
              << (fs::path(out_dir) / "metrics.json").string() << "\n";
}

void write_comparison_outputs(const vmp::ComparisonReport& report,
                              const std::string& out_dir,
                              const std::string& format, bool timings,
                              const std::string& stem) {
    fs::create_directories(out_dir);
    if (format == "csv") {
        auto out = open_out(fs::path(out_dir) / (stem + ".csv"));
        vmp::write_comparison_csv(out, report);
        std::cout << "wrote " << (fs::path(out_dir) / (stem + ".csv")).string() << "\n";
    } else {
        auto out = open_out(fs::path(out_dir) / (stem + ".json"));
        vmp::write_comparison_json(out, report);
        std::cout << "wrote " << (fs::path(out_dir) / (stem + ".json")).string() << "\n";
    }
    if (timings) {
        auto out = open_out(fs::path(out_dir) / (stem + "_timings.csv"));
        vmp::write_timings_csv(out, report);
        std::cout << "wrote " << (fs::path(out_dir) / (stem + "_timings.csv")).string()
                  << " (wall-clock measurements; not deterministic)\n";
    }
}

void cmd_compare(const std::string& instance_path, const std::string& prefs_path,
                 const std::string& name, int pop_size,
                 const std::vector<int>& generations, int repetitions,
                 std::uint64_t seed, const std::string& out_dir,
                 const std::string& format, bool timings) {
    const vmp::Instance inst = vmp::load_instance_file(instance_path);
    const vmp::ScpStructure scp = vmp::load_preferences_file(prefs_path, inst);

    vmp::ScenarioSpec spec;
    spec.name = name;
    spec.n_vms = inst.n_vms();
    spec.m_pms = inst.m_pms();
    spec.pref_count = scp.k();
    spec.pop_size = pop_size;
    spec.generation_settings = generations;
    spec.repetitions = repetitions;
    spec.base_seed = seed;

    const vmp::ComparisonReport report = vmp::run_comparison(spec, inst, scp);
    write_comparison_outputs(report, out_dir, format, timings, "comparison");
}

void cmd_paper_scenarios(const std::string& out_dir, const std::string& format,
                         std::optional<std::uint64_t> seed_override) {
    fs::create_directories(out_dir);
    for (vmp::ScenarioSetup setup : vmp::built_in_scenarios()) {
        if (seed_override) {
            setup.spec.base_seed = *seed_override;
            setup.instance = vmp::generate_instance(
                setup.spec.n_vms, setup.spec.m_pms, 0.5,
                vmp::scenario_instance_seed(setup.spec.base_seed));
            std::set<int> annotated;
            for (int i = 0; i < setup.spec.pref_count; ++i) annotated.insert(i);
            setup.scp = vmp::generate_preferences(
                setup.instance, annotated,
                vmp::scenario_preference_seed(setup.spec.base_seed));
        }
        const fs::path dir = fs::path(out_dir) / setup.spec.name;
        fs::create_directories(dir);
        vmp::save_instance_file(setup.instance, (dir / "instance.json").string());
        vmp::save_preferences_file(setup.scp, (dir / "preferences.json").string());

        const vmp::ComparisonReport report =
            vmp::run_comparison(setup.spec, setup.instance, setup.scp);
        write_comparison_outputs(report, dir.string(), format, true, "comparison");

        // per-setting summary, means over the paired repetitions
        std::cout << "scenario " << setup.spec.name << " (k=" << setup.scp.k()
                  << ", base seed " << setup.spec.base_seed << ")\n";
        std::cout << "  gens  flips(nsga2)  flips(cpnsga)  hv_ratio  cpr_fraction\n";
        for (int gens : setup.spec.generation_settings) {
            double fn = 0, fc = 0, hn = 0, hc = 0, frac = 0;
            int cells = 0, frac_cells = 0;
            for (const vmp::ComparisonCell& c : report.cells) {
                if (c.generations != gens) continue;
                fn += c.flips_mean_nsga2;
                fc += c.flips_mean_cpnsga;
                hn += c.hv_nsga2;
                hc += c.hv_cpnsga;
                ++cells;
                if (c.cpr_fraction_mean) {
                    frac += *c.cpr_fraction_mean;
                    ++frac_cells;
                }
            }
            std::printf("  %4d  %12.3f  %13.3f  %8.4f  %12.3f\n", gens, fn / cells,
                        fc / cells, hn > 0 ? hc / hn : 1.0,
                        frac_cells ? frac / frac_cells : 0.0);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NSGA-II / CP-NSGA solver for preference-aware virtual machine placement"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a random instance and preference file");
    int g_vms = 8, g_pms = 6, g_prefs = 3;
    double g_load = 0.5;
    std::uint64_t g_seed = 0;
    std::string g_out = ".";
    gen->add_option("--vms", g_vms, "number of VMs")->check(CLI::PositiveNumber);
    gen->add_option("--pms", g_pms, "number of PMs")->check(CLI::PositiveNumber);
    gen->add_option("--prefs", g_prefs, "annotate the first K VMs with preferences");
    gen->add_option("--load-factor", g_load, "total demand as a fraction of total capacity")
        ->check(CLI::Range(1e-9, 1.0));
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--out", g_out, "output directory");

    // run
    auto* run = app.add_subcommand("run", "run one algorithm on one instance");
    std::string r_instance, r_prefs, r_algorithm = "nsga2", r_out = ".";
    int r_pop = 100, r_gens = 100;
    std::uint64_t r_seed = 0;
    double r_pc = 0.9;
    std::optional<double> r_pm;
    run->add_option("--instance", r_instance, "instance file")->required();
    run->add_option("--prefs", r_prefs, "preference file (required for cpnsga)");
    run->add_option("--algorithm", r_algorithm, "nsga2 or cpnsga")
        ->check(CLI::IsMember({"nsga2", "cpnsga"}));
    run->add_option("--pop-size", r_pop, "population size (even)");
    run->add_option("--generations", r_gens, "generation count");
    run->add_option("--seed", r_seed, "run seed");
    run->add_option("--p-crossover", r_pc, "crossover probability");
    run->add_option("--p-mutation", r_pm, "per-gene mutation probability (default 1/n)");
    run->add_option("--out", r_out, "output directory");

    // compare
    auto* cmp = app.add_subcommand("compare", "paired NSGA-II vs CP-NSGA sweep");
    std::string c_instance, c_prefs, c_name = "scenario", c_out = ".", c_format = "csv";
    int c_pop = 100, c_reps = 5;
    std::vector<int> c_gens = {8, 16, 24, 32, 40};
    std::uint64_t c_seed = 0;
    bool c_timings = false;
    cmp->add_option("--instance", c_instance, "instance file")->required();
    cmp->add_option("--prefs", c_prefs, "preference file")->required();
    cmp->add_option("--name", c_name, "scenario label in the output");
    cmp->add_option("--pop-size", c_pop, "population size (even)");
    cmp->add_option("--generations", c_gens, "generation settings (one or more)");
    cmp->add_option("--repetitions", c_reps, "paired repetitions per setting");
    cmp->add_option("--seed", c_seed, "base seed; repetition r uses base+r");
    cmp->add_option("--out", c_out, "output directory");
    cmp->add_option("--format", c_format, "comparison output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmp->add_flag("--timings", c_timings, "also write wall-clock timings csv");

    // paper-scenarios
    auto* paper = app.add_subcommand("paper-scenarios",
                                     "run the built-in PRF1/PRF2 scenario sweep");
    std::string p_out = "scenarios", p_format = "csv";
    std::optional<std::uint64_t> p_seed;
    paper->add_option("--out", p_out, "output directory");
    paper->add_option("--format", p_format, "comparison output format")
        ->check(CLI::IsMember({"csv", "json"}));
    paper->add_option("--seed", p_seed, "override the built-in base seeds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            cmd_generate(g_vms, g_pms, g_prefs, g_load, g_seed, g_out);
        } else if (run->parsed()) {
            cmd_run(r_instance, r_prefs, r_algorithm, r_pop, r_gens, r_seed, r_pc,
                    r_pm, r_out);
        } else if (cmp->parsed()) {
            cmd_compare(c_instance, c_prefs, c_name, c_pop, c_gens, c_reps, c_seed,
                        c_out, c_format, c_timings);
        } else if (paper->parsed()) {
            cmd_paper_scenarios(p_out, p_format, p_seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
