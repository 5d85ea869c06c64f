#include "vmp/instance.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using nlohmann::json;

namespace vmp {

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_matrix(const std::vector<std::vector<double>>& m, std::size_t dim,
                  const std::string& name, ValidationReport& report) {
    if (m.size() != dim) {
        report.push_back({name + ".shape",
                          name + " has " + std::to_string(m.size()) +
                              " rows, expected " + std::to_string(dim)});
        return;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (m[i].size() != dim) {
            report.push_back({name + ".shape",
                              name + " row " + std::to_string(i) + " has " +
                                  std::to_string(m[i].size()) +
                                  " entries, expected " + std::to_string(dim)});
            return;
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (!finite(m[i][j]) || m[i][j] < 0.0) {
                report.push_back({name + ".negative",
                                  name + "[" + std::to_string(i) + "][" +
                                      std::to_string(j) +
                                      "] must be a finite nonnegative real"});
            }
        }
        if (m[i][i] != 0.0) {
            report.push_back({name + ".diagonal",
                              name + "[" + std::to_string(i) + "][" +
                                  std::to_string(i) + "] must be zero"});
        }
        for (std::size_t j = i + 1; j < dim; ++j) {
            if (m[i][j] != m[j][i]) {
                report.push_back({name + ".asymmetric",
                                  name + "[" + std::to_string(i) + "][" +
                                      std::to_string(j) + "] != " + name + "[" +
                                      std::to_string(j) + "][" +
                                      std::to_string(i) + "]"});
            }
        }
    }
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport report;

    if (inst.vms.empty())
        report.push_back({"inst.no_vms", "instance must have at least one VM"});
    if (inst.pms.empty())
        report.push_back({"inst.no_pms", "instance must have at least one PM"});

    for (std::size_t i = 0; i < inst.vms.size(); ++i) {
        const auto& vm = inst.vms[i];
        if (vm.id != static_cast<int>(i))
            report.push_back({"vm.id.mismatch",
                              "vm at position " + std::to_string(i) +
                                  " has id " + std::to_string(vm.id)});
        if (!finite(vm.cpu_demand) || vm.cpu_demand <= 0.0 || vm.cpu_demand > 1.0)
            report.push_back({"vm.cpu_demand.range",
                              "vm " + std::to_string(vm.id) +
                                  " cpu_demand must be in (0, 1]"});
        if (!finite(vm.mem_demand) || vm.mem_demand <= 0.0 || vm.mem_demand > 1.0)
            report.push_back({"vm.mem_demand.range",
                              "vm " + std::to_string(vm.id) +
                                  " mem_demand must be in (0, 1]"});
    }

    for (std::size_t k = 0; k < inst.pms.size(); ++k) {
        const auto& pm = inst.pms[k];
        if (pm.id != static_cast<int>(k))
            report.push_back({"pm.id.mismatch",
                              "pm at position " + std::to_string(k) +
                                  " has id " + std::to_string(pm.id)});
        if (!finite(pm.cpu_capacity) || pm.cpu_capacity <= 0.0)
            report.push_back({"pm.cpu_capacity.range",
                              "pm " + std::to_string(pm.id) +
                                  " cpu_capacity must be positive"});
        if (!finite(pm.mem_capacity) || pm.mem_capacity <= 0.0)
            report.push_back({"pm.mem_capacity.range",
                              "pm " + std::to_string(pm.id) +
                                  " mem_capacity must be positive"});
        if (!finite(pm.power_idle) || !finite(pm.power_max) ||
            pm.power_idle < 0.0 || pm.power_max < pm.power_idle)
            report.push_back({"pm.power.range",
                              "pm " + std::to_string(pm.id) +
                                  " must satisfy power_max >= power_idle >= 0"});
    }

    check_matrix(inst.traffic, inst.vms.size(), "traffic", report);
    check_matrix(inst.distance, inst.pms.size(), "distance", report);

    return report;
}

namespace {

std::string report_summary(const ValidationReport& report) {
    std::ostringstream os;
    os << "invalid instance (" << report.size() << " issue"
       << (report.size() == 1 ? "" : "s") << "):";
    for (const auto& issue : report) os << "\n  [" << issue.code << "] " << issue.message;
    return os.str();
}

std::vector<std::vector<double>> parse_matrix(const json& j, const char* key) {
    if (!j.contains(key))
        throw parse_error(std::string("missing required key '") + key + "'");
    const json& arr = j.at(key);
    if (!arr.is_array())
        throw parse_error(std::string("'") + key + "' must be an array of arrays");
    std::vector<std::vector<double>> out;
    out.reserve(arr.size());
    for (const json& row : arr) {
        if (!row.is_array())
            throw parse_error(std::string("'") + key + "' rows must be arrays");
        std::vector<double> r;
        r.reserve(row.size());
        for (const json& v : row) {
            if (!v.is_number())
                throw parse_error(std::string("'") + key + "' entries must be numbers");
            r.push_back(v.get<double>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

double require_number(const json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw parse_error(std::string(ctx) + " requires numeric field '" + key + "'");
    return j.at(key).get<double>();
}

}  // namespace

Instance load_instance(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(e.what());  // message carries the byte position
    }
    if (!j.is_object()) throw parse_error("top level must be a JSON object");

    Instance inst;
    if (!j.contains("vms") || !j.at("vms").is_array())
        throw parse_error("missing required array 'vms'");
    if (!j.contains("pms") || !j.at("pms").is_array())
        throw parse_error("missing required array 'pms'");

    for (const json& v : j.at("vms")) {
        VirtualMachine vm;
        vm.id = static_cast<int>(require_number(v, "id", "vm"));
        vm.cpu_demand = require_number(v, "cpu_demand", "vm");
        vm.mem_demand = require_number(v, "mem_demand", "vm");
        inst.vms.push_back(vm);
    }
    for (const json& p : j.at("pms")) {
        PhysicalMachine pm;
        pm.id = static_cast<int>(require_number(p, "id", "pm"));
        pm.cpu_capacity = require_number(p, "cpu_capacity", "pm");
        pm.mem_capacity = require_number(p, "mem_capacity", "pm");
        pm.power_idle = require_number(p, "power_idle", "pm");
        pm.power_max = require_number(p, "power_max", "pm");
        inst.pms.push_back(pm);
    }
    inst.traffic = parse_matrix(j, "traffic");
    inst.distance = parse_matrix(j, "distance");
    if (j.contains("meta")) inst.meta = j.at("meta");

    ValidationReport report = validate_instance(inst);
    if (!report.empty()) throw validation_error(report_summary(report), std::move(report));
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open instance file: " + path);
    return load_instance(in);
}

void save_instance(const Instance& inst, std::ostream& out) {
    json j;
    j["vms"] = json::array();
    for (const auto& vm : inst.vms)
        j["vms"].push_back({{"id", vm.id},
                            {"cpu_demand", vm.cpu_demand},
                            {"mem_demand", vm.mem_demand}});
    j["pms"] = json::array();
    for (const auto& pm : inst.pms)
        j["pms"].push_back({{"id", pm.id},
                            {"cpu_capacity", pm.cpu_capacity},
                            {"mem_capacity", pm.mem_capacity},
                            {"power_idle", pm.power_idle},
                            {"power_max", pm.power_max}});
    j["traffic"] = inst.traffic;
    j["distance"] = inst.distance;
    if (!inst.meta.empty()) j["meta"] = inst.meta;
    out << j.dump(2) << '\n';
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    save_instance(inst, out);
}

Instance generate_instance(int n_vms, int m_pms, double load_factor,
                           std::uint64_t seed) {
    if (n_vms < 1) throw std::invalid_argument("generate_instance: n_vms must be >= 1");
    if (m_pms < 1) throw std::invalid_argument("generate_instance: m_pms must be >= 1");
    if (!(load_factor > 0.0 && load_factor <= 1.0))
        throw std::invalid_argument("generate_instance: load_factor must be in (0, 1]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // unit() is [0,1); 1-unit() gives the (0,1] draws used below.

    Instance inst;
    inst.pms.resize(m_pms);
    for (int k = 0; k < m_pms; ++k) inst.pms[k].id = k;

    // Demands: uniform raw draws (all cpu, then all mem), rescaled so each
    // resource sums to load_factor * m_pms.
    std::vector<double> cpu_raw(n_vms), mem_raw(n_vms);
    for (int i = 0; i < n_vms; ++i) cpu_raw[i] = 1.0 - unit(rng);
    for (int i = 0; i < n_vms; ++i) mem_raw[i] = 1.0 - unit(rng);
    const double target = load_factor * m_pms;
    double cpu_sum = 0.0, mem_sum = 0.0;
    for (int i = 0; i < n_vms; ++i) { cpu_sum += cpu_raw[i]; mem_sum += mem_raw[i]; }

    bool clamped = false;
    inst.vms.resize(n_vms);
    for (int i = 0; i < n_vms; ++i) {
        inst.vms[i].id = i;
        double c = cpu_raw[i] * target / cpu_sum;
        double m = mem_raw[i] * target / mem_sum;
        if (c > 1.0) { c = 1.0; clamped = true; }
        if (m > 1.0) { m = 1.0; clamped = true; }
        inst.vms[i].cpu_demand = c;
        inst.vms[i].mem_demand = m;
    }

    // Traffic: per unordered pair, zero with probability 0.5, else (0,10].
    inst.traffic.assign(n_vms, std::vector<double>(n_vms, 0.0));
    for (int i = 0; i < n_vms; ++i) {
        for (int j = i + 1; j < n_vms; ++j) {
            double gate = unit(rng);
            if (gate < 0.5) continue;
            double t = 10.0 * (1.0 - unit(rng));
            inst.traffic[i][j] = t;
            inst.traffic[j][i] = t;
        }
    }

    // Two-level tree: racks of up to 3 PMs; 0 same PM, 2 same rack, 4 across.
    inst.distance.assign(m_pms, std::vector<double>(m_pms, 0.0));
    for (int k = 0; k < m_pms; ++k) {
        for (int l = 0; l < m_pms; ++l) {
            if (k == l) continue;
            inst.distance[k][l] = (k / 3 == l / 3) ? 2.0 : 4.0;
        }
    }

    inst.meta["generator"] = {{"n_vms", n_vms},
                              {"m_pms", m_pms},
                              {"load_factor", load_factor},
                              {"seed", seed}};
    if (clamped) inst.meta["demand_clamped"] = true;
    return inst;
}

}  // namespace vmp
