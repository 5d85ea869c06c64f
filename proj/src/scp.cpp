#include "vmp/scp.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

using nlohmann::json;

namespace vmp {

ScpStructure ScpStructure::from_orders(std::map<int, std::vector<int>> orders,
                                       int m_pms, int n_vms) {
    if (m_pms < 1) throw std::invalid_argument("scp: m_pms must be >= 1");
    ScpStructure scp;
    scp.m_ = m_pms;
    for (auto& [vm, order] : orders) {
        if (vm < 0 || vm >= n_vms)
            throw std::invalid_argument("scp: annotated VM id " + std::to_string(vm) +
                                        " out of range");
        if (static_cast<int>(order.size()) != m_pms)
            throw std::invalid_argument("scp: preference for VM " + std::to_string(vm) +
                                        " must list all " + std::to_string(m_pms) + " PMs");
        std::vector<int> rank(m_pms, 0);
        for (int pos = 0; pos < m_pms; ++pos) {
            int pm = order[pos];
            if (pm < 0 || pm >= m_pms || rank[pm] != 0)
                throw std::invalid_argument("scp: preference for VM " + std::to_string(vm) +
                                            " is not a permutation of the PM ids");
            rank[pm] = pos + 1;
        }
        scp.ids_.push_back(vm);
        scp.rank_by_pm_.emplace(vm, std::move(rank));
        scp.orders_.emplace(vm, std::move(order));
    }
    return scp;  // map iteration already gave ascending ids
}

bool ScpStructure::annotated(int vm) const {
    return orders_.find(vm) != orders_.end();
}

const std::vector<int>& ScpStructure::order(int vm) const {
    auto it = orders_.find(vm);
    if (it == orders_.end())
        throw std::invalid_argument("scp: VM " + std::to_string(vm) + " has no preference");
    return it->second;
}

int ScpStructure::rank_of(int vm, int pm) const {
    auto it = rank_by_pm_.find(vm);
    if (it == rank_by_pm_.end())
        throw std::invalid_argument("scp: VM " + std::to_string(vm) + " has no preference");
    if (pm < 0 || pm >= m_)
        throw std::invalid_argument("scp: PM id " + std::to_string(pm) + " out of range");
    return it->second[pm];
}

int rank_of(const ScpStructure& scp, int vm, int pm) { return scp.rank_of(vm, pm); }

ScoreVector score(const ScpStructure& scp, const Placement& p) {
    ScoreVector ranks;
    ranks.reserve(scp.k());
    for (int vm : scp.annotated_ids())
        ranks.push_back(scp.rank_of(vm, p.assignment[vm]));
    return ranks;
}

std::vector<int> diff(const Placement& a, const Placement& b,
                      const ScpStructure& scp) {
    std::vector<int> out;
    for (int vm : scp.annotated_ids())
        if (a.assignment[vm] != b.assignment[vm]) out.push_back(vm);
    return out;
}

bool scp_dominates(const Placement& a, const Placement& b,
                   const ScpStructure& scp) {
    bool any_diff = false;
    for (int vm : scp.annotated_ids()) {
        const int pa = a.assignment[vm];
        const int pb = b.assignment[vm];
        if (pa == pb) continue;
        any_diff = true;
        if (scp.rank_of(vm, pa) > scp.rank_of(vm, pb)) return false;
        // ranks are distinct for distinct PMs, so the remaining case is <
    }
    return any_diff;
}

namespace {

// On score vectors, strict dominance is componentwise <= with one strict <;
// equal rank at a coordinate means the same PM there.
bool score_dominates(const ScoreVector& a, const ScoreVector& b) {
    bool strict = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

}  // namespace

std::vector<int> cpr_pareto_scores(const std::vector<ScoreVector>& scores) {
    const int n = static_cast<int>(scores.size());
    if (n == 0) throw std::invalid_argument("cpr_pareto: empty population");

    // A dominator always has strictly smaller weighted flips, so after
    // ordering by flips only earlier members can dominate later ones.
    std::vector<long long> flips(n);
    for (int i = 0; i < n; ++i) flips[i] = weighted_flips_of_score(scores[i]);
    std::vector<int> by_flips(n);
    std::iota(by_flips.begin(), by_flips.end(), 0);
    std::stable_sort(by_flips.begin(), by_flips.end(),
                     [&](int i, int j) { return flips[i] < flips[j]; });

    std::vector<int> maximal;
    for (int pos = 0; pos < n; ++pos) {
        const int i = by_flips[pos];
        bool dominated = false;
        for (int q = 0; q < pos && !dominated; ++q) {
            const int j = by_flips[q];
            if (flips[j] >= flips[i]) break;
            dominated = score_dominates(scores[j], scores[i]);
        }
        if (!dominated) maximal.push_back(i);
    }
    std::sort(maximal.begin(), maximal.end());
    return maximal;
}

std::vector<int> cpr_pareto(const std::vector<Placement>& pop,
                            const ScpStructure& scp) {
    if (pop.empty()) throw std::invalid_argument("cpr_pareto: empty population");
    std::vector<ScoreVector> scores;
    scores.reserve(pop.size());
    for (const Placement& p : pop) scores.push_back(score(scp, p));
    return cpr_pareto_scores(scores);
}

long long weighted_flips_of_score(const ScoreVector& s) {
    long long total = 0;
    for (int r : s)
        if (r >= 2) total += r;
    return total;
}

long long weighted_flips(const ScpStructure& scp, const Placement& p) {
    return weighted_flips_of_score(score(scp, p));
}

ScpStructure generate_preferences(const Instance& inst,
                                  const std::set<int>& annotated_vms,
                                  std::uint64_t seed) {
    const int m = inst.m_pms();
    for (int vm : annotated_vms)
        if (vm < 0 || vm >= inst.n_vms())
            throw std::invalid_argument("generate_preferences: VM id " +
                                        std::to_string(vm) + " out of range");
    std::mt19937_64 rng(seed);
    std::map<int, std::vector<int>> orders;
    for (int vm : annotated_vms) {  // std::set iterates ascending
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        // Fisher-Yates, explicit draws so the stream is reproducible.
        for (int i = m - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(order[i], order[pick(rng)]);
        }
        orders.emplace(vm, std::move(order));
    }
    return ScpStructure::from_orders(std::move(orders), m, inst.n_vms());
}

ScpStructure load_preferences(std::istream& in, const Instance& inst) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(e.what());
    }
    if (!j.is_object()) throw parse_error("preference file must be a JSON object");

    std::map<int, std::vector<int>> orders;
    for (const auto& [key, val] : j.items()) {
        int vm = 0;
        try {
            std::size_t pos = 0;
            vm = std::stoi(key, &pos);
            if (pos != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw parse_error("preference key '" + key + "' is not a VM id");
        }
        if (!val.is_array())
            throw parse_error("preference for VM " + key + " must be an array of PM ids");
        std::vector<int> order;
        for (const json& v : val) {
            if (!v.is_number_integer())
                throw parse_error("preference for VM " + key + " must contain integer PM ids");
            order.push_back(v.get<int>());
        }
        orders.emplace(vm, std::move(order));
    }
    return ScpStructure::from_orders(std::move(orders), inst.m_pms(), inst.n_vms());
}

ScpStructure load_preferences_file(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open preference file: " + path);
    return load_preferences(in, inst);
}

void save_preferences(const ScpStructure& scp, std::ostream& out) {
    json j = json::object();
    for (int vm : scp.annotated_ids()) j[std::to_string(vm)] = scp.order(vm);
    out << j.dump(2) << '\n';
}

void save_preferences_file(const ScpStructure& scp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    save_preferences(scp, out);
}

}  // namespace vmp
