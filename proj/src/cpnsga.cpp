#include "vmp/cpnsga.hpp"

#include <algorithm>
#include <stdexcept>

namespace vmp {

namespace {

std::vector<int> order_by_crowding(const std::vector<Individual>& pool,
                                   std::vector<int> candidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](int i, int j) {
        if (pool[i].crowding != pool[j].crowding)
            return pool[i].crowding > pool[j].crowding;
        return i < j;
    });
    return candidates;
}

}  // namespace

SurvivorResult cpr_survivor_selection(std::vector<Individual> combined,
                                      int n_survivors, const ScpStructure& scp) {
    const int total = static_cast<int>(combined.size());
    if (n_survivors <= 0 || n_survivors > total)
        throw std::invalid_argument("survivor selection: bad survivor count");

    const auto fronts = fast_nondominated_sort(combined);
    assign_crowding(combined, fronts);

    SurvivorResult res;
    res.cpr = CprSelectionLog{};
    res.next.reserve(n_survivors);
    int admitted = 0;
    for (const auto& front : fronts) {
        if (admitted == n_survivors) break;
        const int size = static_cast<int>(front.size());
        if (admitted + size <= n_survivors) {
            for (int i : front) res.next.push_back(combined[i]);
            admitted += size;
            continue;
        }

        const int slots = n_survivors - admitted;
        res.log.last_front_size = size;
        res.log.slots = slots;

        std::vector<ScoreVector> scores;
        scores.reserve(size);
        for (int i : front) scores.push_back(score(scp, combined[i].placement));
        const std::vector<int> maximal = cpr_pareto_scores(scores);  // into front

        std::vector<int> chosen;
        chosen.reserve(slots);
        if (static_cast<int>(maximal.size()) <= slots) {
            std::vector<char> is_maximal(size, 0);
            for (int t : maximal) {
                is_maximal[t] = 1;
                chosen.push_back(front[t]);
            }
            const int remaining = slots - static_cast<int>(maximal.size());
            if (remaining > 0) {
                std::vector<int> rest;
                rest.reserve(size - maximal.size());
                for (int t = 0; t < size; ++t)
                    if (!is_maximal[t]) rest.push_back(front[t]);
                rest = order_by_crowding(combined, std::move(rest));
                chosen.insert(chosen.end(), rest.begin(), rest.begin() + remaining);
            }
        } else {
            std::vector<int> cands;
            cands.reserve(maximal.size());
            for (int t : maximal) cands.push_back(front[t]);
            cands = order_by_crowding(combined, std::move(cands));
            chosen.assign(cands.begin(), cands.begin() + slots);
        }
        std::sort(chosen.begin(), chosen.end());
        for (int i : chosen) res.next.push_back(combined[i]);

        CprSelectionLog& log = *res.cpr;
        log.last_front_size = size;
        log.slots = slots;
        log.cpr_pareto_size = static_cast<int>(maximal.size());
        log.cpr_admitted = std::min(log.cpr_pareto_size, slots);
        log.fraction = static_cast<double>(log.cpr_admitted) / slots;
        log.fraction_of_front = static_cast<double>(log.cpr_admitted) / size;
        admitted = n_survivors;
        break;
    }
    return res;
}

RunRecord run_cp_nsga(const Instance& inst, const EvolutionConfig& cfg,
                      const ScpStructure& scp) {
    if (scp.k() < 1)
        throw std::invalid_argument(
            "run_cp_nsga: preference structure is empty (k = 0); run NSGA-II instead");
    return detail::run_evolution(inst, cfg, &scp,
                                 [&scp](std::vector<Individual> combined, int n) {
                                     return cpr_survivor_selection(std::move(combined), n, scp);
                                 });
}

}  // namespace vmp
