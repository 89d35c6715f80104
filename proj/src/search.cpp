#include "rtsgen/search.hpp"

#include <cstdio>
#include <unordered_map>

namespace rtsgen {

std::string genome_key(const GeneratedUnit& u) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d-%d-%d-%d-%d-%d-%d-%d", u.cost, u.hp, u.damage,
                  u.attackRange, u.moveTime, u.attackTime, static_cast<int>(u.cause),
                  static_cast<int>(u.effect));
    return buf;
}

std::pair<GeneratedUnit, SearchTrace> hill_climb(const HillClimbConfig& cfg,
                                                 const UnitEvaluator& evaluate, uint64_t seed) {
    validate_bounds(cfg.bounds);
    SearchTrace trace;
    std::unordered_map<std::string, double> cache;

    auto fitness_of = [&](const GeneratedUnit& u, bool& cached) -> double {
        std::string key = genome_key(u);
        auto it = cache.find(key);
        if (it != cache.end()) {
            cached = true;
            return it->second;
        }
        cached = false;
        double f = evaluate(u);
        cache.emplace(std::move(key), f);
        trace.totalGamesSimulated += cfg.gamesPerEvaluation;
        return f;
    };

    GeneratedUnit current = random_unit(cfg.bounds, seed);
    double currentFitness;
    try {
        bool cached;
        currentFitness = fitness_of(current, cached);
    } catch (const std::exception& e) {
        trace.error = e.what();
        trace.terminalUnit = current;
        return {current, trace};
    }

    for (int iteration = 0;; ++iteration) {
        if (cfg.iterationCap > 0 && iteration >= cfg.iterationCap) {
            trace.iterationCapHit = true;
            break;
        }

        SearchIteration record;
        record.current = current;
        record.currentFitness = currentFitness;

        std::vector<GeneratedUnit> candidates = neighbors(current);
        record.neighborCount = static_cast<int>(candidates.size());

        int bestIdx = -1;
        double bestFitness = 0.0;
        try {
            for (size_t i = 0; i < candidates.size(); ++i) {
                bool cached;
                double f = fitness_of(candidates[i], cached);
                record.evaluated.push_back({candidates[i], f, cached});
                if (bestIdx < 0 || f > bestFitness) {  // ties keep the earlier candidate
                    bestIdx = static_cast<int>(i);
                    bestFitness = f;
                }
            }
        } catch (const std::exception& e) {
            trace.error = e.what();
            trace.iterations.push_back(std::move(record));
            break;
        }

        if (bestIdx >= 0 && bestFitness > currentFitness) {  // strict improvement only
            record.chosen = candidates[static_cast<size_t>(bestIdx)];
            trace.iterations.push_back(std::move(record));
            current = candidates[static_cast<size_t>(bestIdx)];
            currentFitness = bestFitness;
        } else {
            trace.iterations.push_back(std::move(record));
            break;
        }
    }

    current.fitness = currentFitness;
    trace.terminalUnit = current;
    return {current, trace};
}

std::pair<GeneratedUnit, SearchTrace> hill_climb(const SearchBounds& bounds,
                                                 const EvalConfig& evalCfg, uint64_t seed,
                                                 int iterationCap) {
    HillClimbConfig cfg;
    cfg.bounds = bounds;
    cfg.iterationCap = iterationCap;
    cfg.gamesPerEvaluation = 2 * evalCfg.gamesPerRound;
    UnitEvaluator eval = [&evalCfg](const GeneratedUnit& u) {
        return evaluate_unit(u, evalCfg).total;
    };
    return hill_climb(cfg, eval, seed);
}

}  // namespace rtsgen
