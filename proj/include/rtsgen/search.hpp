#pragma once

// Greedy hill climbing over the unit genome. Every neighbor of the current
// unit is evaluated; the best one replaces it only on strict improvement,
// otherwise the climb stops at the local maximum. Fitness values are cached
// per genome so revisited candidates are never re-simulated.

#include <functional>
#include <optional>
#include <utility>

#include "rtsgen/evaluator.hpp"
#include "rtsgen/genome.hpp"

namespace rtsgen {

// Injective, stable key over the searched genes.
std::string genome_key(const GeneratedUnit& u);

struct NeighborEval {
    GeneratedUnit unit;
    double fitness = 0.0;
    bool fromCache = false;
};

struct SearchIteration {
    GeneratedUnit current;
    double currentFitness = 0.0;
    int neighborCount = 0;
    std::vector<NeighborEval> evaluated;
    std::optional<GeneratedUnit> chosen;  // empty on the final iteration
};

struct SearchTrace {
    std::vector<SearchIteration> iterations;
    GeneratedUnit terminalUnit;
    long totalGamesSimulated = 0;
    bool iterationCapHit = false;
    std::optional<std::string> error;  // set when the evaluator failed mid-climb
};

using UnitEvaluator = std::function<double(const GeneratedUnit&)>;

struct HillClimbConfig {
    SearchBounds bounds;
    int iterationCap = 100;   // safety valve; 0 disables it
    int gamesPerEvaluation = 20;  // trace bookkeeping only
};

// Functional core; the evaluator may be a stub in tests.
std::pair<GeneratedUnit, SearchTrace> hill_climb(const HillClimbConfig& cfg,
                                                 const UnitEvaluator& evaluate, uint64_t seed);

// Production entry point: drives evaluate_unit with the given settings.
std::pair<GeneratedUnit, SearchTrace> hill_climb(const SearchBounds& bounds,
                                                 const EvalConfig& evalCfg, uint64_t seed,
                                                 int iterationCap = 100);

std::string search_trace_to_json(const SearchTrace& t);

}  // namespace rtsgen
