#include <json.hpp>

#include "rtsgen/evaluator.hpp"
#include "rtsgen/search.hpp"

namespace rtsgen {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json genome_json(const GeneratedUnit& u) {
    ordered_json j;
    j["cost"] = u.cost;
    j["hp"] = u.hp;
    j["damage"] = u.damage;
    j["range"] = u.attackRange;
    j["moveTime"] = u.moveTime;
    j["attackTime"] = u.attackTime;
    j["cause"] = static_cast<int>(u.cause);
    j["effect"] = static_cast<int>(u.effect);
    if (!u.name.empty()) j["name"] = u.name;
    if (u.fitness) j["fitness"] = *u.fitness;
    return j;
}

}  // namespace

std::string fitness_report_to_json(const FitnessReport& r) {
    ordered_json j;
    j["utility"] = r.utility;
    j["balance"] = r.balance;
    j["total"] = r.total;
    j["lowConfidenceUtility"] = r.lowConfidenceUtility;
    j["lowConfidenceBalance"] = r.lowConfidenceBalance;

    ordered_json games = ordered_json::array();
    for (const GameRecord& g : r.roundOne.games) {
        games.push_back({{"unitMade", g.unitMade},
                         {"outcome", g.outcome},
                         {"aliveTicks", g.aliveTicks},
                         {"gameTicks", g.gameTicks}});
    }
    j["roundOne"] = {{"games", games}, {"madeGames", r.roundOne.made_games()}};
    j["roundTwo"] = {{"p1Wins", r.roundTwo.p1Wins},
                     {"p1Made", r.roundTwo.p1Made},
                     {"p2Made", r.roundTwo.p2Made}};
    return j.dump(2) + "\n";
}

std::string search_trace_to_json(const SearchTrace& t) {
    ordered_json j;
    ordered_json iterations = ordered_json::array();
    for (const SearchIteration& it : t.iterations) {
        ordered_json ij;
        ij["current"] = genome_json(it.current);
        ij["currentFitness"] = it.currentFitness;
        ij["neighborCount"] = it.neighborCount;
        ordered_json evals = ordered_json::array();
        for (const NeighborEval& e : it.evaluated) {
            evals.push_back({{"unit", genome_json(e.unit)},
                             {"fitness", e.fitness},
                             {"fromCache", e.fromCache}});
        }
        ij["evaluated"] = evals;
        if (it.chosen) ij["chosen"] = genome_json(*it.chosen);
        iterations.push_back(ij);
    }
    j["iterations"] = iterations;
    j["terminalUnit"] = genome_json(t.terminalUnit);
    j["totalGamesSimulated"] = t.totalGamesSimulated;
    j["iterationCapHit"] = t.iterationCapHit;
    if (t.error) j["error"] = *t.error;
    return j.dump(2) + "\n";
}

}  // namespace rtsgen
